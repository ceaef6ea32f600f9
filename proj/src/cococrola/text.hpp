#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cococrola::text {

// Unicode helpers (ICU-backed). Inputs must be UTF-8; invalid sequences are
// replaced with U+FFFD by the conversion.
std::string nfc(std::string_view s);
std::string trim(std::string_view s);
std::string lower(std::string_view s);
std::string casefold(std::string_view s);

// NFC + trim; the canonical form for every stored surface.
std::string normalize_surface(std::string_view s);

// Surfaces compare equal when their NFC case-folded forms match. Scripts
// without case (Han, Kana, Hebrew) fold to themselves.
bool surfaces_agree(std::string_view a, std::string_view b);

// ASCII slug for identifiers and file names: lowercase alphanumerics, runs of
// anything else collapse to a single '-'.
std::string slug(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

// Shortest round-trip decimal representation.
std::string format_double(double v);
// Fixed number of decimals.
std::string format_fixed(double v, int decimals);

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string sha256_hex(std::string_view bytes);

std::string escape_html(std::string_view s);

}  // namespace cococrola::text
