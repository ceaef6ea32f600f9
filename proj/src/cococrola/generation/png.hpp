#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace cococrola::generation {

// Encodes 8-bit RGB pixels (row-major, width*height*3 bytes) as a PNG.
std::string encode_png_rgb(std::span<const std::uint8_t> pixels, std::uint32_t width, std::uint32_t height);

}  // namespace cococrola::generation
