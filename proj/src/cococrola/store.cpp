#include "cococrola/store.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>

#include "cococrola/error.hpp"
#include "cococrola/json_io.hpp"

namespace cococrola::store {

namespace fs = std::filesystem;
using Reason = FormatError::Reason;

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
}

double norm_of(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

void check_norms(const VectorBlock& block, auto&& key_name) {
  for (std::size_t i = 0; i < block.size(); ++i) {
    double n = norm_of(block.row(i));
    if (!(std::abs(n - 1.0) <= kNormTolerance))
      throw FormatError(Reason::norm_violation,
                        "norm violation at " + key_name(i) + ": |v| = " + std::to_string(n));
  }
}

std::string describe(const ImageKey& k) {
  return k.concept_id + "/" + k.language + "/" + std::to_string(k.index);
}

}  // namespace

VectorBlock::VectorBlock(std::size_t dim, std::vector<float> data) : dim_(dim), data_(std::move(data)) {
  if (dim_ == 0) throw FormatError(Reason::invalid_set, "embedding dim must be positive");
  if (data_.size() % dim_ != 0) throw FormatError(Reason::invalid_set, "data length is not a multiple of dim");
}

void VectorBlock::push_back(std::span<const float> v) {
  if (dim_ == 0) dim_ = v.size();
  if (v.size() != dim_ || dim_ == 0) throw FormatError(Reason::invalid_set, "vector dim mismatch");
  data_.insert(data_.end(), v.begin(), v.end());
}

fs::path sidecar_path(const fs::path& path) {
  fs::path p = path;
  p += ".keys.json";
  return p;
}

void validate(const EmbeddingSet& set) {
  if (set.dim() == 0) throw FormatError(Reason::invalid_set, "embedding dim must be positive");
  if (set.vectors.size() != set.keys.size())
    throw FormatError(Reason::key_mismatch, "key count " + std::to_string(set.keys.size()) +
                                                " != vector count " + std::to_string(set.vectors.size()));
  std::set<ImageKey> seen;
  for (const auto& k : set.keys)
    if (!seen.insert(k).second) throw FormatError(Reason::key_mismatch, "duplicate key " + describe(k));
  check_norms(set.vectors, [&](std::size_t i) { return describe(set.keys[i]); });
}

void validate(const TextEmbeddingSet& set) {
  if (set.dim() == 0) throw FormatError(Reason::invalid_set, "embedding dim must be positive");
  if (set.vectors.size() != set.keys.size())
    throw FormatError(Reason::key_mismatch, "key count " + std::to_string(set.keys.size()) +
                                                " != vector count " + std::to_string(set.vectors.size()));
  std::set<std::string> seen;
  for (const auto& k : set.keys)
    if (!seen.insert(k).second) throw FormatError(Reason::key_mismatch, "duplicate key " + k);
  check_norms(set.vectors, [&](std::size_t i) { return set.keys[i]; });
}

std::string encode_matrix(const VectorBlock& block) {
  static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);
  std::string out;
  out.reserve(kHeaderBytes + block.data().size() * 4);
  out.append(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(block.size()));
  put_u32(out, static_cast<std::uint32_t>(block.dim()));
  for (float f : block.data()) put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

VectorBlock decode_matrix(std::string_view bytes, const std::string& origin) {
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw FormatError(Reason::bad_magic, origin + ": bad magic");
  if (bytes.size() < kHeaderBytes) throw FormatError(Reason::truncated, origin + ": truncated header");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  std::uint64_t count = get_u32(p + 8);
  std::uint64_t dim = get_u32(p + 12);
  if (dim == 0) throw FormatError(Reason::invalid_set, origin + ": dim is zero");
  std::uint64_t expected = kHeaderBytes + count * dim * 4;
  if (bytes.size() < expected)
    throw FormatError(Reason::truncated, origin + ": truncated (" + std::to_string(bytes.size()) + " bytes, header declares " +
                                             std::to_string(expected) + ")");
  if (bytes.size() > expected)
    throw FormatError(Reason::size_mismatch, origin + ": " + std::to_string(bytes.size() - expected) + " trailing bytes");
  std::vector<float> data(count * dim);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = std::bit_cast<float>(get_u32(p + kHeaderBytes + 4 * i));
  return VectorBlock(dim, std::move(data));
}

void write_embeddings(const EmbeddingSet& set, const fs::path& path) {
  validate(set);
  io::Json keys = io::Json::array();
  for (const auto& k : set.keys) keys.push_back({{"concept_id", k.concept_id}, {"language", k.language}, {"index", k.index}});
  io::write_file_atomic(path, encode_matrix(set.vectors));
  io::write_json_atomic(sidecar_path(path), keys);
}

EmbeddingSet read_embeddings(const fs::path& path) {
  EmbeddingSet set;
  set.vectors = decode_matrix(io::read_file(path), path.string());
  io::Json keys;
  try {
    keys = io::read_json(sidecar_path(path));
  } catch (const Error& e) {
    throw FormatError(Reason::bad_sidecar, e.what());
  }
  if (!keys.is_array()) throw FormatError(Reason::bad_sidecar, sidecar_path(path).string() + ": expected a JSON array");
  try {
    for (const auto& k : keys)
      set.keys.push_back({k.at("concept_id").get<std::string>(), k.at("language").get<std::string>(),
                          k.at("index").get<std::uint32_t>()});
  } catch (const io::Json::exception& e) {
    throw FormatError(Reason::bad_sidecar, sidecar_path(path).string() + ": " + e.what());
  }
  try {
    validate(set);
  } catch (const FormatError& e) {
    throw FormatError(e.reason(), path.string() + ": " + e.what());
  }
  return set;
}

void write_text_embeddings(const TextEmbeddingSet& set, const fs::path& path) {
  validate(set);
  io::write_file_atomic(path, encode_matrix(set.vectors));
  io::write_json_atomic(sidecar_path(path), io::Json(set.keys));
}

TextEmbeddingSet read_text_embeddings(const fs::path& path) {
  TextEmbeddingSet set;
  set.vectors = decode_matrix(io::read_file(path), path.string());
  io::Json keys;
  try {
    keys = io::read_json(sidecar_path(path));
    set.keys = keys.get<std::vector<std::string>>();
  } catch (const Error& e) {
    throw FormatError(Reason::bad_sidecar, e.what());
  } catch (const io::Json::exception& e) {
    throw FormatError(Reason::bad_sidecar, sidecar_path(path).string() + ": " + e.what());
  }
  try {
    validate(set);
  } catch (const FormatError& e) {
    throw FormatError(e.reason(), path.string() + ": " + e.what());
  }
  return set;
}

void normalize(std::span<float> v) {
  double n = norm_of(v);
  if (n == 0.0) fail(ErrorKind::invalid_argument, "cannot normalize a zero vector");
  for (float& x : v) x = static_cast<float>(x / n);
}

}  // namespace cococrola::store
