#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cococrola::store {

// On-disk layout shared with the external embedder:
//
//   "CCRLEMB1" | u32-LE count | u32-LE dim | count*dim f32-LE, row-major
//
// plus `<path>.keys.json` holding the key list in row order.
inline constexpr char kMagic[8] = {'C', 'C', 'R', 'L', 'E', 'M', 'B', '1'};
inline constexpr std::size_t kHeaderBytes = 16;
inline constexpr double kNormTolerance = 1e-3;

struct ImageKey {
  std::string concept_id;
  std::string language;
  std::uint32_t index = 0;

  friend bool operator==(const ImageKey&, const ImageKey&) = default;
  friend auto operator<=>(const ImageKey&, const ImageKey&) = default;
};

// Row-major matrix of unit-norm f32 vectors.
class VectorBlock {
 public:
  VectorBlock() = default;
  VectorBlock(std::size_t dim, std::vector<float> data);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const noexcept { return size() == 0; }
  std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<const float> data() const noexcept { return data_; }

  void push_back(std::span<const float> v);

  friend bool operator==(const VectorBlock&, const VectorBlock&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<float> data_;
};

struct EmbeddingSet {
  VectorBlock vectors;
  std::vector<ImageKey> keys;

  std::size_t size() const noexcept { return keys.size(); }
  std::size_t dim() const noexcept { return vectors.dim(); }
  friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;
};

// One vector per concept, keyed by concept_id (source-language text).
struct TextEmbeddingSet {
  VectorBlock vectors;
  std::vector<std::string> keys;

  std::size_t size() const noexcept { return keys.size(); }
  std::size_t dim() const noexcept { return vectors.dim(); }
  friend bool operator==(const TextEmbeddingSet&, const TextEmbeddingSet&) = default;
};

std::filesystem::path sidecar_path(const std::filesystem::path& path);

// Invariant checks; throw FormatError naming the offending key.
void validate(const EmbeddingSet& set);
void validate(const TextEmbeddingSet& set);

void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);
EmbeddingSet read_embeddings(const std::filesystem::path& path);

void write_text_embeddings(const TextEmbeddingSet& set, const std::filesystem::path& path);
TextEmbeddingSet read_text_embeddings(const std::filesystem::path& path);

// Binary part only, no sidecar. Exposed for tests and the C API.
std::string encode_matrix(const VectorBlock& block);
VectorBlock decode_matrix(std::string_view bytes, const std::string& origin);

// L2-normalize in place; throws on a zero vector.
void normalize(std::span<float> v);

}  // namespace cococrola::store
