#include "cococrola/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cococrola/error.hpp"

namespace cococrola::metrics {

namespace {

template <class A, class B>
double cosine_of(std::span<const A> a, std::span<const B> b) {
  if (a.size() != b.size())
    fail(ErrorKind::invalid_argument, "cosine: dim mismatch " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double x = a[i], y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) fail(ErrorKind::invalid_argument, "cosine: zero-norm input");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

template <class T>
double word_correctness_of(std::span<const T> text, const VectorBlock& images, bool renormalize) {
  if (images.empty()) fail(ErrorKind::invalid_argument, "word correctness: empty image set");
  if (text.size() != images.dim())
    fail(ErrorKind::invalid_argument, "word correctness: text dim " + std::to_string(text.size()) + " != image dim " +
                                          std::to_string(images.dim()));
  double total = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (renormalize) {
      total += cosine_of(text, images.row(i));
    } else {
      auto row = images.row(i);
      double dot = 0.0;
      for (std::size_t d = 0; d < text.size(); ++d) dot += static_cast<double>(text[d]) * row[d];
      total += dot;
    }
  }
  return total / static_cast<double>(images.size());
}

}  // namespace

double cosine(std::span<const float> a, std::span<const float> b) { return cosine_of(a, b); }
double cosine(std::span<const double> a, std::span<const double> b) { return cosine_of(a, b); }

double self_consistency(const VectorBlock& images) {
  const std::size_t n = images.size();
  if (n < 2) fail(ErrorKind::invalid_argument, "self-consistency needs at least 2 images, got " + std::to_string(n));
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double column = 0.0;
    for (std::size_t i = 0; i < n; ++i) column += cosine(images.row(i), images.row(j));
    total += column - 1.0;
  }
  return total / static_cast<double>(n * n - n);
}

double cross_consistency(const VectorBlock& target, const VectorBlock& source) {
  if (target.empty() || source.empty()) fail(ErrorKind::invalid_argument, "cross-consistency: empty image set");
  if (target.dim() != source.dim()) fail(ErrorKind::invalid_argument, "cross-consistency: dim mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < source.size(); ++j)
    for (std::size_t i = 0; i < target.size(); ++i) total += cosine(target.row(i), source.row(j));
  return total / static_cast<double>(target.size() * source.size());
}

double word_correctness(std::span<const float> text, const VectorBlock& images, bool renormalize) {
  return word_correctness_of(text, images, renormalize);
}

double word_correctness(std::span<const double> text, const VectorBlock& images, bool renormalize) {
  return word_correctness_of(text, images, renormalize);
}

std::size_t default_dt_samples(std::size_t pool_concepts) { return std::min<std::size_t>(10 * pool_concepts, 1000); }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) fail(ErrorKind::invalid_argument, "uniform_index: empty range");
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

namespace {

// Mean similarity of every image in `images` to one probe vector.
double mean_similarity_to(const VectorBlock& images, std::span<const float> probe) {
  double s = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) s += cosine(images.row(i), probe);
  return s / static_cast<double>(images.size());
}

}  // namespace

double inverse_distinctiveness(const VectorBlock& images, std::span<const PoolEntry> pool, const DtConfig& cfg) {
  if (images.empty()) fail(ErrorKind::invalid_argument, "distinctiveness: empty image set");
  if (pool.empty()) fail(ErrorKind::invalid_argument, "distinctiveness: empty comparison pool");
  for (const auto& entry : pool) {
    if (entry.images == nullptr || entry.images->empty())
      fail(ErrorKind::invalid_argument, "distinctiveness: pool concept '" + entry.concept_id + "' has no images");
    if (entry.images->dim() != images.dim()) fail(ErrorKind::invalid_argument, "distinctiveness: dim mismatch");
  }

  // Per pooled image, the mean similarity to all of `images`.
  std::vector<std::vector<double>> probe_means(pool.size());
  for (std::size_t c = 0; c < pool.size(); ++c) {
    const VectorBlock& other = *pool[c].images;
    probe_means[c].reserve(other.size());
    for (std::size_t s = 0; s < other.size(); ++s) probe_means[c].push_back(mean_similarity_to(images, other.row(s)));
  }

  if (cfg.mode == DtConfig::Mode::exhaustive) {
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& means : probe_means)
      for (double v : means) {
        total += v;
        ++count;
      }
    return total / static_cast<double>(count);
  }

  const std::size_t m = cfg.samples.value_or(default_dt_samples(pool.size()));
  if (m == 0) fail(ErrorKind::invalid_argument, "distinctiveness: sample count must be >= 1");
  std::mt19937_64 rng(cfg.rng_seed);
  double total = 0.0;
  for (std::size_t draw = 0; draw < m; ++draw) {
    std::size_t c = uniform_index(rng, pool.size());
    std::size_t s = uniform_index(rng, probe_means[c].size());
    total += probe_means[c][s];
  }
  return total / static_cast<double>(m);
}

PossessionStatus classify_possession(double xc, double wc, const PossessionThresholds& t) {
  const bool xc_ok = xc >= t.xc;
  const bool wc_ok = wc >= t.wc;
  const bool possessed = t.rule == PossessionRule::either ? (xc_ok || wc_ok) : (xc_ok && wc_ok);
  return {possessed, t.xc, t.wc};
}

std::string to_string(PossessionRule rule) { return rule == PossessionRule::either ? "either" : "both"; }

PossessionRule parse_possession_rule(const std::string& s) {
  if (s == "either") return PossessionRule::either;
  if (s == "both") return PossessionRule::both;
  fail(ErrorKind::config, "unknown possession rule '" + s + "' (expected 'either' or 'both')");
}

}  // namespace cococrola::metrics
