#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>

#include "cococrola/store.hpp"

namespace cococrola::metrics {

using store::VectorBlock;

// a.b / (|a||b|), clamped to [-1, 1]. Throws on zero norm or dim mismatch.
double cosine(std::span<const float> a, std::span<const float> b);
double cosine(std::span<const double> a, std::span<const double> b);

// Mean pairwise similarity inside one population with the n self-matches
// removed: (1/(n^2-n)) * sum_j (sum_i sim(e_i, e_j) - 1). Requires n >= 2.
double self_consistency(const VectorBlock& images);

// Mean similarity over all (target, source) pairs, normalized by the actual
// set sizes n_t * n_s.
double cross_consistency(const VectorBlock& target, const VectorBlock& source);

// Mean text.image over the population. With unit-norm storage this is the
// mean cosine; `renormalize` switches to explicit cosine for raw vectors.
double word_correctness(std::span<const float> text, const VectorBlock& images, bool renormalize = false);
// Same, for a query vector held in double precision (exact decimal inputs).
double word_correctness(std::span<const double> text, const VectorBlock& images, bool renormalize = false);

struct DtConfig {
  enum class Mode { sampled, exhaustive };
  Mode mode = Mode::sampled;
  // Number of draws; unset means default_dt_samples(pool size).
  std::optional<std::size_t> samples;
  std::uint64_t rng_seed = 0;

  static DtConfig exhaustive() { return {Mode::exhaustive, std::nullopt, 0}; }
  static DtConfig sampled(std::size_t m, std::uint64_t seed) { return {Mode::sampled, m, seed}; }
};

// 10 draws per pooled concept, capped at 1000.
std::size_t default_dt_samples(std::size_t pool_concepts);

struct PoolEntry {
  std::string concept_id;
  const VectorBlock* images = nullptr;
};

// Inverse distinctiveness: mean similarity of `images` to images drawn from
// other concepts of the same language. Sampled mode draws a concept
// uniformly, then an image uniformly, with replacement. Exhaustive mode
// averages over every pooled image once.
double inverse_distinctiveness(const VectorBlock& images, std::span<const PoolEntry> pool, const DtConfig& cfg);

// Draws a uniform index in [0, n) from a 64-bit engine by rejection, so
// results do not depend on the standard library's distribution classes.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

enum class PossessionRule {
  // Not possessed only when both scores fall below their thresholds.
  either,
  // Possessed only when both scores reach their thresholds.
  both,
};

struct PossessionThresholds {
  double xc = 0.5;
  double wc = 0.25;  // raw scale; printed tables show 25
  PossessionRule rule = PossessionRule::either;
};

struct PossessionStatus {
  bool possessed = false;
  double xc_threshold = 0.5;
  double wc_threshold = 0.25;
};

// Thresholds are inclusive on the possessed side.
PossessionStatus classify_possession(double xc, double wc, const PossessionThresholds& thresholds = {});

std::string to_string(PossessionRule rule);
PossessionRule parse_possession_rule(const std::string& s);

}  // namespace cococrola::metrics
