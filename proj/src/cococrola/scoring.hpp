#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cococrola/generation/manifest.hpp"
#include "cococrola/metrics.hpp"
#include "cococrola/store.hpp"

namespace cococrola::scoring {

// Raw scores in [-1, 1]. dt is absent when the language has no other concept
// to compare against; xc is absent when the concept has no usable
// source-language population.
struct ConceptScores {
  std::string model_id;
  std::string language;
  std::string concept_id;
  std::optional<double> dt;
  double sc = 0.0;
  std::optional<double> xc;
  double wc = 0.0;
  std::size_t n_effective = 0;
  std::optional<bool> possessed;
};

struct ScoreTable {
  std::vector<ConceptScores> rows;

  bool empty() const { return rows.empty(); }
};

inline const char* const kCsvHeader = "model,language,concept,dt,sc,xc,wc,n_effective,possessed";

std::string to_csv(const ScoreTable& table);
ScoreTable parse_csv(const std::string& body, const std::string& origin);
std::string to_json(const ScoreTable& table);
ScoreTable parse_json(const std::string& body, const std::string& origin);

void write_score_table(const std::filesystem::path& csv_path, const ScoreTable& table);  // also writes .json
ScoreTable read_score_table(const std::filesystem::path& path);  // .csv or .json by extension

struct ScoreOptions {
  std::string source_language = "en";
  metrics::DtConfig dt;
  metrics::PossessionThresholds thresholds;
  bool renormalize_wc = false;
  std::size_t threads = 1;
};

using PopulationKey = std::pair<std::string, std::string>;  // (concept_id, language)

// Scores every (concept, language) population with at least two images.
// `populations` holds only usable vectors; rows come out sorted by
// (language, concept).
ScoreTable score_populations(const std::string& model_id, const std::map<PopulationKey, store::VectorBlock>& populations,
                             const store::TextEmbeddingSet& text, const ScoreOptions& options,
                             std::vector<std::string>* warnings = nullptr);

// Selects the vectors of ok manifest entries from `embeddings` and scores
// them. Failed entries only lower n_effective. Throws if an ok entry has no
// embedding or the source language is not part of the run.
ScoreTable score_run(const generation::RunManifest& manifest, const std::vector<store::EmbeddingSet>& embeddings,
                     const store::TextEmbeddingSet& text, const ScoreOptions& options,
                     std::vector<std::string>* warnings = nullptr);

}  // namespace cococrola::scoring
