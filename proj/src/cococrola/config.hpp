#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cococrola/concepts/pipeline.hpp"
#include "cococrola/generation/manifest.hpp"
#include "cococrola/metrics.hpp"

namespace cococrola::config {

struct FrequencyListConfig {
  concepts::TermSource source = concepts::TermSource::tv_captions;
  std::filesystem::path path;
};

struct ServiceConfig {
  std::string id;
  std::string endpoint;
  std::string api_key_env;
};

struct ConceptsConfig {
  std::vector<FrequencyListConfig> frequency_lists;
  std::optional<std::filesystem::path> label_set;
  std::optional<std::filesystem::path> denylist;
  std::size_t top_k = 2000;
  std::string version_tag = "1.0";
  std::size_t max_in_flight = 4;
  std::vector<ServiceConfig> services;  // listed in priority order
  std::optional<ServiceConfig> synsets;
  std::filesystem::path out = "concepts.tsv";
};

struct AdapterConfig {
  std::string url;
  int max_concurrency = 2;
  bool accepts_seed = true;
  std::chrono::milliseconds timeout{120000};
  std::string api_key_env;
};

struct GenerationConfig {
  std::filesystem::path runs_dir = "runs";
  std::string model;
  std::string variant = "default";
  std::uint32_t images_per_concept = 10;
  generation::SeedPolicy seed_policy = generation::SeedPolicy::per_image_sequential;
  std::uint64_t base_seed = 0;
  std::uint32_t width = 512;
  std::uint32_t height = 512;
  std::size_t batch_size = 16;
  int max_retries = 2;
  AdapterConfig adapter;
};

struct ScoringConfig {
  metrics::DtConfig dt;
  metrics::PossessionThresholds thresholds;
  bool renormalize_wc = false;
  std::size_t threads = 1;
};

struct ReportConfig {
  std::size_t histogram_bins = 20;
  std::size_t rank_k = 5;
  std::optional<std::vector<std::pair<std::string, std::string>>> scatter_pairs;
};

struct Config {
  std::filesystem::path base_dir;  // relative paths resolve against this
  std::vector<concepts::LanguageCode> languages;
  concepts::LanguageCode source_language = "en";
  std::filesystem::path templates = "templates.json";
  std::string embedder_command;
  ConceptsConfig concepts;
  GenerationConfig generation;
  ScoringConfig scoring;
  ReportConfig report;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

// Language codes are lowercase ISO 639 letters (2 or 3).
bool valid_language_code(const std::string& code);

// Parses and validates; throws ErrorKind::config with the offending key.
Config parse_config(const std::string& json_body, const std::filesystem::path& base_dir);
Config load_config(const std::filesystem::path& path);

}  // namespace cococrola::config
