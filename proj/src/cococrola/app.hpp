#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cococrola/concepts/types.hpp"
#include "cococrola/config.hpp"
#include "cococrola/report/emit.hpp"

// Subcommand drivers: wire config, files and modules together. Each returns a
// summary and throws cococrola::Error on failure.
namespace cococrola::app {

using Log = std::function<void(const std::string&)>;

std::string tool_version();

struct BuildConceptsOptions {
  std::optional<std::filesystem::path> fixtures;  // replay recorded service responses
  std::optional<std::filesystem::path> denylist;
  std::optional<std::filesystem::path> out;
};

struct BuildConceptsSummary {
  std::filesystem::path out;
  std::size_t rows = 0;
  std::size_t input_terms = 0;
  std::map<concepts::DiscardReason, std::size_t> discards;
  std::string version;
};

BuildConceptsSummary build_concepts(const config::Config& cfg, const BuildConceptsOptions& options, const Log& log);

struct GenerateOptions {
  std::string model;  // falls back to generation.model
  std::optional<std::string> adapter_url;
  bool stub = false;
  std::optional<std::uint32_t> images_per_concept;
  bool resume = false;
  std::optional<std::string> variant;
  std::optional<std::filesystem::path> concepts;
  std::vector<std::string> languages;  // subset; empty means all configured
  std::optional<std::size_t> limit_concepts;  // first k concepts of the list
  const std::atomic<bool>* stop_flag = nullptr;
};

struct GenerateSummary {
  std::filesystem::path run_dir;
  std::size_t ok = 0;
  std::size_t failed = 0;
  std::size_t pending = 0;
  bool complete = false;
  bool degraded = false;
};

GenerateSummary generate(const config::Config& cfg, const GenerateOptions& options, const Log& log);

struct EmbedOptions {
  std::filesystem::path run_dir;
  std::string embedder_command;  // falls back to embedder_command in the config
  std::optional<std::filesystem::path> concepts;
  std::optional<std::string> source_language;
};

struct EmbedSummary {
  std::vector<std::filesystem::path> image_files;
  std::filesystem::path text_file;
  std::filesystem::path index;
};

EmbedSummary embed(const config::Config& cfg, const EmbedOptions& options, const Log& log);

struct ScoreOptions {
  std::filesystem::path run_dir;
  std::optional<std::string> source_language;
  std::optional<std::string> dt_mode;
  std::optional<std::filesystem::path> out;  // default <run>/scores.csv
};

struct ScoreSummary {
  std::filesystem::path csv;
  std::filesystem::path json;
  std::size_t rows = 0;
  std::vector<std::string> warnings;
};

ScoreSummary score(const config::Config& cfg, const ScoreOptions& options, const Log& log);

struct ReportOptions {
  std::vector<std::filesystem::path> tables;  // one, or two for an ablation diff
  std::set<report::Format> formats;
  std::filesystem::path out_dir;
};

struct ReportSummary {
  std::vector<std::filesystem::path> files;
};

ReportSummary make_report(const config::Config& cfg, const ReportOptions& options, const Log& log);

// Runs `command` through the shell and returns its standard output. Throws a
// pipeline error on a nonzero exit status.
std::string run_child(const std::string& command);
std::string shell_quote(const std::string& arg);

}  // namespace cococrola::app
