#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cococrola/concepts/types.hpp"
#include "cococrola/prompts.hpp"

namespace cococrola::generation {

using concepts::LanguageCode;

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr double kDegradedFailureFraction = 0.2;

enum class SeedPolicy { fixed_base, per_image_sequential };
std::string to_string(SeedPolicy p);
SeedPolicy parse_seed_policy(const std::string& s);

struct RunPlan {
  std::string model_id;
  std::vector<LanguageCode> languages;
  std::vector<std::string> concept_ids;
  std::string concept_list_version;
  std::uint32_t images_per_concept = 10;
  std::string variant_id = "default";
  SeedPolicy seed_policy = SeedPolicy::per_image_sequential;
  std::uint64_t base_seed = 0;
  std::uint32_t width = 512;
  std::uint32_t height = 512;

  std::size_t planned_images() const { return languages.size() * concept_ids.size() * images_per_concept; }
  std::uint64_t seed_for(std::uint32_t index) const;
  friend bool operator==(const RunPlan&, const RunPlan&) = default;
};

struct PlanOptions {
  std::string model_id;
  std::vector<LanguageCode> languages;  // empty: every language of the list
  std::uint32_t images_per_concept = 10;
  std::string variant_id = "default";
  SeedPolicy seed_policy = SeedPolicy::per_image_sequential;
  std::uint64_t base_seed = 0;
  std::uint32_t width = 512;
  std::uint32_t height = 512;
};

RunPlan plan_run(const concepts::ConceptList& list, const PlanOptions& options);

enum class EntryStatus { pending, ok, failed };
std::string to_string(EntryStatus s);
EntryStatus parse_entry_status(const std::string& s);

struct ManifestEntry {
  std::string concept_id;
  LanguageCode language;
  std::uint32_t index = 0;
  std::string prompt_text;
  std::uint64_t seed = 0;
  std::string image_path;  // relative to the run directory; set once ok
  EntryStatus status = EntryStatus::pending;
  int attempts = 0;
  std::string error;
};

struct RunManifest {
  RunPlan plan;
  std::vector<ManifestEntry> entries;
  std::string created_at;
  std::string tool_version;
  bool complete = false;
  bool degraded = false;

  std::size_t count(EntryStatus s) const;
};

// Path-safe directory component; ids that needed rewriting get a hash suffix
// so distinct ids never share a directory.
std::string path_component(const std::string& id);

// `<lang>/<concept>/<i>.<ext>` relative to the run directory.
std::string image_relative_path(const LanguageCode& lang, const std::string& concept_id, std::uint32_t index,
                                const std::string& ext);

// `<runs_root>/<model>/<variant>`.
std::filesystem::path run_directory(const std::filesystem::path& runs_root, const std::string& model_id,
                                    const std::string& variant_id);

inline std::filesystem::path manifest_path(const std::filesystem::path& run_dir) { return run_dir / "manifest.json"; }

// Pending entries in (language, concept, index) order with rendered prompts.
RunManifest initial_manifest(const RunPlan& plan, const concepts::ConceptList& list,
                             const prompts::TemplateSet& templates);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace cococrola::generation
