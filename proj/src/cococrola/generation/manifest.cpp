#include "cococrola/generation/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "cococrola/error.hpp"
#include "cococrola/json_io.hpp"
#include "cococrola/text.hpp"

namespace cococrola::generation {

namespace fs = std::filesystem;
using io::Json;

std::string to_string(SeedPolicy p) { return p == SeedPolicy::fixed_base ? "fixed_base" : "per_image_sequential"; }

SeedPolicy parse_seed_policy(const std::string& s) {
  if (s == "fixed_base") return SeedPolicy::fixed_base;
  if (s == "per_image_sequential") return SeedPolicy::per_image_sequential;
  fail(ErrorKind::config, "unknown seed policy '" + s + "'");
}

std::uint64_t RunPlan::seed_for(std::uint32_t index) const {
  return seed_policy == SeedPolicy::per_image_sequential ? base_seed + index : base_seed;
}

std::string to_string(EntryStatus s) {
  switch (s) {
    case EntryStatus::pending: return "pending";
    case EntryStatus::ok: return "ok";
    case EntryStatus::failed: return "failed";
  }
  return "unknown";
}

EntryStatus parse_entry_status(const std::string& s) {
  if (s == "pending") return EntryStatus::pending;
  if (s == "ok") return EntryStatus::ok;
  if (s == "failed") return EntryStatus::failed;
  fail(ErrorKind::format, "unknown entry status '" + s + "'");
}

std::size_t RunManifest::count(EntryStatus s) const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [s](const auto& e) { return e.status == s; }));
}

RunPlan plan_run(const concepts::ConceptList& list, const PlanOptions& options) {
  if (options.images_per_concept < 2)
    fail(ErrorKind::config, "images per concept must be >= 2 (got " + std::to_string(options.images_per_concept) + ")");
  if (options.model_id.empty()) fail(ErrorKind::config, "model id is empty");
  if (list.rows.empty()) fail(ErrorKind::config, "concept list is empty");
  RunPlan plan;
  plan.model_id = options.model_id;
  plan.languages = options.languages.empty() ? list.languages : options.languages;
  if (plan.languages.empty()) fail(ErrorKind::config, "no languages to generate");
  for (const auto& lang : plan.languages)
    if (std::find(list.languages.begin(), list.languages.end(), lang) == list.languages.end())
      fail(ErrorKind::config, "language " + lang + " is not in the concept list");
  for (const auto& row : list.rows) plan.concept_ids.push_back(row.concept_id);
  plan.concept_list_version = list.version;
  plan.images_per_concept = options.images_per_concept;
  plan.variant_id = options.variant_id;
  plan.seed_policy = options.seed_policy;
  plan.base_seed = options.base_seed;
  plan.width = options.width;
  plan.height = options.height;
  return plan;
}

std::string path_component(const std::string& id) {
  std::string out;
  bool rewritten = id.empty() || id == "." || id == "..";
  for (unsigned char c : id) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('_');
      rewritten = true;
    }
  }
  if (rewritten) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(text::fnv1a64(id)));
    out += "-" + std::string(buf, 8);
  }
  return out;
}

std::string image_relative_path(const LanguageCode& lang, const std::string& concept_id, std::uint32_t index,
                                const std::string& ext) {
  return path_component(lang) + "/" + path_component(concept_id) + "/" + std::to_string(index) + "." + ext;
}

fs::path run_directory(const fs::path& runs_root, const std::string& model_id, const std::string& variant_id) {
  return runs_root / path_component(model_id) / path_component(variant_id);
}

RunManifest initial_manifest(const RunPlan& plan, const concepts::ConceptList& list,
                             const prompts::TemplateSet& templates) {
  RunManifest m;
  m.plan = plan;
  m.entries.reserve(plan.planned_images());
  for (const auto& lang : plan.languages) {
    const auto& tmpl = templates.get(lang, plan.variant_id);
    for (const auto& concept_id : plan.concept_ids) {
      const auto* row = list.find(concept_id);
      if (row == nullptr) fail(ErrorKind::config, "concept " + concept_id + " missing from concept list");
      std::string prompt = prompts::render_prompt(tmpl, *row).text;
      for (std::uint32_t i = 0; i < plan.images_per_concept; ++i) {
        ManifestEntry e;
        e.concept_id = concept_id;
        e.language = lang;
        e.index = i;
        e.prompt_text = prompt;
        e.seed = plan.seed_for(i);
        m.entries.push_back(std::move(e));
      }
    }
  }
  return m;
}

namespace {

Json plan_to_json(const RunPlan& p) {
  return {{"model_id", p.model_id},
          {"languages", p.languages},
          {"concept_ids", p.concept_ids},
          {"concept_list_version", p.concept_list_version},
          {"images_per_concept", p.images_per_concept},
          {"variant_id", p.variant_id},
          {"seed_policy", to_string(p.seed_policy)},
          {"base_seed", p.base_seed},
          {"width", p.width},
          {"height", p.height}};
}

RunPlan plan_from_json(const Json& j) {
  RunPlan p;
  p.model_id = j.at("model_id").get<std::string>();
  p.languages = j.at("languages").get<std::vector<std::string>>();
  p.concept_ids = j.at("concept_ids").get<std::vector<std::string>>();
  p.concept_list_version = j.at("concept_list_version").get<std::string>();
  p.images_per_concept = j.at("images_per_concept").get<std::uint32_t>();
  p.variant_id = j.at("variant_id").get<std::string>();
  p.seed_policy = parse_seed_policy(j.at("seed_policy").get<std::string>());
  p.base_seed = j.at("base_seed").get<std::uint64_t>();
  p.width = j.at("width").get<std::uint32_t>();
  p.height = j.at("height").get<std::uint32_t>();
  return p;
}

}  // namespace

void write_manifest(const fs::path& path, const RunManifest& m) {
  Json entries = Json::array();
  for (const auto& e : m.entries) {
    Json je = {{"concept_id", e.concept_id}, {"language", e.language}, {"index", e.index},
               {"prompt_text", e.prompt_text}, {"seed", e.seed},         {"status", to_string(e.status)},
               {"attempts", e.attempts}};
    je["image_path"] = e.image_path.empty() ? Json(nullptr) : Json(e.image_path);
    if (!e.error.empty()) je["error"] = e.error;
    entries.push_back(std::move(je));
  }
  Json j = {{"schema_version", kManifestSchemaVersion},
            {"tool_version", m.tool_version},
            {"created_at", m.created_at},
            {"complete", m.complete},
            {"degraded", m.degraded},
            {"counts", {{"planned", m.plan.planned_images()}, {"ok", m.count(EntryStatus::ok)},
                        {"failed", m.count(EntryStatus::failed)}, {"pending", m.count(EntryStatus::pending)}}},
            {"plan", plan_to_json(m.plan)},
            {"entries", entries}};
  io::write_json_atomic(path, j);
}

RunManifest read_manifest(const fs::path& path) {
  Json j = io::read_json(path);
  try {
    int version = j.at("schema_version").get<int>();
    if (version != kManifestSchemaVersion)
      fail(ErrorKind::format, path.string() + ": unsupported manifest schema version " + std::to_string(version));
    RunManifest m;
    m.plan = plan_from_json(j.at("plan"));
    m.tool_version = j.value("tool_version", "");
    m.created_at = j.value("created_at", "");
    m.complete = j.value("complete", false);
    m.degraded = j.value("degraded", false);
    for (const auto& je : j.at("entries")) {
      ManifestEntry e;
      e.concept_id = je.at("concept_id").get<std::string>();
      e.language = je.at("language").get<std::string>();
      e.index = je.at("index").get<std::uint32_t>();
      e.prompt_text = je.at("prompt_text").get<std::string>();
      e.seed = je.at("seed").get<std::uint64_t>();
      e.status = parse_entry_status(je.at("status").get<std::string>());
      e.attempts = je.value("attempts", 0);
      if (je.contains("image_path") && je["image_path"].is_string()) e.image_path = je["image_path"].get<std::string>();
      e.error = je.value("error", "");
      m.entries.push_back(std::move(e));
    }
    return m;
  } catch (const Json::exception& e) {
    fail(ErrorKind::format, path.string() + ": malformed manifest: " + e.what());
  }
}

}  // namespace cococrola::generation
