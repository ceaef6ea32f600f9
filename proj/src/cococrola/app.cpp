#include "cococrola/app.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <memory>
#include <thread>

#include "cococrola/concepts/concept_list.hpp"
#include "cococrola/concepts/pipeline.hpp"
#include "cococrola/error.hpp"
#include "cococrola/generation/orchestrator.hpp"
#include "cococrola/json_io.hpp"
#include "cococrola/prompts.hpp"
#include "cococrola/scoring.hpp"
#include "cococrola/store.hpp"
#include "cococrola/text.hpp"

#ifndef COCOCROLA_VERSION_STRING
#define COCOCROLA_VERSION_STRING "0.0.0"
#endif

namespace cococrola::app {

namespace fs = std::filesystem;
using io::Json;

namespace {

constexpr const char* kIndexFile = "index.json";

std::string read_input(const fs::path& path, const std::string& what) {
  if (!fs::exists(path)) fail(ErrorKind::config, what + " not found: " + path.string());
  return io::read_file(path);
}

fs::path concept_list_path(const config::Config& cfg, const std::optional<fs::path>& override_path) {
  return override_path ? *override_path : cfg.resolve(cfg.concepts.out);
}

fs::path require_run(const fs::path& run_dir) {
  if (run_dir.empty()) fail(ErrorKind::config, "no run directory given");
  if (!fs::exists(generation::manifest_path(run_dir)))
    fail(ErrorKind::config, "no run at " + run_dir.string() + " (manifest.json missing)");
  return run_dir;
}

// Stores paths relative to `base` when they live below it.
std::string relative_to(const fs::path& p, const fs::path& base) {
  fs::path abs = fs::weakly_canonical(fs::absolute(p));
  fs::path root = fs::weakly_canonical(fs::absolute(base));
  fs::path rel = abs.lexically_relative(root);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return abs.generic_string();
}

fs::path from_index(const std::string& p, const fs::path& base) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::string tool_version() { return COCOCROLA_VERSION_STRING; }

BuildConceptsSummary build_concepts(const config::Config& cfg, const BuildConceptsOptions& options, const Log& log) {
  const auto& cc = cfg.concepts;
  if (cc.frequency_lists.empty()) fail(ErrorKind::config, "config: concepts.frequency_lists is empty");

  concepts::PipelineInputs inputs;
  for (const auto& fl : cc.frequency_lists)
    inputs.frequency_lists.push_back({fl.source, read_input(cfg.resolve(fl.path), "frequency list")});
  if (cc.label_set) inputs.label_set = concepts::read_term_file(read_input(cfg.resolve(*cc.label_set), "label set"));
  if (options.denylist) {
    inputs.denylist = concepts::read_term_file(read_input(*options.denylist, "denylist"));
  } else if (cc.denylist) {
    inputs.denylist = concepts::read_term_file(read_input(cfg.resolve(*cc.denylist), "denylist"));
  }

  concepts::PipelineSettings settings;
  settings.languages = cfg.languages;
  settings.source_language = cfg.source_language;
  settings.top_k = cc.top_k;
  settings.version_tag = cc.version_tag;
  settings.max_in_flight = cc.max_in_flight;

  std::vector<std::unique_ptr<concepts::TranslationClient>> owned;
  std::unique_ptr<concepts::SynsetClient> synsets;
  std::vector<std::string> service_ids;
  for (const auto& s : cc.services) service_ids.push_back(s.id);

  if (options.fixtures) {
    const fs::path translations = *options.fixtures / "translations";
    if (!fs::is_directory(translations)) fail(ErrorKind::config, "fixtures: missing directory " + translations.string());
    if (service_ids.empty()) {
      for (const auto& entry : fs::directory_iterator(translations))
        if (entry.is_directory()) service_ids.push_back(entry.path().filename().string());
      std::sort(service_ids.begin(), service_ids.end());
    }
    for (const auto& id : service_ids) owned.push_back(std::make_unique<concepts::FixtureTranslationClient>(id, translations));
    synsets = std::make_unique<concepts::FixtureSynsetClient>(*options.fixtures / "synsets");
    log("replaying fixtures from " + options.fixtures->string());
  } else {
    for (const auto& s : cc.services) {
      if (s.endpoint.empty()) fail(ErrorKind::config, "config: service '" + s.id + "' has no endpoint (use --fixtures to replay)");
      owned.push_back(std::make_unique<concepts::HttpTranslationClient>(concepts::HttpServiceConfig{s.id, s.endpoint, s.api_key_env}));
    }
    if (!cc.synsets || cc.synsets->endpoint.empty())
      fail(ErrorKind::config, "config: concepts.synsets.endpoint is required without --fixtures");
    synsets = std::make_unique<concepts::HttpSynsetClient>(cc.synsets->endpoint, cc.synsets->api_key_env,
                                                           std::chrono::milliseconds(15000));
  }
  if (owned.empty()) fail(ErrorKind::config, "config: no translation services configured");
  settings.service_priority = service_ids;

  std::vector<concepts::TranslationClient*> clients;
  for (auto& c : owned) clients.push_back(c.get());

  auto result = concepts::run_concept_pipeline(inputs, settings, clients, *synsets);
  const fs::path out = options.out ? *options.out : cfg.resolve(cc.out);
  concepts::write_concept_list(out, result.list, result.meta);

  BuildConceptsSummary summary{out, result.list.rows.size(), result.meta.input_terms, {}, result.list.version};
  for (auto r : concepts::kAllDiscardReasons) summary.discards[r] = result.discard_count(r);
  log("wrote " + std::to_string(summary.rows) + " concepts from " + std::to_string(summary.input_terms) +
      " input terms to " + out.string());
  for (const auto& [reason, count] : summary.discards)
    log("  discarded " + concepts::to_string(reason) + ": " + std::to_string(count));
  return summary;
}

GenerateSummary generate(const config::Config& cfg, const GenerateOptions& options, const Log& log) {
  const auto& gc = cfg.generation;
  generation::PlanOptions plan_opts;
  plan_opts.model_id = options.model.empty() ? gc.model : options.model;
  if (plan_opts.model_id.empty()) fail(ErrorKind::config, "no model id (pass --model or set generation.model)");
  if (!options.stub && !options.adapter_url && gc.adapter.url.empty())
    fail(ErrorKind::config, "no generator: pass --stub or --adapter-url, or set generation.adapter.url");
  plan_opts.images_per_concept = options.images_per_concept.value_or(gc.images_per_concept);
  if (plan_opts.images_per_concept < 2) fail(ErrorKind::config, "--n must be at least 2 (self-consistency needs pairs)");
  plan_opts.variant_id = options.variant.value_or(gc.variant);
  plan_opts.seed_policy = gc.seed_policy;
  plan_opts.base_seed = gc.base_seed;
  plan_opts.width = gc.width;
  plan_opts.height = gc.height;
  plan_opts.languages = options.languages.empty() ? cfg.languages : options.languages;
  for (const auto& l : plan_opts.languages)
    if (std::find(cfg.languages.begin(), cfg.languages.end(), l) == cfg.languages.end())
      fail(ErrorKind::config, "language '" + l + "' is not configured");

  const fs::path list_path = concept_list_path(cfg, options.concepts);
  if (!fs::exists(list_path)) fail(ErrorKind::config, "concept list not found: " + list_path.string());
  concepts::ConceptList list = concepts::read_concept_list(list_path);
  if (options.limit_concepts) {
    if (*options.limit_concepts == 0) fail(ErrorKind::config, "--concepts-limit must be positive");
    if (list.rows.size() > *options.limit_concepts) list.rows.resize(*options.limit_concepts);
  }

  auto templates = prompts::load_template_set(cfg.resolve(cfg.templates), plan_opts.languages);
  for (const auto& l : plan_opts.languages)
    if (!templates.contains(l, plan_opts.variant_id))
      fail(ErrorKind::config, "template variant '" + plan_opts.variant_id + "' has no " + l + " pattern");

  auto plan = generation::plan_run(list, plan_opts);
  auto manifest = generation::initial_manifest(plan, list, templates);

  std::unique_ptr<generation::GeneratorAdapter> adapter;
  if (options.stub) {
    adapter = std::make_unique<generation::StubAdapter>();
  } else {
    generation::HttpAdapterConfig ac{options.adapter_url.value_or(gc.adapter.url), gc.adapter.max_concurrency,
                                     gc.adapter.accepts_seed, gc.adapter.timeout, gc.adapter.api_key_env};
    adapter = std::make_unique<generation::HttpAdapter>(ac);
  }

  generation::ExecuteOptions exec;
  exec.run_dir = generation::run_directory(cfg.resolve(gc.runs_dir), plan.model_id, plan.variant_id);
  exec.resume = options.resume;
  exec.max_retries = gc.max_retries;
  exec.batch_size = gc.batch_size;
  exec.tool_version = tool_version();
  exec.on_batch = [&](const generation::RunManifest& m) {
    log("progress: " + std::to_string(m.count(generation::EntryStatus::ok)) + " ok, " +
        std::to_string(m.count(generation::EntryStatus::failed)) + " failed, " +
        std::to_string(m.count(generation::EntryStatus::pending)) + " pending");
  };

  std::stop_source stop;
  exec.stop = stop.get_token();
  std::jthread watcher;
  if (options.stop_flag) {
    watcher = std::jthread([&stop, flag = options.stop_flag](std::stop_token self) {
      while (!self.stop_requested()) {
        if (flag->load()) {
          stop.request_stop();
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
      }
    });
  }

  log("generating " + std::to_string(manifest.entries.size()) + " images into " + exec.run_dir.string());
  auto result = generation::execute_plan(manifest, *adapter, exec);
  if (watcher.joinable()) {
    watcher.request_stop();
    watcher.join();
  }

  GenerateSummary s{exec.run_dir, result.count(generation::EntryStatus::ok), result.count(generation::EntryStatus::failed),
                    result.count(generation::EntryStatus::pending), result.complete, result.degraded};
  if (s.degraded) log("warning: run is degraded (" + std::to_string(s.failed) + " failed entries)");
  return s;
}

std::string shell_quote(const std::string& arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  return out + "'";
}

std::string run_child(const std::string& command) {
  std::fflush(nullptr);
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) fail(ErrorKind::pipeline, "cannot start: " + command);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = ::pclose(pipe);
  if (status == -1) fail(ErrorKind::pipeline, "cannot wait for: " + command);
  if (WIFEXITED(status) && WEXITSTATUS(status) == 0) return out;
  std::string why = WIFEXITED(status) ? "exit status " + std::to_string(WEXITSTATUS(status))
                                      : "signal " + std::to_string(WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  fail(ErrorKind::pipeline, "embedder failed (" + why + "): " + command);
}

EmbedSummary embed(const config::Config& cfg, const EmbedOptions& options, const Log& log) {
  const fs::path run_dir = require_run(options.run_dir);
  const std::string command = options.embedder_command.empty() ? cfg.embedder_command : options.embedder_command;
  if (command.empty()) fail(ErrorKind::config, "no embedder command (pass --embedder-cmd or set embedder_command)");
  const std::string lang = options.source_language.value_or(cfg.source_language);
  const fs::path list_path = concept_list_path(cfg, options.concepts);
  if (!fs::exists(list_path)) fail(ErrorKind::config, "concept list not found: " + list_path.string());

  auto manifest = generation::read_manifest(generation::manifest_path(run_dir));
  const fs::path out_dir = run_dir / "embeddings";
  fs::create_directories(out_dir);

  log("embedding images of " + run_dir.string());
  std::string stdout_text = run_child(command + " images --manifest " + shell_quote(generation::manifest_path(run_dir).string()) +
                                      " --out " + shell_quote(out_dir.string()));
  EmbedSummary summary;
  std::set<store::ImageKey> covered;
  for (const auto& line : text::split(stdout_text, '\n')) {
    std::string p = text::trim(line);
    if (p.empty()) continue;
    fs::path path(p);
    if (!fs::exists(path)) fail(ErrorKind::pipeline, "embedder reported a missing file: " + p);
    store::EmbeddingSet set;
    try {
      set = store::read_embeddings(path);
    } catch (const Error& e) {
      fail(ErrorKind::format, "invalid embedding file " + p + ": " + e.what());
    }
    for (const auto& k : set.keys) covered.insert(k);
    summary.image_files.push_back(path);
  }
  if (summary.image_files.empty()) fail(ErrorKind::pipeline, "embedder produced no image embedding files");
  std::size_t missing = 0;
  for (const auto& e : manifest.entries)
    if (e.status == generation::EntryStatus::ok && !covered.count({e.concept_id, e.language, e.index})) ++missing;
  if (missing) log("warning: " + std::to_string(missing) + " ok images have no embedding");

  summary.text_file = out_dir / ("text_" + lang + ".emb");
  log("embedding " + lang + " concept text");
  std::string text_out = run_child(command + " texts --concepts " + shell_quote(list_path.string()) + " --lang " +
                                   shell_quote(lang) + " --out " + shell_quote(summary.text_file.string()));
  (void)text_out;
  store::TextEmbeddingSet texts;
  try {
    texts = store::read_text_embeddings(summary.text_file);
  } catch (const Error& e) {
    fail(ErrorKind::format, "invalid embedding file " + summary.text_file.string() + ": " + e.what());
  }

  summary.index = out_dir / kIndexFile;
  Json index = fs::exists(summary.index) ? io::read_json(summary.index) : Json::object();
  index["images"] = Json::array();
  for (const auto& p : summary.image_files) index["images"].push_back(relative_to(p, out_dir));
  if (!index.contains("texts") || !index["texts"].is_object()) index["texts"] = Json::object();
  index["texts"][lang] = relative_to(summary.text_file, out_dir);
  io::write_json_atomic(summary.index, index);
  log("wrote " + std::to_string(summary.image_files.size()) + " image embedding files and " +
      std::to_string(texts.size()) + " text vectors");
  return summary;
}

ScoreSummary score(const config::Config& cfg, const ScoreOptions& options, const Log& log) {
  const fs::path run_dir = require_run(options.run_dir);
  const std::string source = options.source_language.value_or(cfg.source_language);
  if (!config::valid_language_code(source)) fail(ErrorKind::config, "invalid language code '" + source + "'");

  scoring::ScoreOptions so;
  so.source_language = source;
  so.dt = cfg.scoring.dt;
  if (options.dt_mode) {
    if (*options.dt_mode == "sampled") so.dt.mode = metrics::DtConfig::Mode::sampled;
    else if (*options.dt_mode == "exhaustive") so.dt.mode = metrics::DtConfig::Mode::exhaustive;
    else fail(ErrorKind::config, "--dt-mode must be sampled or exhaustive");
  }
  so.thresholds = cfg.scoring.thresholds;
  so.renormalize_wc = cfg.scoring.renormalize_wc;
  so.threads = cfg.scoring.threads;

  auto manifest = generation::read_manifest(generation::manifest_path(run_dir));
  const auto& run_langs = manifest.plan.languages;
  if (std::find(run_langs.begin(), run_langs.end(), source) == run_langs.end())
    fail(ErrorKind::config, "source language " + source + " is not part of the run");
  const fs::path emb_dir = run_dir / "embeddings";
  const fs::path index_path = emb_dir / kIndexFile;
  if (!fs::exists(index_path)) fail(ErrorKind::pipeline, "no embeddings for " + run_dir.string() + " (run embed first)");
  Json index = io::read_json(index_path);

  std::vector<store::EmbeddingSet> sets;
  for (const auto& p : index.value("images", Json::array())) {
    fs::path path = from_index(p.get<std::string>(), emb_dir);
    if (!fs::exists(path)) fail(ErrorKind::pipeline, "embedding file missing: " + path.string());
    sets.push_back(store::read_embeddings(path));
  }
  const Json texts = index.value("texts", Json::object());
  if (!texts.contains(source))
    fail(ErrorKind::pipeline, "no " + source + " text embeddings in " + index_path.string() +
                                  " (run embed with --source-lang " + source + ")");
  fs::path text_path = from_index(texts[source].get<std::string>(), emb_dir);
  if (!fs::exists(text_path)) fail(ErrorKind::pipeline, "embedding file missing: " + text_path.string());
  auto text_set = store::read_text_embeddings(text_path);

  ScoreSummary summary;
  auto table = scoring::score_run(manifest, sets, text_set, so, &summary.warnings);
  for (const auto& w : summary.warnings) log("warning: " + w);
  summary.csv = options.out ? *options.out : run_dir / "scores.csv";
  summary.json = summary.csv;
  summary.json.replace_extension(".json");
  scoring::write_score_table(summary.csv, table);
  summary.rows = table.rows.size();
  log("scored " + std::to_string(summary.rows) + " (concept, language) pairs into " + summary.csv.string());
  return summary;
}

ReportSummary make_report(const config::Config& cfg, const ReportOptions& options, const Log& log) {
  if (options.tables.empty() || options.tables.size() > 2)
    fail(ErrorKind::config, "report takes one score table, or two for an ablation diff");
  if (options.out_dir.empty()) fail(ErrorKind::config, "no output directory");
  std::vector<scoring::ScoreTable> tables;
  for (const auto& p : options.tables) {
    if (!fs::exists(p)) fail(ErrorKind::config, "score table not found: " + p.string());
    tables.push_back(scoring::read_score_table(p));
    if (tables.back().empty()) fail(ErrorKind::pipeline, "score table is empty: " + p.string());
  }

  // Thumbnails: the first ok image per (language, concept) of any run whose
  // manifest sits next to a table.
  std::vector<report::Thumbnail> thumbs;
  for (const auto& p : options.tables) {
    fs::path run_dir = p.parent_path();
    if (!fs::exists(generation::manifest_path(run_dir))) continue;
    auto manifest = generation::read_manifest(generation::manifest_path(run_dir));
    std::set<std::pair<std::string, std::string>> done;
    for (const auto& e : manifest.entries) {
      if (e.status != generation::EntryStatus::ok || !done.insert({e.language, e.concept_id}).second) continue;
      fs::path image = fs::absolute(run_dir / e.image_path).lexically_normal();
      fs::path rel = image.lexically_relative(fs::absolute(options.out_dir).lexically_normal());
      thumbs.push_back({manifest.plan.model_id, e.language, e.concept_id, (rel.empty() ? image : rel).generic_string()});
    }
  }

  report::ReportOptions ro;
  ro.language_order = cfg.languages;
  ro.histogram_bins = cfg.report.histogram_bins;
  ro.rank_k = cfg.report.rank_k;
  if (cfg.report.scatter_pairs) ro.scatter_pairs = *cfg.report.scatter_pairs;
  std::optional<scoring::ScoreTable> second;
  if (tables.size() == 2) second = tables[1];
  auto bundle = report::build_bundle(tables[0], ro, second, std::move(thumbs));
  auto formats = options.formats.empty() ? std::set<report::Format>{report::Format::csv, report::Format::json, report::Format::html}
                                         : options.formats;
  ReportSummary s{report::emit_report(bundle, formats, options.out_dir)};
  log("wrote " + std::to_string(s.files.size()) + " report file(s) to " + options.out_dir.string());
  return s;
}

}  // namespace cococrola::app
