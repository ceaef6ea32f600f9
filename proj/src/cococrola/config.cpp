#include "cococrola/config.hpp"

#include <algorithm>
#include <set>

#include "cococrola/error.hpp"
#include "cococrola/json_io.hpp"

namespace cococrola::config {

namespace fs = std::filesystem;
using io::Json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  fail(ErrorKind::config, "config: " + key + ": " + why);
}

template <typename T>
T get(const Json& obj, const std::string& key, const std::string& where, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    bad(where + key, "wrong type");
  }
}

const Json& section(const Json& root, const std::string& key) {
  static const Json empty = Json::object();
  if (!root.contains(key)) return empty;
  if (!root.at(key).is_object()) bad(key, "expected an object");
  return root.at(key);
}

std::optional<fs::path> opt_path(const Json& obj, const std::string& key, const std::string& where) {
  auto s = get<std::string>(obj, key, where, "");
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

void check_language(const std::string& code, const std::string& key) {
  if (!valid_language_code(code)) bad(key, "invalid language code '" + code + "'");
}

}  // namespace

bool valid_language_code(const std::string& code) {
  if (code.size() < 2 || code.size() > 3) return false;
  return std::all_of(code.begin(), code.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

fs::path Config::resolve(const fs::path& p) const {
  if (p.empty() || p.is_absolute()) return p;
  return base_dir / p;
}

Config parse_config(const std::string& body, const fs::path& base_dir) {
  Json root;
  try {
    root = Json::parse(body);
  } catch (const Json::exception& e) {
    fail(ErrorKind::config, std::string("config: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail(ErrorKind::config, "config: top level must be an object");

  Config c;
  c.base_dir = base_dir;
  c.languages = get<std::vector<std::string>>(root, "languages", "", {});
  if (c.languages.empty()) bad("languages", "must list at least one language");
  std::set<std::string> seen;
  for (const auto& l : c.languages) {
    check_language(l, "languages");
    if (!seen.insert(l).second) bad("languages", "duplicate language '" + l + "'");
  }
  c.source_language = get<std::string>(root, "source_language", "", "en");
  check_language(c.source_language, "source_language");
  if (!seen.count(c.source_language)) bad("source_language", "'" + c.source_language + "' is not in languages");
  c.templates = get<std::string>(root, "templates", "", "templates.json");
  c.embedder_command = get<std::string>(root, "embedder_command", "", "");

  const Json& cj = section(root, "concepts");
  if (cj.contains("frequency_lists")) {
    if (!cj["frequency_lists"].is_array()) bad("concepts.frequency_lists", "expected an array");
    for (const auto& f : cj["frequency_lists"]) {
      FrequencyListConfig fl;
      try {
        fl.source = concepts::parse_term_source(get<std::string>(f, "source", "concepts.frequency_lists.", ""));
      } catch (const Error& e) {
        bad("concepts.frequency_lists.source", e.what());
      }
      fl.path = get<std::string>(f, "path", "concepts.frequency_lists.", "");
      if (fl.path.empty()) bad("concepts.frequency_lists.path", "missing");
      c.concepts.frequency_lists.push_back(std::move(fl));
    }
  }
  c.concepts.label_set = opt_path(cj, "label_set", "concepts.");
  c.concepts.denylist = opt_path(cj, "denylist", "concepts.");
  c.concepts.top_k = get<std::size_t>(cj, "top_k", "concepts.", 2000);
  if (c.concepts.top_k == 0) bad("concepts.top_k", "must be positive");
  c.concepts.version_tag = get<std::string>(cj, "version_tag", "concepts.", "1.0");
  c.concepts.max_in_flight = std::max<std::size_t>(1, get<std::size_t>(cj, "max_in_flight", "concepts.", 4));
  c.concepts.out = get<std::string>(cj, "out", "concepts.", "concepts.tsv");
  if (cj.contains("services")) {
    std::set<std::string> ids;
    for (const auto& s : cj["services"]) {
      ServiceConfig sc{get<std::string>(s, "id", "concepts.services.", ""), get<std::string>(s, "endpoint", "concepts.services.", ""),
                       get<std::string>(s, "api_key_env", "concepts.services.", "")};
      if (sc.id.empty()) bad("concepts.services.id", "missing");
      if (!ids.insert(sc.id).second) bad("concepts.services", "duplicate service id '" + sc.id + "'");
      c.concepts.services.push_back(std::move(sc));
    }
  }
  if (cj.contains("synsets")) {
    const Json& s = cj["synsets"];
    c.concepts.synsets = ServiceConfig{"synsets", get<std::string>(s, "endpoint", "concepts.synsets.", ""),
                                       get<std::string>(s, "api_key_env", "concepts.synsets.", "")};
  }

  const Json& gj = section(root, "generation");
  auto& g = c.generation;
  g.runs_dir = get<std::string>(gj, "runs_dir", "generation.", "runs");
  g.model = get<std::string>(gj, "model", "generation.", "");
  g.variant = get<std::string>(gj, "variant", "generation.", "default");
  g.images_per_concept = get<std::uint32_t>(gj, "images_per_concept", "generation.", 10);
  if (g.images_per_concept < 2) bad("generation.images_per_concept", "must be at least 2");
  try {
    g.seed_policy = generation::parse_seed_policy(get<std::string>(gj, "seed_policy", "generation.", "per_image_sequential"));
  } catch (const Error& e) {
    bad("generation.seed_policy", e.what());
  }
  g.base_seed = get<std::uint64_t>(gj, "base_seed", "generation.", 0);
  g.width = get<std::uint32_t>(gj, "width", "generation.", 512);
  g.height = get<std::uint32_t>(gj, "height", "generation.", 512);
  g.batch_size = std::max<std::size_t>(1, get<std::size_t>(gj, "batch_size", "generation.", 16));
  g.max_retries = get<int>(gj, "max_retries", "generation.", 2);
  if (gj.contains("adapter")) {
    const Json& a = gj["adapter"];
    g.adapter.url = get<std::string>(a, "url", "generation.adapter.", "");
    g.adapter.max_concurrency = std::max(1, get<int>(a, "max_concurrency", "generation.adapter.", 2));
    g.adapter.accepts_seed = get<bool>(a, "accepts_seed", "generation.adapter.", true);
    g.adapter.timeout = std::chrono::milliseconds(get<long long>(a, "timeout_ms", "generation.adapter.", 120000));
    g.adapter.api_key_env = get<std::string>(a, "api_key_env", "generation.adapter.", "");
  }

  const Json& sj = section(root, "scoring");
  auto mode = get<std::string>(sj, "dt_mode", "scoring.", "sampled");
  if (mode == "sampled") c.scoring.dt.mode = metrics::DtConfig::Mode::sampled;
  else if (mode == "exhaustive") c.scoring.dt.mode = metrics::DtConfig::Mode::exhaustive;
  else bad("scoring.dt_mode", "expected sampled or exhaustive");
  if (sj.contains("dt_samples") && !sj["dt_samples"].is_null()) {
    auto m = get<std::size_t>(sj, "dt_samples", "scoring.", 0);
    if (m == 0) bad("scoring.dt_samples", "must be positive");
    c.scoring.dt.samples = m;
  }
  c.scoring.dt.rng_seed = get<std::uint64_t>(sj, "rng_seed", "scoring.", 0);
  c.scoring.renormalize_wc = get<bool>(sj, "renormalize_wc", "scoring.", false);
  c.scoring.threads = std::max<std::size_t>(1, get<std::size_t>(sj, "threads", "scoring.", 1));
  if (sj.contains("thresholds")) {
    const Json& t = sj["thresholds"];
    c.scoring.thresholds.xc = get<double>(t, "xc", "scoring.thresholds.", 0.5);
    c.scoring.thresholds.wc = get<double>(t, "wc", "scoring.thresholds.", 0.25);
    try {
      c.scoring.thresholds.rule = metrics::parse_possession_rule(get<std::string>(t, "rule", "scoring.thresholds.", "either"));
    } catch (const Error& e) {
      bad("scoring.thresholds.rule", e.what());
    }
  }

  const Json& rj = section(root, "report");
  c.report.histogram_bins = get<std::size_t>(rj, "histogram_bins", "report.", 20);
  if (c.report.histogram_bins < 2) bad("report.histogram_bins", "must be at least 2");
  c.report.rank_k = get<std::size_t>(rj, "rank_k", "report.", 5);
  if (rj.contains("scatter_pairs"))
    c.report.scatter_pairs = get<std::vector<std::pair<std::string, std::string>>>(rj, "scatter_pairs", "report.", {});

  return c;
}

Config load_config(const fs::path& path) {
  std::string body;
  try {
    body = io::read_file(path);
  } catch (const Error& e) {
    fail(ErrorKind::config, std::string("cannot read config: ") + e.what());
  }
  return parse_config(body, fs::absolute(path).parent_path());
}

}  // namespace cococrola::config
