#include "cococrola/cococrola.h"

#include <atomic>
#include <exception>
#include <new>
#include <string>
#include <variant>
#include <vector>

#include "cococrola/app.hpp"
#include "cococrola/config.hpp"
#include "cococrola/error.hpp"
#include "cococrola/metrics.hpp"
#include "cococrola/report/analysis.hpp"
#include "cococrola/store.hpp"
#include "cococrola/text.hpp"

namespace cc = cococrola;

struct ccl_config {
  cc::config::Config config;
};

struct ccl_embeddings {
  std::variant<cc::store::EmbeddingSet, cc::store::TextEmbeddingSet> set;
};

namespace {

thread_local std::string g_last_error;
std::atomic<bool> g_stop{false};

ccl_status status_of(cc::ErrorKind kind) {
  switch (kind) {
    case cc::ErrorKind::invalid_argument: return CCL_ERR_INVALID_ARGUMENT;
    case cc::ErrorKind::config: return CCL_ERR_CONFIG;
    case cc::ErrorKind::io: return CCL_ERR_IO;
    case cc::ErrorKind::format: return CCL_ERR_FORMAT;
    case cc::ErrorKind::pipeline: return CCL_ERR_PIPELINE;
    case cc::ErrorKind::internal: return CCL_ERR_INTERNAL;
  }
  return CCL_ERR_INTERNAL;
}

template <typename F>
ccl_status guarded(F&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const cc::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CCL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CCL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CCL_ERR_INTERNAL;
  }
}

ccl_status invalid(const std::string& what) {
  g_last_error = what;
  return CCL_ERR_INVALID_ARGUMENT;
}

std::string str(const char* s) { return s ? std::string(s) : std::string(); }

cc::app::Log make_log(ccl_log_fn fn, void* user) {
  return [fn, user](const std::string& line) {
    if (fn) fn(line.c_str(), user);
  };
}

cc::store::VectorBlock block(const float* rows, std::size_t n, std::size_t dim) {
  if (dim == 0) cc::fail(cc::ErrorKind::invalid_argument, "dim must be positive");
  if (rows == nullptr && n > 0) cc::fail(cc::ErrorKind::invalid_argument, "null vector data");
  return cc::store::VectorBlock(dim, n ? std::vector<float>(rows, rows + n * dim) : std::vector<float>{});
}

}  // namespace

extern "C" {

CCL_API const char* ccl_version(void) {
  static const std::string v = cc::app::tool_version();
  return v.c_str();
}

CCL_API const char* ccl_status_name(ccl_status status) {
  switch (status) {
    case CCL_OK: return "ok";
    case CCL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CCL_ERR_CONFIG: return "config error";
    case CCL_ERR_IO: return "i/o error";
    case CCL_ERR_FORMAT: return "format error";
    case CCL_ERR_PIPELINE: return "pipeline error";
    case CCL_ERR_INTERNAL: return "internal error";
    case CCL_ERR_INTERRUPTED: return "interrupted";
  }
  return "unknown";
}

CCL_API const char* ccl_last_error(void) { return g_last_error.c_str(); }

CCL_API ccl_status ccl_config_load(const char* path, ccl_config** out) {
  if (!path || !out) return invalid("ccl_config_load: null argument");
  return guarded([&] {
    *out = new ccl_config{cc::config::load_config(path)};
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_config_parse(const char* json, const char* base_dir, ccl_config** out) {
  if (!json || !out) return invalid("ccl_config_parse: null argument");
  return guarded([&] {
    auto base = base_dir ? std::filesystem::path(base_dir) : std::filesystem::current_path();
    *out = new ccl_config{cc::config::parse_config(json, base)};
    return CCL_OK;
  });
}

CCL_API void ccl_config_free(ccl_config* config) { delete config; }

CCL_API size_t ccl_config_language_count(const ccl_config* config) {
  return config ? config->config.languages.size() : 0;
}

CCL_API const char* ccl_config_language(const ccl_config* config, size_t i) {
  if (!config || i >= config->config.languages.size()) return nullptr;
  return config->config.languages[i].c_str();
}

CCL_API const char* ccl_config_source_language(const ccl_config* config) {
  return config ? config->config.source_language.c_str() : nullptr;
}

CCL_API ccl_status ccl_build_concepts(const ccl_config* config, const ccl_build_concepts_args* args, ccl_log_fn log,
                                      void* user) {
  if (!config) return invalid("ccl_build_concepts: null config");
  return guarded([&] {
    cc::app::BuildConceptsOptions o;
    if (args && args->fixtures_dir) o.fixtures = args->fixtures_dir;
    if (args && args->denylist_path) o.denylist = args->denylist_path;
    if (args && args->out_path) o.out = args->out_path;
    cc::app::build_concepts(config->config, o, make_log(log, user));
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_generate(const ccl_config* config, const ccl_generate_args* args, ccl_log_fn log, void* user) {
  if (!config) return invalid("ccl_generate: null config");
  return guarded([&] {
    cc::app::GenerateOptions o;
    if (args) {
      o.model = str(args->model);
      if (args->adapter_url) o.adapter_url = args->adapter_url;
      o.stub = args->stub != 0;
      if (args->images_per_concept) o.images_per_concept = args->images_per_concept;
      o.resume = args->resume != 0;
      if (args->variant) o.variant = args->variant;
      if (args->concepts_path) o.concepts = args->concepts_path;
      if (args->languages)
        for (auto& l : cc::text::split(args->languages, ','))
          if (!cc::text::trim(l).empty()) o.languages.push_back(cc::text::trim(l));
      if (args->concept_limit) o.limit_concepts = args->concept_limit;
    }
    o.stop_flag = &g_stop;
    auto s = cc::app::generate(config->config, o, make_log(log, user));
    if (!s.complete) {
      g_last_error = "run interrupted with " + std::to_string(s.pending) + " pending entries; rerun with --resume";
      return CCL_ERR_INTERRUPTED;
    }
    return CCL_OK;
  });
}

CCL_API void ccl_request_stop(void) { g_stop.store(true); }
CCL_API void ccl_reset_stop(void) { g_stop.store(false); }

CCL_API ccl_status ccl_embed(const ccl_config* config, const ccl_embed_args* args, ccl_log_fn log, void* user) {
  if (!config || !args) return invalid("ccl_embed: null argument");
  return guarded([&] {
    cc::app::EmbedOptions o;
    o.run_dir = str(args->run_dir);
    o.embedder_command = str(args->embedder_cmd);
    if (args->concepts_path) o.concepts = args->concepts_path;
    if (args->source_lang) o.source_language = args->source_lang;
    cc::app::embed(config->config, o, make_log(log, user));
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_score(const ccl_config* config, const ccl_score_args* args, ccl_log_fn log, void* user) {
  if (!config || !args) return invalid("ccl_score: null argument");
  return guarded([&] {
    cc::app::ScoreOptions o;
    o.run_dir = str(args->run_dir);
    if (args->source_lang) o.source_language = args->source_lang;
    if (args->dt_mode) o.dt_mode = args->dt_mode;
    if (args->out_path) o.out = args->out_path;
    cc::app::score(config->config, o, make_log(log, user));
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_report(const ccl_config* config, const ccl_report_args* args, ccl_log_fn log, void* user) {
  if (!config || !args) return invalid("ccl_report: null argument");
  if (args->table_count > 0 && !args->tables) return invalid("ccl_report: null table list");
  return guarded([&] {
    cc::app::ReportOptions o;
    for (size_t i = 0; i < args->table_count; ++i) o.tables.emplace_back(str(args->tables[i]));
    if (args->formats)
      for (const auto& f : cc::text::split(args->formats, ','))
        if (!cc::text::trim(f).empty()) o.formats.insert(cc::report::parse_format(cc::text::trim(f)));
    o.out_dir = str(args->out_dir);
    cc::app::make_report(config->config, o, make_log(log, user));
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_embeddings_create(ccl_set_kind kind, size_t dim, ccl_embeddings** out) {
  if (!out || dim == 0) return invalid("ccl_embeddings_create: null output or zero dim");
  return guarded([&] {
    auto* h = new ccl_embeddings;
    if (kind == CCL_SET_TEXT) h->set = cc::store::TextEmbeddingSet{cc::store::VectorBlock(dim, {}), {}};
    else h->set = cc::store::EmbeddingSet{cc::store::VectorBlock(dim, {}), {}};
    *out = h;
    return CCL_OK;
  });
}

CCL_API void ccl_embeddings_free(ccl_embeddings* set) { delete set; }

namespace {

std::vector<float> take(const float* vec, std::size_t dim, int normalize) {
  std::vector<float> v(vec, vec + dim);
  if (normalize) cc::store::normalize(v);
  return v;
}

}  // namespace

CCL_API ccl_status ccl_embeddings_add_image(ccl_embeddings* set, const char* concept_id, const char* language,
                                            uint32_t index, const float* vec, int normalize) {
  if (!set || !concept_id || !language || !vec) return invalid("ccl_embeddings_add_image: null argument");
  auto* s = std::get_if<cc::store::EmbeddingSet>(&set->set);
  if (!s) return invalid("ccl_embeddings_add_image: not an image set");
  return guarded([&] {
    s->vectors.push_back(take(vec, s->dim(), normalize));
    s->keys.push_back({concept_id, language, index});
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_embeddings_add_text(ccl_embeddings* set, const char* concept_id, const float* vec,
                                           int normalize) {
  if (!set || !concept_id || !vec) return invalid("ccl_embeddings_add_text: null argument");
  auto* s = std::get_if<cc::store::TextEmbeddingSet>(&set->set);
  if (!s) return invalid("ccl_embeddings_add_text: not a text set");
  return guarded([&] {
    s->vectors.push_back(take(vec, s->dim(), normalize));
    s->keys.push_back(concept_id);
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_embeddings_write(const ccl_embeddings* set, const char* path) {
  if (!set || !path) return invalid("ccl_embeddings_write: null argument");
  return guarded([&] {
    if (auto* s = std::get_if<cc::store::EmbeddingSet>(&set->set)) cc::store::write_embeddings(*s, path);
    else cc::store::write_text_embeddings(std::get<cc::store::TextEmbeddingSet>(set->set), path);
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_embeddings_read(const char* path, ccl_set_kind kind, ccl_embeddings** out) {
  if (!path || !out) return invalid("ccl_embeddings_read: null argument");
  return guarded([&] {
    auto* h = new ccl_embeddings;
    try {
      if (kind == CCL_SET_TEXT) h->set = cc::store::read_text_embeddings(path);
      else h->set = cc::store::read_embeddings(path);
    } catch (...) {
      delete h;
      throw;
    }
    *out = h;
    return CCL_OK;
  });
}

CCL_API size_t ccl_embeddings_count(const ccl_embeddings* set) {
  if (!set) return 0;
  return std::visit([](const auto& s) { return s.size(); }, set->set);
}

CCL_API size_t ccl_embeddings_dim(const ccl_embeddings* set) {
  if (!set) return 0;
  return std::visit([](const auto& s) { return s.dim(); }, set->set);
}

CCL_API const float* ccl_embeddings_row(const ccl_embeddings* set, size_t i) {
  if (!set || i >= ccl_embeddings_count(set)) return nullptr;
  return std::visit([i](const auto& s) { return s.vectors.row(i).data(); }, set->set);
}

CCL_API ccl_status ccl_embeddings_key(const ccl_embeddings* set, size_t i, const char** concept_id,
                                      const char** language, uint32_t* index) {
  if (!set || i >= ccl_embeddings_count(set)) return invalid("ccl_embeddings_key: bad handle or index");
  if (auto* s = std::get_if<cc::store::EmbeddingSet>(&set->set)) {
    if (concept_id) *concept_id = s->keys[i].concept_id.c_str();
    if (language) *language = s->keys[i].language.c_str();
    if (index) *index = s->keys[i].index;
  } else {
    const auto& t = std::get<cc::store::TextEmbeddingSet>(set->set);
    if (concept_id) *concept_id = t.keys[i].c_str();
    if (language) *language = nullptr;
    if (index) *index = 0;
  }
  return CCL_OK;
}

CCL_API ccl_status ccl_cosine(const float* a, const float* b, size_t dim, double* out) {
  if (!a || !b || !out) return invalid("ccl_cosine: null argument");
  return guarded([&] {
    *out = cc::metrics::cosine({a, dim}, {b, dim});
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_self_consistency(const float* rows, size_t n, size_t dim, double* out) {
  if (!out) return invalid("ccl_self_consistency: null output");
  return guarded([&] {
    *out = cc::metrics::self_consistency(block(rows, n, dim));
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_cross_consistency(const float* target, size_t n_target, const float* source, size_t n_source,
                                         size_t dim, double* out) {
  if (!out) return invalid("ccl_cross_consistency: null output");
  return guarded([&] {
    *out = cc::metrics::cross_consistency(block(target, n_target, dim), block(source, n_source, dim));
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_word_correctness(const float* text, const float* rows, size_t n, size_t dim, int renormalize,
                                        double* out) {
  if (!text || !out) return invalid("ccl_word_correctness: null argument");
  return guarded([&] {
    *out = cc::metrics::word_correctness({text, dim}, block(rows, n, dim), renormalize != 0);
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_inverse_distinctiveness(const float* rows, size_t n, const float* pool_rows,
                                               const size_t* pool_counts, size_t pool_concepts, size_t dim,
                                               int exhaustive, size_t samples, uint64_t seed, double* out) {
  if (!out || (pool_concepts > 0 && !pool_counts)) return invalid("ccl_inverse_distinctiveness: null argument");
  return guarded([&] {
    auto images = block(rows, n, dim);
    std::vector<cc::store::VectorBlock> blocks;
    std::size_t offset = 0;
    for (size_t c = 0; c < pool_concepts; ++c) {
      blocks.push_back(block(pool_rows ? pool_rows + offset * dim : nullptr, pool_counts[c], dim));
      offset += pool_counts[c];
    }
    std::vector<cc::metrics::PoolEntry> pool;
    for (size_t c = 0; c < blocks.size(); ++c) pool.push_back({"pool" + std::to_string(c), &blocks[c]});
    cc::metrics::DtConfig cfg = exhaustive ? cc::metrics::DtConfig::exhaustive() : cc::metrics::DtConfig{};
    cfg.rng_seed = seed;
    if (!exhaustive && samples > 0) cfg.samples = samples;
    *out = cc::metrics::inverse_distinctiveness(images, pool, cfg);
    return CCL_OK;
  });
}

CCL_API ccl_status ccl_classify_possession(double xc, double wc, double xc_threshold, double wc_threshold,
                                           ccl_possession_rule rule, int* possessed) {
  if (!possessed) return invalid("ccl_classify_possession: null output");
  if (rule != CCL_RULE_EITHER && rule != CCL_RULE_BOTH) return invalid("ccl_classify_possession: unknown rule");
  return guarded([&] {
    cc::metrics::PossessionThresholds t{xc_threshold, wc_threshold,
                                        rule == CCL_RULE_BOTH ? cc::metrics::PossessionRule::both
                                                              : cc::metrics::PossessionRule::either};
    *possessed = cc::metrics::classify_possession(xc, wc, t).possessed ? 1 : 0;
    return CCL_OK;
  });
}

CCL_API long long ccl_percent(double raw) { return cc::report::percent(raw); }

}  // extern "C"
