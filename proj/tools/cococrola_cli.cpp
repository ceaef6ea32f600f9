// Command-line front end. Talks to the core only through the C API.
#include <csignal>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cococrola/cococrola.h"

namespace {

void print_line(const char* message, void*) { std::fprintf(stderr, "%s\n", message); }

void on_sigint(int) { ccl_request_stop(); }

int exit_code(ccl_status s) {
  switch (s) {
    case CCL_OK: return 0;
    case CCL_ERR_INVALID_ARGUMENT:
    case CCL_ERR_CONFIG: return 2;
    default: return 3;
  }
}

int report_status(ccl_status s) {
  if (s != CCL_OK) std::fprintf(stderr, "error: %s: %s\n", ccl_status_name(s), ccl_last_error());
  return exit_code(s);
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilingual concept coverage benchmark for text-to-image models"};
  app.set_version_flag("--version", std::string(ccl_version()));
  app.require_subcommand(1);

  std::string config_path = "cococrola.json";
  app.add_option("-c,--config", config_path, "Config file (JSON)")->capture_default_str();

  auto* build = app.add_subcommand("build-concepts", "Build the aligned multilingual concept list");
  std::string fixtures, denylist, concepts_out;
  build->add_option("--fixtures", fixtures, "Replay recorded service responses from this directory");
  build->add_option("--denylist", denylist, "Denylist file, one term per line");
  build->add_option("--out", concepts_out, "Output TSV (default: concepts.out from the config)");

  auto* gen = app.add_subcommand("generate", "Generate images for every (concept, language)");
  std::string model, adapter_url, variant, gen_concepts, languages;
  bool stub = false, resume = false;
  unsigned n = 0;
  std::size_t limit = 0;
  gen->add_option("--model", model, "Model id used for the run directory");
  auto* url_opt = gen->add_option("--adapter-url", adapter_url, "HTTP generation endpoint");
  gen->add_flag("--stub", stub, "Use the deterministic stub generator")->excludes(url_opt);
  gen->add_option("--n", n, "Images per (concept, language)");
  gen->add_flag("--resume", resume, "Continue an interrupted run");
  gen->add_option("--variant", variant, "Prompt template variant");
  gen->add_option("--concepts", gen_concepts, "Concept list TSV");
  gen->add_option("--languages", languages, "Comma-separated subset of languages");
  gen->add_option("--limit", limit, "Use only the first N concepts");

  auto* emb = app.add_subcommand("embed", "Run the external embedder over a run");
  std::string emb_run, embedder_cmd, emb_concepts, emb_lang;
  emb->add_option("--run", emb_run, "Run directory")->required();
  emb->add_option("--embedder-cmd", embedder_cmd, "Embedder command line");
  emb->add_option("--concepts", emb_concepts, "Concept list TSV");
  emb->add_option("--source-lang", emb_lang, "Language of the concept text to embed");

  auto* sc = app.add_subcommand("score", "Compute per-(concept, language) scores");
  std::string sc_run, sc_lang, dt_mode, sc_out;
  sc->add_option("--run", sc_run, "Run directory")->required();
  sc->add_option("--source-lang", sc_lang, "Reference language for cross-consistency");
  sc->add_option("--dt-mode", dt_mode, "sampled or exhaustive")->check(CLI::IsMember({"sampled", "exhaustive"}));
  sc->add_option("--out", sc_out, "Output CSV (a JSON copy is written alongside)");

  auto* rep = app.add_subcommand("report", "Aggregate score tables into CSV/JSON/HTML");
  std::vector<std::string> tables;
  std::string formats, rep_out = "report";
  rep->add_option("--tables", tables, "One score table, or two for an ablation diff")->required()->expected(1, 2);
  rep->add_option("--formats", formats, "Comma-separated: csv,json,html");
  rep->add_option("--out", rep_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ccl_config* config = nullptr;
  if (ccl_status s = ccl_config_load(config_path.c_str(), &config); s != CCL_OK) return report_status(s);

  ccl_status status = CCL_OK;
  if (build->parsed()) {
    ccl_build_concepts_args a{opt(fixtures), opt(denylist), opt(concepts_out)};
    status = ccl_build_concepts(config, &a, print_line, nullptr);
  } else if (gen->parsed()) {
    std::signal(SIGINT, on_sigint);
    std::signal(SIGTERM, on_sigint);
    ccl_generate_args a{opt(model), opt(adapter_url), stub ? 1 : 0, n, resume ? 1 : 0,
                        opt(variant), opt(gen_concepts), opt(languages), limit};
    if (gen->count("--n") && n < 2) {
      std::fprintf(stderr, "error: --n must be at least 2\n");
      ccl_config_free(config);
      return 2;
    }
    status = ccl_generate(config, &a, print_line, nullptr);
  } else if (emb->parsed()) {
    ccl_embed_args a{emb_run.c_str(), opt(embedder_cmd), opt(emb_concepts), opt(emb_lang)};
    status = ccl_embed(config, &a, print_line, nullptr);
  } else if (sc->parsed()) {
    ccl_score_args a{sc_run.c_str(), opt(sc_lang), opt(dt_mode), opt(sc_out)};
    status = ccl_score(config, &a, print_line, nullptr);
  } else if (rep->parsed()) {
    std::vector<const char*> ptrs;
    for (const auto& t : tables) ptrs.push_back(t.c_str());
    ccl_report_args a{ptrs.data(), ptrs.size(), opt(formats), rep_out.c_str()};
    status = ccl_report(config, &a, print_line, nullptr);
  }
  ccl_config_free(config);
  return report_status(status);
}
