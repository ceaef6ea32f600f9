#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "cococrola/scoring.hpp"
#include "support/helpers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome run(const std::string& args) {
  std::string cmd = std::string("'") + COCOCROLA_CLI + "' " + args + " 2>&1";
  Outcome out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.output.append(buf.data(), n);
  int status = ::pclose(pipe);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// A workspace with a config pointing at the shipped data and a private runs dir.
struct Workspace {
  testing::TempDir dir{"cli"};
  fs::path config = dir / "cococrola.json";

  explicit Workspace(json overrides = json::object()) {
    json cfg = {
        {"languages", {"en", "es", "de", "zh", "ja", "he", "id"}},
        {"source_language", "en"},
        {"templates", std::string(COCOCROLA_DATA_DIR) + "/templates.json"},
        {"embedder_command", std::string("'") + STUB_EMBEDDER + "'"},
        {"concepts", {{"out", std::string(COCOCROLA_DATA_DIR) + "/concepts.tsv"}}},
        {"generation", {{"runs_dir", "runs"}, {"images_per_concept", 4}}},
        {"scoring", {{"dt_mode", "sampled"}, {"rng_seed", 0}}},
    };
    cfg.merge_patch(overrides);
    std::ofstream(config) << cfg.dump(2);
  }
  std::string c() const { return "-c " + q(config) + " "; }
  fs::path run_dir() const { return dir.path() / "runs" / "stub" / "default"; }
};

Outcome generate_small(const Workspace& ws, const std::string& extra = "") {
  return run(ws.c() + "generate --stub --model stub --limit 5 --languages en,es,ja " + extra);
}

}  // namespace

TEST_CASE("build-concepts from fixtures writes the 193-row list") {
  Workspace ws;
  auto out = ws.dir / "concepts.tsv";
  auto r = run("-c " + q(fs::path(COCOCROLA_DATA_DIR) / "cococrola.json") + " build-concepts --fixtures " + q(fs::path(COCOCROLA_DATA_DIR) / "fixtures") + " --denylist " +
               q(fs::path(COCOCROLA_DATA_DIR) / "fixtures" / "denylist.txt") + " --out " + q(out));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  auto body = slurp(out);
  CHECK(std::count(body.begin(), body.end(), '\n') == 194);
  CHECK(body == slurp(fs::path(COCOCROLA_DATA_DIR) / "concepts.tsv"));
}

TEST_CASE("configuration problems exit 2") {
  Workspace bad(json{{"languages", {"en", "ES"}}});
  auto r = run(bad.c() + "generate --stub --model stub");
  CHECK(r.code == 2);
  CHECK(r.output.find("languages") != std::string::npos);

  Workspace ws;
  CHECK(generate_small(ws, "--n 1").code == 2);
  CHECK(run(ws.c() + "embed --run " + q(ws.dir / "nope")).code == 2);
  CHECK(run(ws.c() + "score --run " + q(ws.dir / "nope")).code == 2);
  CHECK(run(ws.c() + "score --run x --dt-mode fast").code == 2);
  CHECK(run(ws.c() + "frobnicate").code == 2);
  CHECK(run("-c " + q(ws.dir / "missing.json") + " score --run x").code == 2);
}

TEST_CASE("stub run end to end") {
  Workspace ws;
  auto g = generate_small(ws);
  REQUIRE_MESSAGE(g.code == 0, g.output);
  auto manifest = json::parse(slurp(ws.run_dir() / "manifest.json"));
  CHECK(manifest["complete"] == true);
  CHECK(manifest["entries"].size() == 60);

  auto e = run(ws.c() + "embed --run " + q(ws.run_dir()));
  REQUIRE_MESSAGE(e.code == 0, e.output);
  CHECK(fs::exists(ws.run_dir() / "embeddings" / "index.json"));

  auto s = run(ws.c() + "score --run " + q(ws.run_dir()));
  REQUIRE_MESSAGE(s.code == 0, s.output);
  auto table = cococrola::scoring::read_score_table(ws.run_dir() / "scores.csv");
  CHECK(table.rows.size() == 15);
  for (const auto& row : table.rows) {
    CHECK(row.n_effective == 4);
    REQUIRE(row.xc);
    REQUIRE(row.dt);
    if (row.language == "en") CHECK(*row.xc == doctest::Approx((12 * row.sc + 4) / 16).epsilon(1e-9));
  }

  // Cross-consistency relative to another language.
  auto ja = run(ws.c() + "embed --run " + q(ws.run_dir()) + " --source-lang ja");
  REQUIRE_MESSAGE(ja.code == 0, ja.output);
  auto s2 = run(ws.c() + "score --run " + q(ws.run_dir()) + " --source-lang ja --out " + q(ws.dir / "ja.csv"));
  REQUIRE_MESSAGE(s2.code == 0, s2.output);
  for (const auto& row : cococrola::scoring::read_score_table(ws.dir / "ja.csv").rows)
    if (row.language == "ja") CHECK(*row.xc == doctest::Approx((12 * row.sc + 4) / 16).epsilon(1e-9));
  CHECK(run(ws.c() + "score --run " + q(ws.run_dir()) + " --source-lang zh").code == 2);

  auto rep = run(ws.c() + "report --tables " + q(ws.run_dir() / "scores.csv") + " --out " + q(ws.dir / "report"));
  REQUIRE_MESSAGE(rep.code == 0, rep.output);
  for (const char* f : {"aggregates.csv", "histograms.csv", "scatter.csv", "rankings.csv", "scores.csv", "report.json",
                        "report.html"})
    CHECK_MESSAGE(fs::exists(ws.dir / "report" / f), f);
  CHECK_FALSE(fs::exists(ws.dir / "report" / "ablation.csv"));
  CHECK(slurp(ws.dir / "report" / "report.html").find("<img") != std::string::npos);

  auto two = run(ws.c() + "report --tables " + q(ws.run_dir() / "scores.csv") + " " + q(ws.run_dir() / "scores.json") +
                 " --formats html --out " + q(ws.dir / "html"));
  REQUIRE_MESSAGE(two.code == 0, two.output);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(ws.dir / "html")) ++files;
  CHECK(files == 1);
}

TEST_CASE("resume regenerates only missing images") {
  Workspace ws;
  REQUIRE(generate_small(ws).code == 0);
  auto before = slurp(ws.run_dir() / "es" / "dog" / "1.png");
  fs::remove(ws.run_dir() / "es" / "dog" / "1.png");
  auto r = generate_small(ws, "--resume");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(slurp(ws.run_dir() / "es" / "dog" / "1.png") == before);
  auto mismatch = generate_small(ws, "--resume --n 3");
  CHECK(mismatch.code == 2);
}

TEST_CASE("broken artifacts exit 3") {
  Workspace ws;
  REQUIRE(generate_small(ws).code == 0);

  // No embeddings yet.
  CHECK(run(ws.c() + "score --run " + q(ws.run_dir())).code == 3);

  REQUIRE(run(ws.c() + "embed --run " + q(ws.run_dir())).code == 0);
  auto index = json::parse(slurp(ws.run_dir() / "embeddings" / "index.json"));
  fs::path victim = ws.run_dir() / "embeddings" / index["images"][0].get<std::string>();
  auto bytes = slurp(victim);
  bytes[0] = 'X';
  std::ofstream(victim, std::ios::binary | std::ios::trunc) << bytes;
  auto s = run(ws.c() + "score --run " + q(ws.run_dir()));
  CHECK(s.code == 3);
  CHECK(s.output.find(victim.filename().string()) != std::string::npos);

  std::ofstream(ws.dir / "empty.csv") << cococrola::scoring::kCsvHeader << "\n";
  CHECK(run(ws.c() + "report --tables " + q(ws.dir / "empty.csv") + " --out " + q(ws.dir / "r")).code == 3);

  auto failing = run(ws.c() + "embed --run " + q(ws.run_dir()) + " --embedder-cmd false");
  CHECK(failing.code == 3);
}
