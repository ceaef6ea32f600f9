#include <doctest.h>

#include <atomic>
#include <fstream>
#include <mutex>
#include <set>

#include "cococrola/error.hpp"
#include "cococrola/generation/adapter.hpp"
#include "cococrola/generation/manifest.hpp"
#include "cococrola/generation/orchestrator.hpp"
#include "cococrola/generation/png.hpp"
#include "support/helpers.hpp"

using namespace cococrola;
using namespace cococrola::generation;
namespace fs = std::filesystem;

namespace {

concepts::ConceptList small_list(std::size_t concepts = 3) {
  concepts::ConceptList list;
  list.languages = {"en", "es", "he"};
  list.version = "test";
  const char* names[][3] = {{"dog", "perro", "כלב"}, {"sea", "mar", "ים"}, {"ship", "barco", "ספינה"},
                            {"moon", "luna", "ירח"}};
  for (std::size_t i = 0; i < concepts; ++i)
    list.rows.push_back({names[i][0], {{"en", names[i][0]}, {"es", names[i][1]}, {"he", names[i][2]}}, {}});
  return list;
}

prompts::TemplateSet templates() {
  prompts::TemplateSet t;
  t.add({"en", "a photograph of {}", "default"});
  t.add({"es", "un foto de {}", "default"});
  t.add({"he", "תמונה של {}", "default"});
  return t;
}

RunManifest planned(std::uint32_t n = 2, std::size_t concepts = 3) {
  PlanOptions o;
  o.model_id = "stub";
  o.images_per_concept = n;
  auto list = small_list(concepts);
  return initial_manifest(plan_run(list, o), list, templates());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Wraps the stub and counts calls; optionally rejects prompts in one script.
class CountingAdapter final : public GeneratorAdapter {
 public:
  explicit CountingAdapter(std::string reject_substring = {}) : reject_(std::move(reject_substring)) {}
  AdapterCapabilities capabilities() const override { return {true, 1}; }
  GenerationResult generate(const GenerationRequest& r) override {
    ++calls;
    if (!reject_.empty() && r.prompt.find(reject_) != std::string::npos)
      return GenerationFailure{"unsupported script", false};
    return stub_.generate(r);
  }
  std::atomic<int> calls{0};

 private:
  std::string reject_;
  StubAdapter stub_{1};
};

ExecuteOptions options_for(const fs::path& dir) {
  ExecuteOptions o;
  o.run_dir = dir;
  o.retry_backoff = std::chrono::milliseconds(1);
  o.batch_size = 4;
  return o;
}

}  // namespace

TEST_CASE("plan sizes") {
  PlanOptions o;
  o.model_id = "m";
  o.images_per_concept = 2;
  auto list = small_list(2);
  o.languages = {"en"};
  CHECK(plan_run(list, o).planned_images() == 4);

  concepts::ConceptList big;
  big.languages = {"en", "es", "de", "zh", "ja", "he", "id"};
  for (int i = 0; i < 193; ++i) {
    concepts::ConceptRow r{"c" + std::to_string(i), {}, {}};
    for (const auto& l : big.languages) r.surfaces[l] = r.concept_id;
    big.rows.push_back(r);
  }
  PlanOptions d;
  d.model_id = "m";
  CHECK(plan_run(big, d).planned_images() == 13510);

  o.images_per_concept = 1;
  CHECK_THROWS_AS(plan_run(list, o), Error);
  o.images_per_concept = 2;
  o.languages = {"fr"};
  CHECK_THROWS_AS(plan_run(list, o), Error);
}

TEST_CASE("seeds follow the policy") {
  RunPlan p;
  p.base_seed = 100;
  p.seed_policy = SeedPolicy::per_image_sequential;
  CHECK(p.seed_for(3) == 103);
  p.seed_policy = SeedPolicy::fixed_base;
  CHECK(p.seed_for(3) == 100);
}

TEST_CASE("initial manifest renders prompts in order") {
  auto m = planned();
  REQUIRE(m.entries.size() == 18);
  CHECK(m.entries[0].language == "en");
  CHECK(m.entries[0].concept_id == "dog");
  CHECK(m.entries[0].prompt_text == "a photograph of dog");
  CHECK(m.entries[1].index == 1);
  CHECK(m.entries[6].prompt_text == "un foto de perro");
  for (const auto& e : m.entries) CHECK(e.status == EntryStatus::pending);
}

TEST_CASE("image paths are pure functions of their key") {
  CHECK(image_relative_path("en", "dog", 3, "png") == "en/dog/3.png");
  CHECK(path_component("ice-cream") == "ice-cream");
  CHECK(path_component("a/b") != path_component("a_b"));
  CHECK(path_component("a/b") == path_component("a/b"));
  CHECK(run_directory("/runs", "sd2", "default") == fs::path("/runs/sd2/default"));
  CHECK(run_directory("/runs", "sd2", "default") != run_directory("/runs", "sd2", "a-photo"));
}

TEST_CASE("png encoder writes a valid header") {
  std::vector<std::uint8_t> px(4 * 3 * 3, 0x7f);
  auto png = encode_png_rgb(px, 4, 3);
  REQUIRE(png.size() > 33);
  CHECK(png.substr(0, 8) == std::string("\x89PNG\r\n\x1a\n", 8));
  CHECK(png.substr(12, 4) == "IHDR");
  CHECK(static_cast<unsigned char>(png[19]) == 4);
  CHECK(static_cast<unsigned char>(png[23]) == 3);
  CHECK(png.substr(png.size() - 8, 4) == "IEND");
}

TEST_CASE("stub adapter is deterministic in prompt and seed") {
  StubAdapter stub;
  auto a = std::get<GeneratedImage>(stub.generate({"a photograph of dog", 1}));
  auto b = std::get<GeneratedImage>(stub.generate({"a photograph of dog", 1}));
  auto c = std::get<GeneratedImage>(stub.generate({"a photograph of dog", 2}));
  CHECK(a.bytes == b.bytes);
  CHECK(a.bytes != c.bytes);
  CHECK(a.format == "png");
}

TEST_CASE("stub run completes and is byte-reproducible") {
  testing::TempDir d1("gen"), d2("gen");
  StubAdapter s1, s2;
  auto m1 = execute_plan(planned(), s1, options_for(d1.path()));
  auto m2 = execute_plan(planned(), s2, options_for(d2.path()));
  CHECK(m1.complete);
  CHECK_FALSE(m1.degraded);
  CHECK(m1.count(EntryStatus::ok) == 18);
  for (std::size_t i = 0; i < m1.entries.size(); ++i) {
    REQUIRE(m1.entries[i].image_path == m2.entries[i].image_path);
    CHECK(slurp(d1.path() / m1.entries[i].image_path) == slurp(d2.path() / m2.entries[i].image_path));
  }
  auto back = read_manifest(manifest_path(d1.path()));
  CHECK(back.complete);
  CHECK(back.plan == m1.plan);
  CHECK(back.entries.size() == 18);
}

TEST_CASE("stop then resume generates only the missing entries") {
  testing::TempDir dir("gen");
  CountingAdapter first;
  std::stop_source stop;
  auto opts = options_for(dir.path());
  opts.stop = stop.get_token();
  opts.on_batch = [&](const RunManifest& m) {
    if (m.count(EntryStatus::ok) >= 8) stop.request_stop();
  };
  auto m1 = execute_plan(planned(), first, opts);
  CHECK_FALSE(m1.complete);
  std::size_t done = m1.count(EntryStatus::ok);
  CHECK(done == 8);
  CHECK(read_manifest(manifest_path(dir.path())).count(EntryStatus::ok) == done);

  CountingAdapter second;
  auto resume = options_for(dir.path());
  resume.resume = true;
  auto m2 = execute_plan(planned(), second, resume);
  CHECK(m2.complete);
  CHECK(m2.count(EntryStatus::ok) == 18);
  CHECK(static_cast<std::size_t>(second.calls.load()) == 18 - done);

  // Deleting an image makes resume regenerate just that entry.
  fs::remove(dir.path() / m2.entries[5].image_path);
  CountingAdapter third;
  auto m3 = execute_plan(planned(), third, resume);
  CHECK(m3.complete);
  CHECK(third.calls.load() == 1);
}

TEST_CASE("resume against a different plan is a config error") {
  testing::TempDir dir("gen");
  StubAdapter stub;
  execute_plan(planned(2), stub, options_for(dir.path()));
  auto resume = options_for(dir.path());
  resume.resume = true;
  try {
    execute_plan(planned(3), stub, resume);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
}

TEST_CASE("an adapter rejecting one language fails those entries and degrades the run") {
  testing::TempDir dir("gen");
  CountingAdapter picky("תמונה");
  auto m = execute_plan(planned(), picky, options_for(dir.path()));
  CHECK(m.complete);
  CHECK(m.degraded);
  CHECK(m.count(EntryStatus::failed) == 6);
  CHECK(m.count(EntryStatus::ok) == 12);
  for (const auto& e : m.entries) {
    if (e.language == "he") {
      CHECK(e.status == EntryStatus::failed);
      CHECK(e.attempts == 1);
      CHECK_FALSE(e.error.empty());
    } else {
      CHECK(e.status == EntryStatus::ok);
    }
  }
}

TEST_CASE("retryable failures are retried up to the limit") {
  class Flaky final : public GeneratorAdapter {
   public:
    AdapterCapabilities capabilities() const override { return {true, 1}; }
    GenerationResult generate(const GenerationRequest& r) override {
      if (++calls % 2 == 1) return GenerationFailure{"busy", true};
      return stub.generate(r);
    }
    int calls = 0;
    StubAdapter stub{1};
  } flaky;
  testing::TempDir dir("gen");
  auto m = execute_plan(planned(2, 1), flaky, options_for(dir.path()));
  CHECK(m.count(EntryStatus::ok) == 6);
  for (const auto& e : m.entries) CHECK(e.attempts == 2);

  class Down final : public GeneratorAdapter {
   public:
    AdapterCapabilities capabilities() const override { return {true, 1}; }
    GenerationResult generate(const GenerationRequest&) override { return GenerationFailure{"down", true}; }
  } down;
  testing::TempDir dir2("gen");
  auto opts = options_for(dir2.path());
  opts.max_retries = 2;
  auto m2 = execute_plan(planned(2, 1), down, opts);
  CHECK(m2.count(EntryStatus::failed) == 6);
  for (const auto& e : m2.entries) CHECK(e.attempts == 3);
}

TEST_CASE("content types map onto extensions") {
  CHECK(extension_for_content_type("image/png") == "png");
  CHECK(extension_for_content_type("image/jpeg") == "jpg");
  CHECK(extension_for_content_type("text/html").empty());
}
