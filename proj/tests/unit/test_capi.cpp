#include <doctest.h>

#include <cococrola/cococrola.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "support/oracle.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<float> flat(const oracle::Set& s) {
  std::vector<float> out;
  for (const auto& v : s) out.insert(out.end(), v.begin(), v.end());
  return out;
}

struct Scratch {
  Scratch() {
    path = fs::temp_directory_path() / ("cococrola-capi-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path path;
};

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(ccl_status_name(CCL_OK)) == "ok");
  CHECK(std::string(ccl_version()).size() > 0);
  CHECK(ccl_percent(0.81) == 81);
  CHECK(ccl_percent(0.125) == 13);
}

TEST_CASE("metric functions match the oracle") {
  std::mt19937_64 rng(3);
  auto a = oracle::clustered_set(rng, 6, 8, 1.0f);
  auto b = oracle::clustered_set(rng, 4, 8, 1.0f);
  auto c = oracle::clustered_set(rng, 5, 8, 1.0f);
  auto text = oracle::random_unit(rng, 8);
  auto fa = flat(a), fb = flat(b), fc = flat(c);

  double v = 0;
  REQUIRE(ccl_cosine(a[0].data(), b[0].data(), 8, &v) == CCL_OK);
  CHECK(v == doctest::Approx(static_cast<double>(oracle::cosine(a[0], b[0]))).epsilon(1e-9));
  REQUIRE(ccl_self_consistency(fa.data(), 6, 8, &v) == CCL_OK);
  CHECK(v == doctest::Approx(oracle::self_consistency(a)).epsilon(1e-9));
  REQUIRE(ccl_cross_consistency(fa.data(), 6, fb.data(), 4, 8, &v) == CCL_OK);
  CHECK(v == doctest::Approx(oracle::cross_consistency(a, b)).epsilon(1e-9));
  REQUIRE(ccl_word_correctness(text.data(), fa.data(), 6, 8, 0, &v) == CCL_OK);
  CHECK(v == doctest::Approx(oracle::word_correctness(text, a)).epsilon(1e-9));

  std::vector<float> pool = fb;
  pool.insert(pool.end(), fc.begin(), fc.end());
  std::size_t counts[] = {4, 5};
  REQUIRE(ccl_inverse_distinctiveness(fa.data(), 6, pool.data(), counts, 2, 8, 1, 0, 0, &v) == CCL_OK);
  CHECK(v == doctest::Approx(oracle::inverse_distinctiveness(a, {b, c})).epsilon(1e-9));
  double s1 = 0, s2 = 0;
  REQUIRE(ccl_inverse_distinctiveness(fa.data(), 6, pool.data(), counts, 2, 8, 0, 100, 5, &s1) == CCL_OK);
  REQUIRE(ccl_inverse_distinctiveness(fa.data(), 6, pool.data(), counts, 2, 8, 0, 100, 5, &s2) == CCL_OK);
  CHECK(s1 == s2);
}

TEST_CASE("metric errors come back as status codes") {
  float zero[2] = {0, 0}, one[2] = {1, 0};
  double v = 0;
  CHECK(ccl_cosine(zero, one, 2, &v) == CCL_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ccl_last_error()).find("zero") != std::string::npos);
  CHECK(ccl_self_consistency(one, 1, 2, &v) == CCL_ERR_INVALID_ARGUMENT);
  CHECK(ccl_cosine(nullptr, one, 2, &v) == CCL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("possession through the C API") {
  int p = 0;
  REQUIRE(ccl_classify_possession(0.669, 0.23, 0.5, 0.25, CCL_RULE_EITHER, &p) == CCL_OK);
  CHECK(p == 1);
  REQUIRE(ccl_classify_possession(0.669, 0.23, 0.5, 0.25, CCL_RULE_BOTH, &p) == CCL_OK);
  CHECK(p == 0);
  REQUIRE(ccl_classify_possession(0.346, 0.18, 0.5, 0.25, CCL_RULE_EITHER, &p) == CCL_OK);
  CHECK(p == 0);
}

TEST_CASE("embedding files through the C API") {
  Scratch dir;
  ccl_embeddings* set = nullptr;
  REQUIRE(ccl_embeddings_create(CCL_SET_IMAGE, 3, &set) == CCL_OK);
  float a[3] = {3, 4, 0}, b[3] = {0, 0, 1};
  REQUIRE(ccl_embeddings_add_image(set, "dog", "en", 0, a, 1) == CCL_OK);
  REQUIRE(ccl_embeddings_add_image(set, "dog", "en", 1, b, 0) == CCL_OK);
  CHECK(ccl_embeddings_add_image(set, "dog", "en", 2, a, 0) == CCL_OK);
  std::string path = (dir.path / "x.emb").string();
  CHECK(ccl_embeddings_write(set, path.c_str()) == CCL_ERR_FORMAT);
  ccl_embeddings_free(set);

  REQUIRE(ccl_embeddings_create(CCL_SET_IMAGE, 3, &set) == CCL_OK);
  REQUIRE(ccl_embeddings_add_image(set, "dog", "en", 0, a, 1) == CCL_OK);
  REQUIRE(ccl_embeddings_add_image(set, "dog", "en", 1, b, 0) == CCL_OK);
  REQUIRE(ccl_embeddings_write(set, path.c_str()) == CCL_OK);
  ccl_embeddings_free(set);
  CHECK(fs::file_size(path) == 16 + 2 * 3 * 4);

  ccl_embeddings* back = nullptr;
  REQUIRE(ccl_embeddings_read(path.c_str(), CCL_SET_IMAGE, &back) == CCL_OK);
  CHECK(ccl_embeddings_count(back) == 2);
  CHECK(ccl_embeddings_dim(back) == 3);
  CHECK(ccl_embeddings_row(back, 0)[0] == doctest::Approx(0.6));
  const char *concept_id = nullptr, *lang = nullptr;
  uint32_t index = 9;
  REQUIRE(ccl_embeddings_key(back, 1, &concept_id, &lang, &index) == CCL_OK);
  CHECK(std::string(concept_id) == "dog");
  CHECK(std::string(lang) == "en");
  CHECK(index == 1);
  ccl_embeddings_free(back);

  ccl_embeddings* text = nullptr;
  REQUIRE(ccl_embeddings_create(CCL_SET_TEXT, 3, &text) == CCL_OK);
  REQUIRE(ccl_embeddings_add_text(text, "dog", a, 1) == CCL_OK);
  std::string tpath = (dir.path / "t.emb").string();
  REQUIRE(ccl_embeddings_write(text, tpath.c_str()) == CCL_OK);
  ccl_embeddings_free(text);
  REQUIRE(ccl_embeddings_read(tpath.c_str(), CCL_SET_TEXT, &text) == CCL_OK);
  CHECK(ccl_embeddings_count(text) == 1);
  ccl_embeddings_free(text);

  CHECK(ccl_embeddings_read((dir.path / "missing.emb").string().c_str(), CCL_SET_IMAGE, &back) != CCL_OK);
}

TEST_CASE("config through the C API") {
  ccl_config* cfg = nullptr;
  REQUIRE(ccl_config_load(COCOCROLA_DATA_DIR "/cococrola.json", &cfg) == CCL_OK);
  CHECK(ccl_config_language_count(cfg) == 7);
  CHECK(std::string(ccl_config_language(cfg, 3)) == "zh");
  CHECK(std::string(ccl_config_source_language(cfg)) == "en");
  ccl_config_free(cfg);

  CHECK(ccl_config_parse(R"({"languages": ["en", "ES"]})", nullptr, &cfg) == CCL_ERR_CONFIG);
  CHECK(std::string(ccl_last_error()).find("languages") != std::string::npos);
  CHECK(ccl_config_parse("{not json", nullptr, &cfg) == CCL_ERR_CONFIG);
  CHECK(ccl_config_load("/nonexistent/cococrola.json", &cfg) != CCL_OK);
}
