#include <doctest.h>

#include "cococrola/config.hpp"
#include "cococrola/error.hpp"

using namespace cococrola;
using namespace cococrola::config;

namespace {

ErrorKind kind_of(const std::string& body) {
  try {
    parse_config(body, "/base");
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}

}  // namespace

TEST_CASE("language codes") {
  CHECK(valid_language_code("en"));
  CHECK(valid_language_code("yue"));
  CHECK_FALSE(valid_language_code("EN"));
  CHECK_FALSE(valid_language_code("e"));
  CHECK_FALSE(valid_language_code("engl"));
  CHECK_FALSE(valid_language_code("e1"));
}

TEST_CASE("minimal config gets defaults and resolves paths against its directory") {
  auto c = parse_config(R"({"languages": ["en", "es"]})", "/base");
  CHECK(c.source_language == "en");
  CHECK(c.generation.images_per_concept == 10);
  CHECK(c.scoring.dt.mode == metrics::DtConfig::Mode::sampled);
  CHECK(c.scoring.thresholds.rule == metrics::PossessionRule::either);
  CHECK(c.resolve("templates.json") == std::filesystem::path("/base/templates.json"));
  CHECK(c.resolve("/abs/x") == std::filesystem::path("/abs/x"));
}

TEST_CASE("shipped config loads") {
  auto c = load_config(std::filesystem::path(COCOCROLA_DATA_DIR) / "cococrola.json");
  CHECK(c.languages.size() == 7);
  CHECK(c.concepts.services.size() == 4);
  CHECK(c.concepts.services[0].id == "google");
  CHECK(c.scoring.thresholds.xc == 0.5);
  CHECK(c.scoring.thresholds.wc == 0.25);
}

TEST_CASE("invalid configs are config errors") {
  CHECK(kind_of(R"({"languages": []})") == ErrorKind::config);
  CHECK(kind_of(R"({"languages": ["en", "en"]})") == ErrorKind::config);
  CHECK(kind_of(R"({"languages": ["es"], "source_language": "en"})") == ErrorKind::config);
  CHECK(kind_of(R"({"languages": ["en"], "scoring": {"dt_mode": "fast"}})") == ErrorKind::config);
  CHECK(kind_of(R"({"languages": ["en"], "scoring": {"thresholds": {"rule": "and"}}})") == ErrorKind::config);
  CHECK(kind_of(R"({"languages": ["en"], "generation": {"images_per_concept": "ten"}})") == ErrorKind::config);
  CHECK(kind_of("[1, 2]") == ErrorKind::config);
  CHECK(kind_of("{oops") == ErrorKind::config);
}
