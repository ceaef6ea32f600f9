// Deterministic stand-in for the real embedder. Speaks the same command-line
// contract:
//
//   stub-embedder images --manifest P --out D
//   stub-embedder texts --concepts P --lang en --out F
//
// Image vectors mix a per-concept direction, a per-(concept, language) drift
// and noise derived from the image bytes, so scores behave plausibly without
// any model.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cococrola/cococrola.h"

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<float> direction(std::uint64_t seed, std::size_t dim) {
  std::mt19937_64 rng(seed);
  std::vector<float> v(dim);
  // Box-Muller on raw 53-bit draws keeps this independent of the library's
  // distribution implementations.
  auto unit = [&] { return (static_cast<double>(rng() >> 11) + 0.5) / 9007199254740992.0; };
  for (std::size_t i = 0; i < dim; ++i) {
    double u1 = unit(), u2 = unit();
    v[i] = static_cast<float>(std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2));
  }
  return v;
}

void add_scaled(std::vector<float>& acc, const std::vector<float>& v, float w) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
}

bool read_bytes(const fs::path& p, std::string& out) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return false;
  out.assign(std::istreambuf_iterator<char>(in), {});
  return !out.empty();
}

bool check(ccl_status s, const std::string& what) {
  if (s == CCL_OK) return true;
  std::fprintf(stderr, "stub-embedder: %s: %s\n", what.c_str(), ccl_last_error());
  return false;
}

int embed_images(const fs::path& manifest_path, const fs::path& out_dir, std::size_t dim) {
  nlohmann::json manifest;
  try {
    std::ifstream in(manifest_path);
    manifest = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "stub-embedder: cannot read manifest %s: %s\n", manifest_path.c_str(), e.what());
    return 2;
  }
  const fs::path run_dir = manifest_path.parent_path();

  struct Group {
    ccl_embeddings* set = nullptr;
    std::string concept_id, language;
  };
  std::map<std::pair<std::string, std::string>, Group> groups;
  int skipped = 0;
  for (const auto& e : manifest.at("entries")) {
    if (e.at("status").get<std::string>() != "ok") continue;
    std::string concept_id = e.at("concept_id").get<std::string>();
    std::string language = e.at("language").get<std::string>();
    auto index = e.at("index").get<std::uint32_t>();
    std::string bytes;
    if (!read_bytes(run_dir / e.at("image_path").get<std::string>(), bytes)) {
      std::fprintf(stderr, "stub-embedder: skipping unreadable image %s\n", e.at("image_path").get<std::string>().c_str());
      ++skipped;
      continue;
    }
    auto& g = groups[{language, concept_id}];
    if (!g.set) {
      g.concept_id = concept_id;
      g.language = language;
      if (!check(ccl_embeddings_create(CCL_SET_IMAGE, dim, &g.set), "create")) return 1;
    }
    std::vector<float> v(dim, 0.0f);
    add_scaled(v, direction(fnv(concept_id), dim), 1.0f);
    add_scaled(v, direction(fnv(concept_id + "|" + language), dim), 0.6f);
    add_scaled(v, direction(fnv(bytes), dim), 0.5f);
    if (!check(ccl_embeddings_add_image(g.set, concept_id.c_str(), language.c_str(), index, v.data(), 1), "add")) return 1;
  }

  int status = 0;
  for (auto& [key, g] : groups) {
    fs::path path = out_dir / g.language / (g.concept_id + ".emb");
    fs::create_directories(path.parent_path());
    if (check(ccl_embeddings_write(g.set, path.c_str()), "write " + path.string())) {
      std::printf("%s\n", path.c_str());
    } else {
      status = 1;
    }
    ccl_embeddings_free(g.set);
  }
  return skipped > 0 ? 1 : status;
}

int embed_texts(const fs::path& concepts_path, const std::string& lang, const fs::path& out, std::size_t dim) {
  std::ifstream in(concepts_path);
  if (!in) {
    std::fprintf(stderr, "stub-embedder: cannot read %s\n", concepts_path.c_str());
    return 2;
  }
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) header.push_back(field);
  }
  std::size_t column = 0;
  for (std::size_t i = 1; i < header.size(); ++i)
    if (header[i] == lang) column = i;
  if (column == 0) {
    std::fprintf(stderr, "stub-embedder: language %s not in concept list\n", lang.c_str());
    return 2;
  }

  ccl_embeddings* set = nullptr;
  if (!check(ccl_embeddings_create(CCL_SET_TEXT, dim, &set), "create")) return 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() <= column) continue;
    std::vector<float> v(dim, 0.0f);
    add_scaled(v, direction(fnv(fields[0]), dim), 1.0f);
    add_scaled(v, direction(fnv(fields[column] + "|text"), dim), 1.2f);
    if (!check(ccl_embeddings_add_text(set, fields[0].c_str(), v.data(), 1), "add")) return 1;
  }
  if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
  bool ok = check(ccl_embeddings_write(set, out.c_str()), "write " + out.string());
  ccl_embeddings_free(set);
  if (!ok) return 1;
  std::printf("%s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic stub embedder"};
  app.require_subcommand(1);
  std::size_t dim = 32;
  app.add_option("--dim", dim, "Vector dimension")->check(CLI::PositiveNumber);

  auto* images = app.add_subcommand("images", "Embed the ok images of a run manifest");
  std::string manifest, out_dir;
  images->add_option("--manifest", manifest)->required();
  images->add_option("--out", out_dir)->required();

  auto* texts = app.add_subcommand("texts", "Embed concept text");
  std::string concepts, lang = "en", out;
  texts->add_option("--concepts", concepts)->required();
  texts->add_option("--lang", lang);
  texts->add_option("--out", out)->required();

  CLI11_PARSE(app, argc, argv);
  if (images->parsed()) return embed_images(manifest, out_dir, dim);
  return embed_texts(concepts, lang, out, dim);
}
