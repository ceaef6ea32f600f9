#include "cococrola/concepts/concept_list.hpp"

#include <map>

#include "cococrola/error.hpp"
#include "cococrola/json_io.hpp"
#include "cococrola/text.hpp"

namespace cococrola::concepts {

namespace fs = std::filesystem;

std::string to_string(DiscardReason r) {
  switch (r) {
    case DiscardReason::untranslatable: return "untranslatable";
    case DiscardReason::unfilled_language: return "unfilled-language";
    case DiscardReason::non_noun: return "non-noun";
    case DiscardReason::synset_miss: return "synset-miss";
    case DiscardReason::denylist: return "denylist";
  }
  return "unknown";
}

const std::string& ConceptRow::surface(const LanguageCode& lang) const {
  auto it = surfaces.find(lang);
  if (it == surfaces.end()) fail(ErrorKind::invalid_argument, "concept '" + concept_id + "' has no surface for " + lang);
  return it->second;
}

const ConceptRow* ConceptList::find(const std::string& concept_id) const {
  for (const auto& r : rows)
    if (r.concept_id == concept_id) return &r;
  return nullptr;
}

fs::path meta_path(const fs::path& tsv_path) {
  fs::path p = tsv_path;
  p += ".meta.json";
  return p;
}

std::string render_tsv(const ConceptList& list) {
  auto check = [](const std::string& s, const std::string& what) {
    if (s.empty()) fail(ErrorKind::invalid_argument, "empty " + what);
    if (s.find_first_of("\t\n\r") != std::string::npos) fail(ErrorKind::invalid_argument, what + " contains a tab or newline");
  };
  std::string out = "concept_id";
  for (const auto& lang : list.languages) out += "\t" + lang;
  out += "\n";
  for (const auto& row : list.rows) {
    check(row.concept_id, "concept_id");
    out += row.concept_id;
    for (const auto& lang : list.languages) {
      const std::string& s = row.surface(lang);
      check(s, "surface of " + row.concept_id + "/" + lang);
      out += "\t" + s;
    }
    out += "\n";
  }
  return out;
}

ConceptList parse_tsv(const std::string& body, const std::string& origin) {
  auto lines = text::split(body, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) fail(ErrorKind::format, origin + ": empty concept list");
  auto header = text::split(lines[0], '\t');
  if (header.size() < 2 || header[0] != "concept_id") fail(ErrorKind::format, origin + ": bad header");
  ConceptList list;
  list.languages.assign(header.begin() + 1, header.end());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = text::split(line, '\t');
    if (fields.size() != header.size())
      fail(ErrorKind::format, origin + ":" + std::to_string(i + 1) + ": expected " + std::to_string(header.size()) + " fields");
    ConceptRow row;
    row.concept_id = fields[0];
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (fields[c].empty()) fail(ErrorKind::format, origin + ":" + std::to_string(i + 1) + ": empty surface");
      row.surfaces[header[c]] = fields[c];
    }
    if (list.find(row.concept_id) != nullptr) fail(ErrorKind::format, origin + ": duplicate concept_id " + row.concept_id);
    list.rows.push_back(std::move(row));
  }
  return list;
}

void write_concept_list(const fs::path& path, const ConceptList& list, const ConceptListMeta& meta) {
  std::string tsv = render_tsv(list);

  std::map<std::string, std::size_t> counts;
  for (auto r : kAllDiscardReasons) counts[to_string(r)] = 0;
  io::Json discards = io::Json::array();
  for (const auto& d : meta.discards) {
    ++counts[to_string(d.reason)];
    discards.push_back({{"term", d.term}, {"reason", to_string(d.reason)}, {"detail", d.detail}});
  }
  io::Json provenance = io::Json::object();
  for (const auto& row : list.rows) provenance[row.concept_id] = row.provenance;

  io::Json sidecar = {
      {"version", list.version},
      {"languages", list.languages},
      {"source_language", meta.source_language},
      {"rows", list.rows.size()},
      {"input_terms", meta.input_terms},
      {"discard_counts", counts},
      {"discards", discards},
      {"provenance", provenance},
      {"ingest", {{"lines", meta.ingest.lines}, {"malformed", meta.ingest.malformed}}},
      {"tsv_sha256", text::sha256_hex(tsv)},
  };
  io::write_file_atomic(path, tsv);
  io::write_json_atomic(meta_path(path), sidecar);
}

ConceptList read_concept_list(const fs::path& path) {
  std::string body = io::read_file(path);
  ConceptList list = parse_tsv(body, path.string());
  fs::path meta = meta_path(path);
  if (fs::exists(meta)) {
    auto j = io::read_json(meta);
    list.version = j.value("version", "");
    if (j.contains("provenance"))
      for (auto& row : list.rows)
        if (j["provenance"].contains(row.concept_id))
          row.provenance = j["provenance"][row.concept_id].get<std::map<std::string, std::string>>();
  }
  if (list.version.empty()) list.version = "sha256:" + text::sha256_hex(body).substr(0, 12);
  return list;
}

}  // namespace cococrola::concepts
