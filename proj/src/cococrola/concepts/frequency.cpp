#include "cococrola/concepts/frequency.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <set>

#include "cococrola/error.hpp"
#include "cococrola/text.hpp"

namespace cococrola::concepts {

namespace {

std::optional<std::uint64_t> parse_count(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct ParsedLine {
  std::string surface;
  std::optional<std::uint64_t> count;
  std::size_t position;
};

}  // namespace

std::string to_string(TermSource s) {
  switch (s) {
    case TermSource::tv_captions: return "tv_captions";
    case TermSource::fiction: return "fiction";
    case TermSource::label_set: return "label_set";
  }
  return "unknown";
}

TermSource parse_term_source(const std::string& s) {
  if (s == "tv_captions") return TermSource::tv_captions;
  if (s == "fiction") return TermSource::fiction;
  if (s == "label_set") return TermSource::label_set;
  fail(ErrorKind::config, "unknown term source '" + s + "'");
}

IngestResult ingest_frequency_lists(const std::vector<FrequencySource>& sources) {
  if (sources.empty()) fail(ErrorKind::invalid_argument, "no frequency sources given");

  IngestResult result;
  std::map<std::string, TermCandidate> best;

  for (const auto& src : sources) {
    std::vector<ParsedLine> parsed;
    bool any_count = false;
    auto lines = text::split(src.text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();  // trailing newline
    for (const auto& raw : lines) {
      ++result.tally.lines;
      auto fields = text::split_ws(text::normalize_surface(raw));
      if (fields.empty()) {
        ++result.tally.malformed;
        continue;
      }
      std::optional<std::uint64_t> count = parse_count(fields.back());
      if (count && fields.size() == 1) {
        ++result.tally.malformed;
        continue;
      }
      if (count) fields.pop_back();
      any_count = any_count || count.has_value();
      std::string surface = fields[0];
      for (std::size_t i = 1; i < fields.size(); ++i) surface += " " + fields[i];
      parsed.push_back({text::lower(surface), count, parsed.size()});
    }

    if (any_count) {
      // Lines without a count sort after every counted line.
      std::stable_sort(parsed.begin(), parsed.end(), [](const ParsedLine& a, const ParsedLine& b) {
        return a.count.value_or(0) > b.count.value_or(0);
      });
    }

    std::set<std::string> seen_in_stream;
    std::uint32_t rank = 0;
    for (const auto& p : parsed) {
      if (!seen_in_stream.insert(p.surface).second) continue;
      ++rank;
      auto it = best.find(p.surface);
      if (it == best.end()) {
        best.emplace(p.surface, TermCandidate{p.surface, rank, src.source});
      } else if (rank < it->second.frequency_rank) {
        it->second.frequency_rank = rank;
        it->second.source = src.source;
      }
    }
  }

  result.candidates.reserve(best.size());
  for (auto& [surface, cand] : best) result.candidates.push_back(std::move(cand));
  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const TermCandidate& a, const TermCandidate& b) { return a.frequency_rank < b.frequency_rank; });
  return result;
}

std::vector<TermCandidate> select_source_terms(const std::vector<TermCandidate>& candidates, std::size_t top_k,
                                               const std::vector<std::string>& label_set) {
  if (top_k == 0) fail(ErrorKind::invalid_argument, "top_k must be >= 1");
  std::vector<TermCandidate> out;
  std::set<std::string> present;
  for (const auto& c : candidates) {
    if (out.size() >= top_k) break;
    if (present.insert(c.surface).second) out.push_back(c);
  }
  for (const auto& raw : label_set) {
    std::string surface = text::lower(text::normalize_surface(raw));
    if (surface.empty()) continue;
    if (present.insert(surface).second) out.push_back({surface, 0, TermSource::label_set});
  }
  return out;
}

std::vector<std::string> read_term_file(const std::string& body) {
  std::vector<std::string> out;
  for (const auto& raw : text::split(body, '\n')) {
    std::string line = text::normalize_surface(raw);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace cococrola::concepts
