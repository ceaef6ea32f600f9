#include "cococrola/generation/orchestrator.hpp"

#include <chrono>
#include <ctime>
#include <thread>

#include "cococrola/error.hpp"
#include "cococrola/json_io.hpp"
#include "cococrola/parallel.hpp"

namespace cococrola::generation {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest load_for_resume(const RunManifest& planned, const fs::path& run_dir) {
  RunManifest existing = read_manifest(manifest_path(run_dir));
  if (!(existing.plan == planned.plan))
    fail(ErrorKind::config, "cannot resume: the manifest in " + run_dir.string() + " was written for a different plan");
  if (existing.entries.size() != planned.entries.size())
    fail(ErrorKind::format, "cannot resume: manifest entry count does not match the plan");
  for (std::size_t i = 0; i < existing.entries.size(); ++i) {
    auto& e = existing.entries[i];
    const auto& p = planned.entries[i];
    if (e.concept_id != p.concept_id || e.language != p.language || e.index != p.index)
      fail(ErrorKind::format, "cannot resume: manifest entries are out of order");
    if (e.status == EntryStatus::ok && (e.image_path.empty() || !fs::exists(run_dir / e.image_path))) {
      e.status = EntryStatus::pending;
      e.image_path.clear();
    }
    // Failed entries get a fresh set of attempts.
    if (e.status == EntryStatus::failed) e.status = EntryStatus::pending;
  }
  return existing;
}

void attempt_entry(ManifestEntry& entry, const RunPlan& plan, GeneratorAdapter& adapter, const ExecuteOptions& opt,
                   bool accepts_seed) {
  GenerationRequest req{entry.prompt_text, std::nullopt, plan.width, plan.height};
  if (accepts_seed) req.seed = entry.seed;
  auto backoff = opt.retry_backoff;
  for (int attempt = 0;; ++attempt) {
    ++entry.attempts;
    GenerationResult result;
    try {
      result = adapter.generate(req);
    } catch (const std::exception& e) {
      result = GenerationFailure{std::string("adapter threw: ") + e.what(), false};
    }
    if (auto* image = std::get_if<GeneratedImage>(&result)) {
      std::string rel = image_relative_path(entry.language, entry.concept_id, entry.index, image->format);
      io::write_file_atomic(opt.run_dir / rel, image->bytes);
      entry.image_path = rel;
      entry.status = EntryStatus::ok;
      entry.error.clear();
      return;
    }
    const auto& failure = std::get<GenerationFailure>(result);
    entry.error = failure.message;
    if (!failure.retryable || attempt >= opt.max_retries) {
      entry.status = EntryStatus::failed;
      return;
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

}  // namespace

RunManifest execute_plan(const RunManifest& planned, GeneratorAdapter& adapter, const ExecuteOptions& opt) {
  if (opt.run_dir.empty()) fail(ErrorKind::config, "run directory not set");
  if (planned.plan.images_per_concept < 2) fail(ErrorKind::config, "images per concept must be >= 2");
  std::error_code ec;
  fs::create_directories(opt.run_dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create run directory " + opt.run_dir.string() + ": " + ec.message());

  const fs::path mpath = manifest_path(opt.run_dir);
  RunManifest manifest = opt.resume && fs::exists(mpath) ? load_for_resume(planned, opt.run_dir) : planned;
  if (manifest.created_at.empty()) manifest.created_at = utc_now();
  manifest.tool_version = opt.tool_version;
  manifest.complete = false;

  const AdapterCapabilities caps = adapter.capabilities();
  const std::size_t workers = static_cast<std::size_t>(std::max(1, caps.max_concurrency));
  const std::size_t batch = std::max<std::size_t>(1, opt.batch_size);

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i)
    if (manifest.entries[i].status != EntryStatus::ok) todo.push_back(i);

  write_manifest(mpath, manifest);
  bool stopped = false;
  for (std::size_t start = 0; start < todo.size(); start += batch) {
    if (opt.stop.stop_requested()) {
      stopped = true;
      break;
    }
    std::size_t end = std::min(todo.size(), start + batch);
    // Workers touch disjoint entries; the manifest is written only here.
    parallel_for(end - start, workers, [&](std::size_t k) {
      if (opt.stop.stop_requested()) return;
      ManifestEntry& e = manifest.entries[todo[start + k]];
      e.status = EntryStatus::pending;
      attempt_entry(e, manifest.plan, adapter, opt, caps.accepts_seed);
    });
    write_manifest(mpath, manifest);
    if (opt.on_batch) opt.on_batch(manifest);
  }
  stopped = stopped || manifest.count(EntryStatus::pending) > 0;

  const std::size_t total = manifest.entries.size();
  manifest.complete = !stopped;
  manifest.degraded = total > 0 && static_cast<double>(manifest.count(EntryStatus::failed)) >
                                       kDegradedFailureFraction * static_cast<double>(total);
  write_manifest(mpath, manifest);
  return manifest;
}

}  // namespace cococrola::generation
