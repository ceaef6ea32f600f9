#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <stop_token>

#include "cococrola/generation/adapter.hpp"
#include "cococrola/generation/manifest.hpp"

namespace cococrola::generation {

struct ExecuteOptions {
  std::filesystem::path run_dir;
  bool resume = false;
  int max_retries = 2;  // extra attempts for retryable failures
  std::chrono::milliseconds retry_backoff{250};
  std::size_t batch_size = 16;  // manifest is rewritten after every batch
  std::stop_token stop;         // checked between entries
  std::string tool_version;
  std::function<void(const RunManifest&)> on_batch;  // progress hook, optional
};

// Generates every pending entry of `manifest` and persists progress to
// `<run_dir>/manifest.json`. With `resume`, an existing manifest for the same
// plan is loaded and its ok entries (whose files still exist) are kept.
// Returns the final manifest; `complete` is false if the run was stopped.
RunManifest execute_plan(const RunManifest& planned, GeneratorAdapter& adapter, const ExecuteOptions& options);

}  // namespace cococrola::generation
