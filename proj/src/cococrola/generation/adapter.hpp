#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace cococrola::generation {

struct AdapterCapabilities {
  bool accepts_seed = true;
  int max_concurrency = 1;
};

struct GenerationRequest {
  std::string prompt;
  std::optional<std::uint64_t> seed;
  std::uint32_t width = 512;
  std::uint32_t height = 512;
};

struct GeneratedImage {
  std::string bytes;
  std::string format;  // file extension: png, jpg, webp
};

struct GenerationFailure {
  std::string message;
  bool retryable = false;
};

using GenerationResult = std::variant<GeneratedImage, GenerationFailure>;

// A text-to-image model behind a uniform call. Implementations must be safe
// to call from `capabilities().max_concurrency` threads at once.
class GeneratorAdapter {
 public:
  virtual ~GeneratorAdapter() = default;
  virtual AdapterCapabilities capabilities() const = 0;
  virtual GenerationResult generate(const GenerationRequest& request) = 0;
};

// Deterministic procedural images keyed by hash(prompt, seed). Stub images are
// always small (at most 64x64) regardless of the requested size.
class StubAdapter final : public GeneratorAdapter {
 public:
  explicit StubAdapter(int max_concurrency = 4) : max_concurrency_(max_concurrency) {}
  AdapterCapabilities capabilities() const override { return {true, max_concurrency_}; }
  GenerationResult generate(const GenerationRequest& request) override;

 private:
  int max_concurrency_;
};

struct HttpAdapterConfig {
  std::string url;
  int max_concurrency = 2;
  bool accepts_seed = true;
  std::chrono::milliseconds timeout{120000};
  std::string api_key_env;
};

// POST {"prompt", "seed"?, "width", "height"} -> image bytes with an image/*
// content type. 429/5xx and transport errors are retryable; other non-2xx
// statuses are not.
class HttpAdapter final : public GeneratorAdapter {
 public:
  explicit HttpAdapter(HttpAdapterConfig cfg);
  AdapterCapabilities capabilities() const override { return {cfg_.accepts_seed, cfg_.max_concurrency}; }
  GenerationResult generate(const GenerationRequest& request) override;

 private:
  HttpAdapterConfig cfg_;
  std::string api_key_;
};

// Maps an image content type onto a file extension; empty when unknown.
std::string extension_for_content_type(const std::string& content_type);

}  // namespace cococrola::generation
