#include <algorithm>
#include <cstdlib>
#include <vector>

#include "cococrola/error.hpp"
#include "cococrola/generation/adapter.hpp"
#include "cococrola/generation/png.hpp"
#include "cococrola/http.hpp"
#include "cococrola/json_io.hpp"
#include "cococrola/text.hpp"

namespace cococrola::generation {

GenerationResult StubAdapter::generate(const GenerationRequest& request) {
  const std::uint32_t w = std::min<std::uint32_t>(request.width, 64);
  const std::uint32_t h = std::min<std::uint32_t>(request.height, 64);
  std::uint64_t state = text::fnv1a64(request.prompt);
  state = text::fnv1a64(std::to_string(request.seed.value_or(0)), state);

  // splitmix64 stream for colours and pattern parameters
  auto next = [&state]() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  std::uint8_t base[3], accent[3];
  for (auto& c : base) c = static_cast<std::uint8_t>(next());
  for (auto& c : accent) c = static_cast<std::uint8_t>(next());
  const std::uint32_t stripe = 2 + static_cast<std::uint32_t>(next() % 14);
  const std::uint32_t phase = static_cast<std::uint32_t>(next() % 64);

  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h * 3);
  for (std::uint32_t y = 0; y < h; ++y)
    for (std::uint32_t x = 0; x < w; ++x) {
      bool on = ((x + y + phase) / stripe) % 2 == 0;
      const std::uint8_t* c = on ? accent : base;
      std::size_t at = (static_cast<std::size_t>(y) * w + x) * 3;
      pixels[at + 0] = static_cast<std::uint8_t>(c[0] ^ (x * 3));
      pixels[at + 1] = static_cast<std::uint8_t>(c[1] ^ (y * 3));
      pixels[at + 2] = c[2];
    }
  return GeneratedImage{encode_png_rgb(pixels, w, h), "png"};
}

std::string extension_for_content_type(const std::string& content_type) {
  std::string ct = text::lower(text::split(content_type, ';').front());
  ct = text::trim(ct);
  if (ct == "image/png") return "png";
  if (ct == "image/jpeg" || ct == "image/jpg") return "jpg";
  if (ct == "image/webp") return "webp";
  return {};
}

HttpAdapter::HttpAdapter(HttpAdapterConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.url.empty()) fail(ErrorKind::config, "generator adapter URL is empty");
  if (cfg_.max_concurrency < 1) fail(ErrorKind::config, "adapter max_concurrency must be >= 1");
  if (!cfg_.api_key_env.empty()) {
    const char* v = std::getenv(cfg_.api_key_env.c_str());
    if (v == nullptr) fail(ErrorKind::config, "environment variable " + cfg_.api_key_env + " is not set");
    api_key_ = v;
  }
}

GenerationResult HttpAdapter::generate(const GenerationRequest& request) {
  io::Json body = {{"prompt", request.prompt}, {"width", request.width}, {"height", request.height}};
  if (request.seed && cfg_.accepts_seed) body["seed"] = *request.seed;
  http::Request req;
  req.url = cfg_.url;
  req.body = body.dump();
  req.timeout = cfg_.timeout;
  if (!api_key_.empty()) req.headers["Authorization"] = api_key_;
  http::Response resp;
  try {
    resp = http::post(req);
  } catch (const http::TransportError& e) {
    return GenerationFailure{e.message, true};
  }
  if (resp.status < 200 || resp.status >= 300) {
    bool retryable = resp.status == 429 || resp.status >= 500;
    std::string detail = resp.body.substr(0, 200);
    return GenerationFailure{"HTTP " + std::to_string(resp.status) + (detail.empty() ? "" : ": " + detail), retryable};
  }
  std::string ext = extension_for_content_type(resp.content_type);
  if (ext.empty()) return GenerationFailure{"unexpected content type '" + resp.content_type + "'", false};
  if (resp.body.empty()) return GenerationFailure{"empty image body", true};
  return GeneratedImage{std::move(resp.body), ext};
}

}  // namespace cococrola::generation
