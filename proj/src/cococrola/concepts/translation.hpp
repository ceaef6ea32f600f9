#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cococrola/concepts/types.hpp"

namespace cococrola::concepts {

struct ClientError {
  enum class Kind { not_found, rate_limited, unavailable, timeout, bad_response };
  Kind kind = Kind::unavailable;
  std::string message;
};

std::string to_string(ClientError::Kind k);

using SurfaceMap = std::map<LanguageCode, std::string>;
using TranslateResult = std::variant<SurfaceMap, ClientError>;

class TranslationClient {
 public:
  virtual ~TranslationClient() = default;
  virtual const std::string& id() const = 0;
  virtual TranslateResult translate(const std::string& term, const LanguageCode& source,
                                    const std::vector<LanguageCode>& targets) = 0;
};

// Replays `<root>/<service>/<slug(term)>.json`, a JSON object mapping
// language code to surface. A missing file replays as a timeout. A file of the
// form {"$error": "<kind>"} replays that recorded failure.
class FixtureTranslationClient final : public TranslationClient {
 public:
  FixtureTranslationClient(std::string service_id, std::filesystem::path root);
  const std::string& id() const override { return id_; }
  TranslateResult translate(const std::string& term, const LanguageCode& source,
                            const std::vector<LanguageCode>& targets) override;

 private:
  std::string id_;
  std::filesystem::path dir_;
};

struct HttpServiceConfig {
  std::string id;
  std::string endpoint;     // POST target
  std::string api_key_env;  // environment variable holding the credential, may be empty
  std::string api_key_header = "Authorization";
  std::chrono::milliseconds timeout{15000};
};

// Generic JSON translation endpoint:
//   request  {"text": term, "source": "en", "targets": ["es", ...]}
//   response {"translations": {"es": "...", ...}}
// 429 maps to rate_limited, other non-2xx to unavailable.
class HttpTranslationClient final : public TranslationClient {
 public:
  explicit HttpTranslationClient(HttpServiceConfig cfg);
  const std::string& id() const override { return cfg_.id; }
  TranslateResult translate(const std::string& term, const LanguageCode& source,
                            const std::vector<LanguageCode>& targets) override;

 private:
  HttpServiceConfig cfg_;
  std::string api_key_;
};

struct RetryPolicy {
  int max_retries = 3;  // additional attempts after a rate-limit signal
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to sleep_for
};

// Collects every client's answer for one term. Failed clients are recorded in
// `failures` and left out of `per_service`; surfaces are normalized and only
// benchmark target languages are kept.
TranslationCandidates query_translators(const std::string& term, const LanguageCode& source,
                                        const std::vector<LanguageCode>& targets,
                                        std::span<TranslationClient* const> clients, const RetryPolicy& retry = {});

// Queries many terms with at most `max_in_flight` concurrent requests per
// service. Output order matches `terms`.
std::vector<TranslationCandidates> query_all(const std::vector<std::string>& terms, const LanguageCode& source,
                                             const std::vector<LanguageCode>& targets,
                                             std::span<TranslationClient* const> clients, const RetryPolicy& retry,
                                             std::size_t max_in_flight = 4);

}  // namespace cococrola::concepts
