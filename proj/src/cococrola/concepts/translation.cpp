#include "cococrola/concepts/translation.hpp"

#include <cstdlib>
#include <thread>

#include "cococrola/error.hpp"
#include "cococrola/http.hpp"
#include "cococrola/json_io.hpp"
#include "cococrola/parallel.hpp"
#include "cococrola/text.hpp"

namespace cococrola::concepts {

namespace fs = std::filesystem;

std::string to_string(ClientError::Kind k) {
  switch (k) {
    case ClientError::Kind::not_found: return "not_found";
    case ClientError::Kind::rate_limited: return "rate_limited";
    case ClientError::Kind::unavailable: return "unavailable";
    case ClientError::Kind::timeout: return "timeout";
    case ClientError::Kind::bad_response: return "bad_response";
  }
  return "unknown";
}

namespace {

ClientError::Kind parse_error_kind(const std::string& s) {
  for (auto k : {ClientError::Kind::not_found, ClientError::Kind::rate_limited, ClientError::Kind::unavailable,
                 ClientError::Kind::timeout, ClientError::Kind::bad_response})
    if (to_string(k) == s) return k;
  return ClientError::Kind::bad_response;
}

TranslateResult surfaces_from_json(const io::Json& obj, const std::string& origin) {
  if (!obj.is_object()) return ClientError{ClientError::Kind::bad_response, origin + ": expected an object"};
  SurfaceMap out;
  for (const auto& [lang, value] : obj.items()) {
    if (!value.is_string()) return ClientError{ClientError::Kind::bad_response, origin + ": non-string surface for " + lang};
    out.emplace(lang, value.get<std::string>());
  }
  return out;
}

}  // namespace

FixtureTranslationClient::FixtureTranslationClient(std::string service_id, fs::path root)
    : id_(std::move(service_id)), dir_(std::move(root) / id_) {}

TranslateResult FixtureTranslationClient::translate(const std::string& term, const LanguageCode&,
                                                    const std::vector<LanguageCode>&) {
  fs::path file = dir_ / (text::slug(term) + ".json");
  if (!fs::exists(file)) return ClientError{ClientError::Kind::timeout, "no recorded response for '" + term + "'"};
  io::Json body;
  try {
    body = io::read_json(file);
  } catch (const Error& e) {
    return ClientError{ClientError::Kind::bad_response, e.what()};
  }
  if (body.is_object() && body.contains("$error"))
    return ClientError{parse_error_kind(body["$error"].get<std::string>()), "recorded failure in " + file.string()};
  return surfaces_from_json(body, file.string());
}

HttpTranslationClient::HttpTranslationClient(HttpServiceConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.endpoint.empty()) fail(ErrorKind::config, "translation service '" + cfg_.id + "' has no endpoint");
  if (!cfg_.api_key_env.empty()) {
    const char* v = std::getenv(cfg_.api_key_env.c_str());
    if (v == nullptr) fail(ErrorKind::config, "environment variable " + cfg_.api_key_env + " is not set for service '" + cfg_.id + "'");
    api_key_ = v;
  }
}

TranslateResult HttpTranslationClient::translate(const std::string& term, const LanguageCode& source,
                                                 const std::vector<LanguageCode>& targets) {
  http::Request req;
  req.url = cfg_.endpoint;
  req.timeout = cfg_.timeout;
  req.body = io::Json{{"text", term}, {"source", source}, {"targets", targets}}.dump();
  if (!api_key_.empty()) req.headers[cfg_.api_key_header] = api_key_;
  http::Response resp;
  try {
    resp = http::post(req);
  } catch (const http::TransportError& e) {
    return ClientError{ClientError::Kind::timeout, e.message};
  }
  if (resp.status == 429) return ClientError{ClientError::Kind::rate_limited, cfg_.id + ": HTTP 429"};
  if (resp.status == 404) return ClientError{ClientError::Kind::not_found, cfg_.id + ": HTTP 404"};
  if (resp.status < 200 || resp.status >= 300)
    return ClientError{ClientError::Kind::unavailable, cfg_.id + ": HTTP " + std::to_string(resp.status)};
  try {
    auto body = io::Json::parse(resp.body);
    return surfaces_from_json(body.at("translations"), cfg_.id);
  } catch (const io::Json::exception& e) {
    return ClientError{ClientError::Kind::bad_response, cfg_.id + ": " + e.what()};
  }
}

TranslationCandidates query_translators(const std::string& term, const LanguageCode& source,
                                        const std::vector<LanguageCode>& targets,
                                        std::span<TranslationClient* const> clients, const RetryPolicy& retry) {
  if (clients.empty()) fail(ErrorKind::config, "no translation clients configured");
  auto sleep = retry.sleep ? retry.sleep : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };

  TranslationCandidates out;
  out.source_term = term;
  for (TranslationClient* client : clients) {
    TranslateResult result;
    auto backoff = retry.initial_backoff;
    for (int attempt = 0;; ++attempt) {
      result = client->translate(term, source, targets);
      auto* err = std::get_if<ClientError>(&result);
      if (err == nullptr || err->kind != ClientError::Kind::rate_limited || attempt >= retry.max_retries) break;
      sleep(backoff);
      backoff = std::chrono::milliseconds(static_cast<long long>(backoff.count() * retry.multiplier));
    }

    if (auto* err = std::get_if<ClientError>(&result)) {
      out.failures[client->id()] = to_string(err->kind) + ": " + err->message;
      continue;
    }
    SurfaceMap kept;
    for (const auto& [lang, surface] : std::get<SurfaceMap>(result)) {
      if (std::find(targets.begin(), targets.end(), lang) == targets.end()) continue;
      std::string norm = text::normalize_surface(surface);
      if (!norm.empty()) kept.emplace(lang, std::move(norm));
    }
    if (kept.empty()) {
      out.failures[client->id()] = "empty response";
      continue;
    }
    out.service_language_counts[client->id()] = static_cast<int>(kept.size());
    out.per_service.emplace(client->id(), std::move(kept));
  }
  return out;
}

std::vector<TranslationCandidates> query_all(const std::vector<std::string>& terms, const LanguageCode& source,
                                             const std::vector<LanguageCode>& targets,
                                             std::span<TranslationClient* const> clients, const RetryPolicy& retry,
                                             std::size_t max_in_flight) {
  if (clients.empty()) fail(ErrorKind::config, "no translation clients configured");
  std::vector<TranslationCandidates> out(terms.size());
  // Each worker issues one request at a time, so the worker count bounds the
  // in-flight requests per service.
  parallel_for(terms.size(), max_in_flight,
               [&](std::size_t i) { out[i] = query_translators(terms[i], source, targets, clients, retry); });
  return out;
}

}  // namespace cococrola::concepts
