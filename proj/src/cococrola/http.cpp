#include "cococrola/http.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "cococrola/error.hpp"

namespace cococrola::http {

namespace {

struct SplitUrl {
  std::string origin;
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) fail(ErrorKind::config, "URL without scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

Response post(const Request& request) {
  SplitUrl parts = split_url(request.url);
  httplib::Client client(parts.origin);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  httplib::Headers headers;
  for (const auto& [k, v] : request.headers) headers.emplace(k, v);

  auto result = client.Post(parts.path, headers, request.body, request.content_type);
  if (!result) throw TransportError{request.url + ": " + httplib::to_string(result.error())};

  Response response;
  response.status = result->status;
  response.content_type = result->get_header_value("Content-Type");
  response.body = result->body;
  return response;
}

}  // namespace cococrola::http
