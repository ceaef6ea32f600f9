#pragma once

#include <chrono>
#include <map>
#include <string>

namespace cococrola::http {

struct Response {
  int status = 0;
  std::string content_type;
  std::string body;
};

// Raised when no HTTP response was obtained at all (DNS, refused, timeout).
struct TransportError {
  std::string message;
};

struct Request {
  std::string url;  // scheme://host[:port]/path
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
  std::chrono::milliseconds timeout{30000};
};

// Performs a blocking POST. Returns the response for any HTTP status; throws
// TransportError when the exchange itself failed.
Response post(const Request& request);

}  // namespace cococrola::http
