#pragma once

// Thin JSON-over-HTTP POST used by the chat and embedding clients.

#include <chrono>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace llano::http {

struct Endpoint {
  std::string origin;     // scheme://host[:port]
  std::string base_path;  // "" or "/v1"
};

// Throws ConfigError for anything but http(s)://host[:port][/path].
Endpoint parse_url(std::string_view url);

struct Response {
  int status = 0;
  std::string body;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

// Transport failures: Timeout for connect/read timeouts, HttpError
// (status 0) otherwise. Non-2xx statuses are returned, not thrown.
Response post_json(const Endpoint& endpoint, std::string_view path, const std::string& body,
                   const Headers& headers, std::chrono::milliseconds timeout);

}  // namespace llano::http
