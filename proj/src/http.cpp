#include "http.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "llano/error.hpp"

namespace llano::http {

Endpoint parse_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorKind::ConfigError, "URL lacks a scheme: " + std::string(url));
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorKind::ConfigError, "unsupported URL scheme: " + std::string(url));
  }
  const auto host_start = scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  Endpoint ep;
  ep.origin = std::string(url.substr(0, path_start));
  if (path_start != std::string_view::npos) {
    ep.base_path = std::string(url.substr(path_start));
    while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();
  }
  if (ep.origin.size() <= host_start) {
    throw Error(ErrorKind::ConfigError, "URL lacks a host: " + std::string(url));
  }
  return ep;
}

Response post_json(const Endpoint& endpoint, std::string_view path, const std::string& body,
                   const Headers& headers, std::chrono::milliseconds timeout) {
  httplib::Client client(endpoint.origin);
  const auto secs = static_cast<time_t>(timeout.count() / 1000);
  const auto usecs = static_cast<time_t>((timeout.count() % 1000) * 1000);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers hdrs;
  for (const auto& [k, v] : headers) hdrs.emplace(k, v);
  const std::string full_path = endpoint.base_path + std::string(path);
  auto res = client.Post(full_path, hdrs, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const std::string what = endpoint.origin + full_path + ": " + httplib::to_string(err);
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw Error(ErrorKind::Timeout, what);
    }
    throw Error(ErrorKind::HttpError, "status 0 " + what);
  }
  return {res->status, res->body};
}

}  // namespace llano::http
