#pragma once

#include <chrono>
#include <string>
#include <utility>

#include <httplib.h>

#include "ruomis/error.hpp"
#include "ruomis/ingest.hpp"

namespace ruomis::ingest {

/// Splits `scheme://host[:port]/path?query` into origin and path+query.
inline std::pair<std::string, std::string> split_origin(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorKind::kFetch, url, "url has no scheme");
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

struct NetworkFetcherOptions {
  std::chrono::seconds timeout{10};
  std::string user_agent = "ruomis-crawler/1.0";
};

class NetworkFetcher : public Fetcher {
 public:
  explicit NetworkFetcher(NetworkFetcherOptions options = {})
      : options_(std::move(options)) {}

  std::string fetch(const std::string& url) override {
    auto [origin, path] = split_origin(url);
    httplib::Client client(origin);
    if (!client.is_valid())
      throw Error(ErrorKind::kFetch, url, "unsupported url scheme");
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_follow_location(true);
    httplib::Headers headers{{"User-Agent", options_.user_agent}};
    auto res = client.Get(path, headers);
    if (!res)
      throw Error(ErrorKind::kFetch, url, httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
      throw Error(ErrorKind::kFetch, url,
                  "HTTP status " + std::to_string(res->status));
    return res->body;
  }

 private:
  NetworkFetcherOptions options_;
};

}  // namespace ruomis::ingest
