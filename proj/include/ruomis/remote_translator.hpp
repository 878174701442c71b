#pragma once

// HTTP translation backend. Wire contract:
//   POST <endpoint>  Authorization: Bearer <key>
//   {"texts":[...],"from":"ur-Latn","to":"en"}  ->  {"translations":[...]}
// Texts go out in groups of batch_size; groups run concurrently up to
// max_concurrency and are reassembled in input order.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "ruomis/error.hpp"
#include "ruomis/network_fetcher.hpp"
#include "ruomis/translate.hpp"

namespace ruomis::translate {

inline constexpr int kMaxRetries = 3;

inline bool is_transient_status(int status) {
  return status == 408 || status == 429 || status >= 500;
}

class RemoteBackend : public Backend {
 public:
  RemoteBackend(std::string endpoint_url, std::string api_key,
                std::size_t batch_size, std::size_t max_concurrency,
                std::chrono::milliseconds retry_base_delay,
                std::chrono::seconds timeout)
      : endpoint_(std::move(endpoint_url)),
        api_key_(std::move(api_key)),
        batch_size_(std::max<std::size_t>(batch_size, 1)),
        max_concurrency_(std::max<std::size_t>(max_concurrency, 1)),
        retry_base_delay_(retry_base_delay),
        timeout_(timeout) {
    std::tie(origin_, path_) = ingest::split_origin(endpoint_);
  }

  /// Resolves the key from the environment; ConfigError when unset.
  static RemoteBackend from_config(const TranslatorConfig& config) {
    if (config.endpoint_url.empty())
      throw Error(ErrorKind::kConfig, "endpoint_url",
                  "remote backend needs an endpoint");
    if (config.api_key_env_name.empty())
      throw Error(ErrorKind::kConfig, "api_key_env",
                  "remote backend needs the name of the key variable");
    const char* key = std::getenv(config.api_key_env_name.c_str());
    if (!key || !*key)
      throw Error(ErrorKind::kConfig, config.api_key_env_name,
                  "environment variable is not set");
    if (config.batch_size == 0)
      throw Error(ErrorKind::kConfig, "batch_size", "must be positive");
    return RemoteBackend(
        config.endpoint_url, key, config.batch_size, config.max_concurrency,
        std::chrono::milliseconds(config.retry_base_delay_ms),
        std::chrono::seconds(config.timeout_seconds));
  }

  std::vector<std::string> translate(const std::vector<std::string>& texts) override {
    std::size_t groups = (texts.size() + batch_size_ - 1) / batch_size_;
    std::vector<std::vector<std::string>> results(groups);
    std::vector<std::exception_ptr> errors(groups);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
      for (std::size_t g; (g = next.fetch_add(1)) < groups;) {
        auto first = texts.begin() + static_cast<std::ptrdiff_t>(g * batch_size_);
        auto last = texts.begin() + static_cast<std::ptrdiff_t>(
                                        std::min(texts.size(), (g + 1) * batch_size_));
        try {
          results[g] = send_with_retry({first, last});
        } catch (...) {
          errors[g] = std::current_exception();
        }
      }
    };
    std::size_t n_threads = std::min(max_concurrency_, groups);
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    // Report the earliest failing group so the error is schedule-independent.
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    std::vector<std::string> out;
    out.reserve(texts.size());
    for (auto& r : results)
      for (auto& s : r) out.push_back(std::move(s));
    return out;
  }

 private:
  std::vector<std::string> send_with_retry(const std::vector<std::string>& group) const {
    nlohmann::json body = {{"texts", group}, {"from", "ur-Latn"}, {"to", "en"}};
    const std::string payload = body.dump();
    for (int attempt = 0;; ++attempt) {
      httplib::Client client(origin_);
      client.set_connection_timeout(timeout_);
      client.set_read_timeout(timeout_);
      client.set_bearer_token_auth(api_key_);
      auto res = client.Post(path_, payload, "application/json");

      std::optional<int> status;
      std::string detail;
      if (!res) {
        detail = httplib::to_string(res.error());
      } else if (res->status == 200) {
        return parse_response(res->body, group.size());
      } else {
        status = res->status;
        detail = res->body.substr(0, 200);
      }
      bool transient = !status || is_transient_status(*status);
      if (!transient || attempt >= kMaxRetries)
        throw Error(ErrorKind::kRemote,
                    status ? "status " + std::to_string(*status) : "transport",
                    detail);
      std::this_thread::sleep_for(retry_base_delay_ * (1 << attempt));
    }
  }

  static std::vector<std::string> parse_response(const std::string& body,
                                                 std::size_t expected) {
    auto fail = [&](const std::string& why) {
      return Error(ErrorKind::kRemote, "status 200",
                   why + ": " + body.substr(0, 200));
    };
    nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw fail("response is not an object");
    auto it = doc.find("translations");
    if (it == doc.end() || !it->is_array()) throw fail("missing translations array");
    if (it->size() != expected) throw fail("translation count mismatch");
    std::vector<std::string> out;
    for (const auto& t : *it) {
      if (!t.is_string()) throw fail("non-string translation");
      out.push_back(t.get<std::string>());
    }
    return out;
  }

  std::string endpoint_;
  std::string api_key_;
  std::string origin_;
  std::string path_;
  std::size_t batch_size_;
  std::size_t max_concurrency_;
  std::chrono::milliseconds retry_base_delay_;
  std::chrono::seconds timeout_;
};

inline std::unique_ptr<Backend> make_backend(const TranslatorConfig& config) {
  if (config.backend == BackendKind::kRemote)
    return std::make_unique<RemoteBackend>(RemoteBackend::from_config(config));
  if (config.dictionary_path.empty())
    throw Error(ErrorKind::kConfig, "dictionary_path",
                "offline backend needs a gloss dictionary");
  return std::make_unique<OfflineBackend>(GlossDictionary::load(config.dictionary_path));
}

inline CorpusBatch translate_batch(CorpusBatch batch, const TranslatorConfig& config) {
  auto backend = make_backend(config);
  return translate_batch(std::move(batch), *backend, config.skip_translated);
}

}  // namespace ruomis::translate
