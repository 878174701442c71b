#pragma once

// Flat `key = value` configuration. `#` starts a comment line. Path-valued
// keys are resolved against the directory holding the config file.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ruomis/error.hpp"
#include "ruomis/opinion.hpp"
#include "ruomis/text.hpp"
#include "ruomis/translate.hpp"

namespace ruomis {

enum class FetcherKind { kFixture, kNetwork };

struct CrawlConfig {
  std::string start_url;
  std::string product_id;
  std::string comment_selector;
  std::optional<std::string> text_selector;
  std::optional<std::string> next_page_selector;
  std::size_t page_limit = 1;
  FetcherKind fetcher = FetcherKind::kFixture;
  std::string fixture_map;
  std::size_t timeout_seconds = 10;
  std::string user_agent = "ruomis-crawler/1.0";
  std::size_t delay_ms = 0;
};

struct PipelineConfig {
  std::string corpus;
  bool strict_load = true;
  CrawlConfig crawl;

  std::string tag_lexicon;
  std::string opinion_lexicon;
  std::string noise_keywords;  // empty: built-in list
  translate::TranslatorConfig translator;

  opinion::Mode mode = opinion::Mode::kAggregate;
  bool noise_filter = true;
  bool strict_eval = false;
  std::size_t threads = 0;  // 0: hardware concurrency

  std::string output_dir = "out";
};

namespace detail {

inline bool parse_bool(const std::string& key, std::string_view v) {
  std::string s = text::lower(v);
  if (s == "on" || s == "true" || s == "yes" || s == "1") return true;
  if (s == "off" || s == "false" || s == "no" || s == "0") return false;
  throw Error(ErrorKind::kConfig, key, "expected on/off, got '" + std::string(v) + "'");
}

inline std::size_t parse_count(const std::string& key, std::string_view v) {
  std::size_t n = 0;
  if (v.empty()) throw Error(ErrorKind::kConfig, key, "empty number");
  for (char c : v) {
    if (!text::is_digit(c))
      throw Error(ErrorKind::kConfig, key, "expected a non-negative integer");
    n = n * 10 + std::size_t(c - '0');
  }
  return n;
}

}  // namespace detail

/// Applies one setting. `base_dir` anchors relative paths; pass an empty
/// path for values given on the command line.
inline void apply_setting(PipelineConfig& cfg, const std::string& key,
                          const std::string& value,
                          const std::filesystem::path& base_dir = {}) {
  auto path = [&]() {
    std::filesystem::path p(value);
    if (p.is_relative() && !base_dir.empty() && !value.empty()) p = base_dir / p;
    return p.lexically_normal().string();
  };
  auto count = [&] { return detail::parse_count(key, value); };
  auto flag = [&] { return detail::parse_bool(key, value); };
  auto& tr = cfg.translator;
  auto& cr = cfg.crawl;

  if (key == "corpus") cfg.corpus = path();
  else if (key == "strict_load") cfg.strict_load = flag();
  else if (key == "tag_lexicon") cfg.tag_lexicon = path();
  else if (key == "opinion_lexicon") cfg.opinion_lexicon = path();
  else if (key == "noise_keywords") cfg.noise_keywords = path();
  else if (key == "gloss_dictionary") tr.dictionary_path = path();
  else if (key == "translator") {
    if (value == "offline") tr.backend = translate::BackendKind::kOffline;
    else if (value == "remote") tr.backend = translate::BackendKind::kRemote;
    else throw Error(ErrorKind::kConfig, key, "expected offline or remote");
  } else if (key == "endpoint_url") tr.endpoint_url = value;
  else if (key == "api_key_env") tr.api_key_env_name = value;
  else if (key == "batch_size") tr.batch_size = count();
  else if (key == "max_concurrency") tr.max_concurrency = count();
  else if (key == "retry_base_delay_ms") tr.retry_base_delay_ms = count();
  else if (key == "translate_timeout_seconds") tr.timeout_seconds = count();
  else if (key == "skip_translated") tr.skip_translated = flag();
  else if (key == "mode") {
    auto m = opinion::parse_mode(value);
    if (!m) throw Error(ErrorKind::kConfig, key, "expected paper or aggregate");
    cfg.mode = *m;
  } else if (key == "noise_filter") cfg.noise_filter = flag();
  else if (key == "strict_eval") cfg.strict_eval = flag();
  else if (key == "threads") cfg.threads = count();
  else if (key == "output_dir") cfg.output_dir = path();
  else if (key == "start_url") cr.start_url = value;
  else if (key == "product_id") cr.product_id = value;
  else if (key == "comment_selector") cr.comment_selector = value;
  else if (key == "text_selector") cr.text_selector = value;
  else if (key == "next_page_selector") cr.next_page_selector = value;
  else if (key == "page_limit") cr.page_limit = count();
  else if (key == "fetcher") {
    if (value == "fixture") cr.fetcher = FetcherKind::kFixture;
    else if (value == "network") cr.fetcher = FetcherKind::kNetwork;
    else throw Error(ErrorKind::kConfig, key, "expected fixture or network");
  } else if (key == "fixture_map") cr.fixture_map = path();
  else if (key == "timeout_seconds") cr.timeout_seconds = count();
  else if (key == "user_agent") cr.user_agent = value;
  else if (key == "delay_ms") cr.delay_ms = count();
  else throw Error(ErrorKind::kConfig, key, "unknown configuration key");
}

inline PipelineConfig load_config(const std::string& path, PipelineConfig cfg = {}) {
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  if (base.empty()) base = ".";
  auto lines = [&] {
    try {
      return text::read_lines(path);
    } catch (const Error& e) {
      throw Error(ErrorKind::kConfig, path, "cannot read config file");
    }
  }();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = text::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::kConfig, path, "expected key=value", i + 1);
    std::string key(text::trim(line.substr(0, eq)));
    std::string value(text::trim(line.substr(eq + 1)));
    try {
      apply_setting(cfg, key, value, base);
    } catch (const Error& e) {
      throw Error(ErrorKind::kConfig, key, e.what(), i + 1);
    }
  }
  return cfg;
}

}  // namespace ruomis
