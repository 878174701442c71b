#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "ruomis/corpus.hpp"
#include "ruomis/error.hpp"
#include "ruomis/html.hpp"
#include "ruomis/text.hpp"

namespace ruomis::ingest {

struct ExtractionRules {
  std::string comment_selector;
  std::optional<std::string> text_selector;
  std::optional<std::string> next_page_selector;
};

/// Rules with every selector compiled; construction validates the syntax.
class CompiledRules {
 public:
  explicit CompiledRules(const ExtractionRules& rules)
      : comment_(html::Selector::parse(rules.comment_selector)) {
    if (rules.text_selector) text_ = html::Selector::parse(*rules.text_selector);
    if (rules.next_page_selector)
      next_ = html::Selector::parse(*rules.next_page_selector);
  }

  const html::Selector& comment() const { return comment_; }
  const std::optional<html::Selector>& text() const { return text_; }
  const std::optional<html::Selector>& next_page() const { return next_; }

 private:
  html::Selector comment_;
  std::optional<html::Selector> text_;
  std::optional<html::Selector> next_;
};

class Fetcher {
 public:
  virtual ~Fetcher() = default;
  /// Document bytes for `url`; throws FetchError.
  virtual std::string fetch(const std::string& url) = 0;
};

/// Serves urls from local files listed in a map of `url<TAB>path` lines.
/// Relative paths resolve against the map file's directory.
class FixtureFetcher : public Fetcher {
 public:
  FixtureFetcher() = default;
  explicit FixtureFetcher(std::map<std::string, std::string> url_to_path)
      : files_(std::move(url_to_path)) {}

  static FixtureFetcher from_map_file(const std::string& path) {
    namespace fs = std::filesystem;
    fs::path base = fs::path(path).parent_path();
    std::map<std::string, std::string> files;
    text::for_each_tsv_row(path, [&](std::size_t line, const auto& fields) {
      if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
        throw Error(ErrorKind::kMalformedRecord, path,
                    "expected url<TAB>relative-file-path", line);
      fs::path file(fields[1]);
      if (file.is_relative()) file = base / file;
      files[fields[0]] = file.string();
    });
    return FixtureFetcher(std::move(files));
  }

  void add(std::string url, std::string path) {
    files_[std::move(url)] = std::move(path);
  }

  std::string fetch(const std::string& url) override {
    auto it = files_.find(url);
    if (it == files_.end())
      throw Error(ErrorKind::kFetch, url, "url not present in fixture map");
    try {
      return text::read_file(it->second);
    } catch (const Error& e) {
      throw Error(ErrorKind::kFetch, url, e.what());
    }
  }

 private:
  std::map<std::string, std::string> files_;
};

/// RFC 3986-style reference resolution, reduced to what pagination links
/// need: absolute, scheme-relative, root-relative, query-only and
/// path-relative references. Fragments are dropped.
inline std::string resolve_url(const std::string& base, const std::string& ref) {
  std::string r = ref.substr(0, ref.find('#'));
  auto scheme_end = base.find("://");
  auto has_scheme = [](const std::string& s) {
    auto colon = s.find("://");
    return colon != std::string::npos && s.find('/') > colon;
  };
  if (has_scheme(r) || scheme_end == std::string::npos) return r;
  std::string scheme = base.substr(0, scheme_end);
  auto host_end = base.find('/', scheme_end + 3);
  std::string origin = base.substr(0, host_end);
  std::string path = host_end == std::string::npos ? "/" : base.substr(host_end);
  path = path.substr(0, path.find_first_of("?#"));

  if (r.empty()) return origin + path;
  if (r.rfind("//", 0) == 0) return scheme + ":" + r;
  if (r[0] == '?') return origin + path + r;

  std::string joined;
  if (r[0] == '/') joined = r;
  else joined = path.substr(0, path.rfind('/') + 1) + r;

  std::string query;
  if (auto q = joined.find('?'); q != std::string::npos) {
    query = joined.substr(q);
    joined.resize(q);
  }
  std::vector<std::string> segments;
  std::size_t start = 1;
  while (start <= joined.size()) {
    auto slash = joined.find('/', start);
    std::string seg = joined.substr(start, slash == std::string::npos
                                               ? std::string::npos
                                               : slash - start);
    bool last = slash == std::string::npos;
    if (seg == "..") {
      if (!segments.empty()) segments.pop_back();
      if (last) segments.emplace_back();
    } else if (seg == ".") {
      if (last) segments.emplace_back();
    } else {
      segments.push_back(seg);
    }
    if (last) break;
    start = slash + 1;
  }
  return origin + "/" + text::join(segments, "/") + query;
}

/// Comments from one page in document order. Ordinals start at
/// `first_ordinal`, so a multi-page crawl keeps ids unique. Matched nodes whose
/// selected text is blank are skipped without consuming an ordinal.
inline std::vector<Comment> extract_comments(const html::Document& doc,
                                             const CompiledRules& rules,
                                             const std::string& product_id,
                                             std::size_t first_ordinal = 1) {
  std::vector<Comment> out;
  std::size_t ordinal = first_ordinal;
  for (const html::Node* node : rules.comment().select(doc.root())) {
    std::string raw;
    if (rules.text()) {
      for (const html::Node* sub : rules.text()->select(*node)) {
        raw += html::text_content(*sub);
        raw += ' ';
      }
    } else {
      raw = html::text_content(*node);
    }
    std::string normalized = text::normalize_space(raw);
    if (normalized.empty()) continue;
    Comment c;
    c.id = product_id + "#" + std::to_string(ordinal++);
    c.product_id = product_id;
    c.raw_text = std::move(normalized);
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<Comment> extract_comments(std::string_view document,
                                             const ExtractionRules& rules,
                                             const std::string& product_id) {
  CompiledRules compiled(rules);
  return extract_comments(html::parse(document), compiled, product_id);
}

struct CrawlOptions {
  std::size_t page_limit = 1;
  std::chrono::milliseconds delay{0};
};

/// Follows next-page links from `start_url` until no link is found or
/// `page_limit` pages have been read. A link back to a visited page throws
/// CrawlCycle.
inline CorpusBatch crawl_product_page(const std::string& start_url,
                                      const ExtractionRules& rules,
                                      Fetcher& fetcher,
                                      const std::string& product_id,
                                      const CrawlOptions& options) {
  if (options.page_limit < 1)
    throw Error(ErrorKind::kConfig, "page_limit", "must be at least 1");
  CompiledRules compiled(rules);
  CorpusBatch batch;
  batch.source = start_url;
  std::unordered_set<std::string> visited;
  std::optional<std::string> url = start_url;
  for (std::size_t page = 0; url && page < options.page_limit; ++page) {
    if (!visited.insert(*url).second)
      throw Error(ErrorKind::kCrawlCycle, *url, "page already visited");
    if (page > 0 && options.delay.count() > 0)
      std::this_thread::sleep_for(options.delay);
    html::Document doc = html::parse(fetcher.fetch(*url));
    auto comments = extract_comments(doc, compiled, product_id,
                                     batch.comments.size() + 1);
    for (Comment& c : comments) batch.comments.push_back(std::move(c));

    const std::string current = *url;
    url.reset();
    if (!compiled.next_page()) continue;
    const html::Node* link = compiled.next_page()->select_first(doc.root());
    if (!link) continue;
    const std::string* href = link->attribute("href");
    if (href && !text::trim(*href).empty())
      url = resolve_url(current, std::string(text::trim(*href)));
  }
  return batch;
}

}  // namespace ruomis::ingest
