#pragma once

// Stage functions and the end-to-end run: load or crawl, translate, classify,
// rate, render, evaluate. Every stage reads and writes the corpus format, so
// any one of them can be rerun on its own.

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ruomis/config.hpp"
#include "ruomis/corpus.hpp"
#include "ruomis/eval.hpp"
#include "ruomis/ingest.hpp"
#include "ruomis/network_fetcher.hpp"
#include "ruomis/nlp.hpp"
#include "ruomis/opinion.hpp"
#include "ruomis/rating.hpp"
#include "ruomis/remote_translator.hpp"
#include "ruomis/translate.hpp"

namespace ruomis::pipeline {

/// An Error annotated with the stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), cause.subject(), "[" + stage + "] " + cause.what(),
              cause.line()),
        stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

template <typename Fn>
auto run_stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

/// Calls fn(i) for i in [0, n) on up to `threads` workers. Callers write
/// results by index, so output never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline CorpusBatch crawl(const CrawlConfig& cfg) {
  ingest::ExtractionRules rules{cfg.comment_selector, cfg.text_selector,
                                cfg.next_page_selector};
  ingest::CrawlOptions options{cfg.page_limit, std::chrono::milliseconds(cfg.delay_ms)};
  std::unique_ptr<ingest::Fetcher> fetcher;
  if (cfg.fetcher == FetcherKind::kFixture) {
    if (cfg.fixture_map.empty())
      throw Error(ErrorKind::kConfig, "fixture_map", "fixture fetcher needs a map file");
    fetcher = std::make_unique<ingest::FixtureFetcher>(
        ingest::FixtureFetcher::from_map_file(cfg.fixture_map));
  } else {
    fetcher = std::make_unique<ingest::NetworkFetcher>(ingest::NetworkFetcherOptions{
        std::chrono::seconds(cfg.timeout_seconds), cfg.user_agent});
  }
  if (cfg.start_url.empty())
    throw Error(ErrorKind::kConfig, "start_url", "crawl needs a start url");
  if (cfg.product_id.empty())
    throw Error(ErrorKind::kConfig, "product_id", "crawl needs a product id");
  if (cfg.comment_selector.empty())
    throw Error(ErrorKind::kConfig, "comment_selector", "crawl needs a comment selector");
  return ingest::crawl_product_page(cfg.start_url, rules, *fetcher, cfg.product_id,
                                    options);
}

struct Resources {
  nlp::TagLexicon tags;
  opinion::OpinionLexicon lexicon;
  opinion::ClassifierOptions options;
};

inline Resources load_resources(const PipelineConfig& cfg,
                                std::ostream& diagnostics = std::cerr) {
  Resources r;
  r.tags = nlp::TagLexicon::load(cfg.tag_lexicon);
  r.lexicon = opinion::OpinionLexicon::load(cfg.opinion_lexicon, diagnostics);
  r.options.mode = cfg.mode;
  r.options.noise_filter = cfg.noise_filter;
  if (!cfg.noise_keywords.empty())
    r.options.noise_keywords = opinion::load_noise_keywords(cfg.noise_keywords);
  return r;
}

/// Attaches a Prediction to every comment.
inline CorpusBatch classify_batch(CorpusBatch batch, const Resources& res,
                                  std::size_t threads = 0) {
  parallel_for(batch.comments.size(), threads, [&](std::size_t i) {
    Comment& c = batch.comments[i];
    c.predicted = opinion::to_prediction(
        opinion::classify(c, res.tags, res.lexicon, res.options));
  });
  return batch;
}

inline std::vector<rating::RatingSummary> rate_batch(const CorpusBatch& classified) {
  std::vector<rating::RatingSummary> out;
  for (const std::string& pid : rating::product_ids(classified))
    out.push_back(rating::summarize_product(classified, pid));
  return out;
}

/// Product id made safe for use as a file name.
inline std::string file_stem(const std::string& product_id) {
  std::string out;
  for (char c : product_id) {
    bool ok = text::is_alpha(c) || text::is_digit(c) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() || out[0] == '.' ? "_" + out : out;
}

/// Writes ratings.jsonl, report.txt and per-product charts under `dir`.
/// Returns the written paths relative to `dir`.
inline std::vector<std::string> write_ratings(
    const std::vector<rating::RatingSummary>& summaries, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "charts");
  std::vector<std::string> written;
  std::string jsonl, report;
  for (const auto& s : summaries) {
    jsonl += rating::to_json(s).dump() + "\n";
    report += rating::render_chart(s, rating::ChartFormat::kAscii) + "\n";
    std::string stem = "charts/" + file_stem(s.product_id);
    text::write_file((fs::path(dir) / (stem + ".bar.svg")).string(),
                     rating::render_chart(s, rating::ChartFormat::kSvgBar));
    text::write_file((fs::path(dir) / (stem + ".pie.svg")).string(),
                     rating::render_chart(s, rating::ChartFormat::kSvgPie));
    written.push_back(stem + ".bar.svg");
    written.push_back(stem + ".pie.svg");
  }
  text::write_file((fs::path(dir) / "ratings.jsonl").string(), jsonl);
  text::write_file((fs::path(dir) / "report.txt").string(), report);
  written.insert(written.begin(), {"ratings.jsonl", "report.txt"});
  return written;
}

inline bool has_gold(const CorpusBatch& batch) {
  return std::any_of(batch.comments.begin(), batch.comments.end(),
                     [](const Comment& c) { return c.gold.has_value(); });
}

inline std::string format_eval_report(const eval::EvaluationReport& report) {
  return to_json(report).dump(2) + "\n";
}

/// Files the run is about to read must exist before any work starts.
inline void validate(const PipelineConfig& cfg) {
  auto need = [](const std::string& key, const std::string& path) {
    if (path.empty()) throw Error(ErrorKind::kConfig, key, "not set");
    if (!std::filesystem::is_regular_file(path))
      throw Error(ErrorKind::kConfig, path, "file for '" + key + "' does not exist");
  };
  if (!cfg.corpus.empty()) need("corpus", cfg.corpus);
  else if (cfg.crawl.fetcher == FetcherKind::kFixture) need("fixture_map", cfg.crawl.fixture_map);
  need("tag_lexicon", cfg.tag_lexicon);
  need("opinion_lexicon", cfg.opinion_lexicon);
  if (!cfg.noise_keywords.empty()) need("noise_keywords", cfg.noise_keywords);
  if (cfg.translator.backend == translate::BackendKind::kOffline)
    need("gloss_dictionary", cfg.translator.dictionary_path);
  if (cfg.output_dir.empty()) throw Error(ErrorKind::kConfig, "output_dir", "not set");
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(ErrorKind::kConfig, cfg.output_dir, "cannot create output directory");
}

struct RunResult {
  std::vector<std::string> files;  // relative to output_dir, in write order
  std::size_t comments = 0;
  std::size_t skipped_lines = 0;
  std::size_t noise_comments = 0;
};

/// The whole flow. Output files depend only on the inputs.
inline RunResult run_pipeline(const PipelineConfig& cfg,
                              std::ostream& diagnostics = std::cerr) {
  namespace fs = std::filesystem;
  run_stage("config", [&] { validate(cfg); });
  const fs::path out(cfg.output_dir);
  RunResult result;

  CorpusBatch batch = run_stage("ingest", [&] {
    if (cfg.corpus.empty()) return crawl(cfg.crawl);
    LoadResult loaded = load_corpus(cfg.corpus, cfg.strict_load);
    for (std::size_t line : loaded.skipped_lines)
      diagnostics << "warning: skipped malformed record at " << cfg.corpus << ":"
                  << line << "\n";
    result.skipped_lines = loaded.skipped_lines.size();
    return std::move(loaded.batch);
  });
  result.comments = batch.comments.size();
  if (batch.comments.empty())
    throw StageError("ingest", Error(ErrorKind::kEmptyInput, cfg.corpus, "no comments"));

  batch = run_stage("translate", [&] {
    return translate::translate_batch(std::move(batch), cfg.translator);
  });
  write_corpus(batch, (out / "translated.jsonl").string());
  result.files.push_back("translated.jsonl");

  const Resources res = run_stage("classify", [&] { return load_resources(cfg, diagnostics); });
  batch = run_stage("classify", [&] { return classify_batch(std::move(batch), res, cfg.threads); });
  write_corpus(batch, (out / "classified.jsonl").string());
  result.files.push_back("classified.jsonl");

  CorpusBatch noise;
  for (const Comment& c : batch.comments)
    if (c.predicted && c.predicted->noise) noise.comments.push_back(c);
  result.noise_comments = noise.comments.size();
  write_corpus(noise, (out / "noise.jsonl").string());
  result.files.push_back("noise.jsonl");

  auto summaries = run_stage("rate", [&] { return rate_batch(batch); });
  for (auto& f : run_stage("render", [&] { return write_ratings(summaries, cfg.output_dir); }))
    result.files.push_back(std::move(f));

  if (has_gold(batch)) {
    auto report = run_stage("eval", [&] { return eval::evaluate(batch, cfg.strict_eval); });
    text::write_file((out / "eval.json").string(), format_eval_report(report));
    result.files.push_back("eval.json");
  }
  return result;
}

/// Process exit status for an error: 1 usage or configuration, 2 data,
/// 3 remote service.
inline int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kConfig:
    case ErrorKind::kUnsupportedFormat:
    case ErrorKind::kInvalidSelector: return 1;
    case ErrorKind::kRemote: return 3;
    default: return 2;
  }
}

}  // namespace ruomis::pipeline
