// Command-line front end: crawl, translate, classify, rate, eval, pipeline.
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 remote error.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ruomis/config.hpp"
#include "ruomis/corpus.hpp"
#include "ruomis/eval.hpp"
#include "ruomis/pipeline.hpp"
#include "ruomis/rating.hpp"

namespace {

using ruomis::Error;
using ruomis::ErrorKind;
using ruomis::PipelineConfig;

/// Config keys that a subcommand exposes as `--key-name` flags.
struct Overrides {
  std::map<std::string, std::optional<std::string>> values;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    for (char& c : flag)
      if (c == '_') c = '-';
    app->add_option(flag, values[key], help);
  }

  void apply(PipelineConfig& cfg) const {
    for (const auto& [key, value] : values)
      if (value) ruomis::apply_setting(cfg, key, *value);
  }
};

struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  Overrides overrides;

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = ruomis::load_config(config_path);
    overrides.apply(cfg);
    return cfg;
  }
};

Command& make_command(CLI::App& root, std::vector<std::unique_ptr<Command>>& all,
                      const std::string& name, const std::string& help) {
  auto cmd = std::make_unique<Command>();
  cmd->app = root.add_subcommand(name, help);
  cmd->app->add_option("-c,--config", cmd->config_path, "key=value configuration file");
  all.push_back(std::move(cmd));
  return *all.back();
}

void add_crawl_flags(Command& cmd) {
  for (auto [key, help] : std::initializer_list<std::pair<const char*, const char*>>{
           {"start_url", "first page to crawl"},
           {"product_id", "product id stamped on extracted comments"},
           {"comment_selector", "CSS selector for comment nodes"},
           {"text_selector", "CSS selector for text inside a comment node"},
           {"next_page_selector", "CSS selector for the next-page link"},
           {"page_limit", "maximum number of pages"},
           {"fetcher", "fixture or network"},
           {"fixture_map", "url<TAB>file map for the fixture fetcher"},
           {"timeout_seconds", "network timeout"},
           {"user_agent", "network user agent"},
           {"delay_ms", "pause between page requests"}})
    cmd.overrides.add(cmd.app, key, help);
}

void add_translate_flags(Command& cmd) {
  for (auto [key, help] : std::initializer_list<std::pair<const char*, const char*>>{
           {"translator", "offline or remote"},
           {"gloss_dictionary", "roman_token<TAB>gloss file"},
           {"endpoint_url", "remote translation endpoint"},
           {"api_key_env", "environment variable holding the bearer token"},
           {"batch_size", "texts per remote request"},
           {"max_concurrency", "parallel remote requests"},
           {"retry_base_delay_ms", "first retry delay, doubled per retry"},
           {"skip_translated", "on/off: keep existing translations"}})
    cmd.overrides.add(cmd.app, key, help);
}

void add_classify_flags(Command& cmd) {
  for (auto [key, help] : std::initializer_list<std::pair<const char*, const char*>>{
           {"tag_lexicon", "word<TAB>TAG file"},
           {"opinion_lexicon", "word<TAB>positive|negative file"},
           {"noise_keywords", "one sale keyword per line"},
           {"mode", "aggregate or paper"},
           {"noise_filter", "on/off: count noise comments as neutral"},
           {"threads", "worker threads (0 = all cores)"}})
    cmd.overrides.add(cmd.app, key, help);
}

std::string input_path(const std::string& flag, const PipelineConfig& cfg) {
  if (!flag.empty()) return flag;
  if (!cfg.corpus.empty()) return cfg.corpus;
  throw Error(ErrorKind::kConfig, "--in", "no input corpus given");
}

ruomis::CorpusBatch load_input(const std::string& path, const PipelineConfig& cfg) {
  auto loaded = ruomis::load_corpus(path, cfg.strict_load);
  for (std::size_t line : loaded.skipped_lines)
    std::cerr << "warning: skipped malformed record at " << path << ":" << line << "\n";
  return std::move(loaded.batch);
}

void emit(const std::string& out_path, const std::string& contents) {
  if (out_path.empty() || out_path == "-") std::cout << contents;
  else ruomis::text::write_file(out_path, contents);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Roman Urdu product comment opinion miner"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> commands;

  auto& crawl = make_command(app, commands, "crawl", "extract comments from product pages");
  add_crawl_flags(crawl);
  std::string crawl_out;
  crawl.app->add_option("-o,--out", crawl_out, "output corpus file (default stdout)");

  auto& translate = make_command(app, commands, "translate", "add English translations");
  add_translate_flags(translate);
  std::string translate_in, translate_out;
  translate.app->add_option("-i,--in", translate_in, "input corpus file");
  translate.app->add_option("-o,--out", translate_out, "output corpus file (default stdout)");

  auto& classify = make_command(app, commands, "classify", "tag and classify comments");
  add_classify_flags(classify);
  std::string classify_in, classify_out;
  classify.app->add_option("-i,--in", classify_in, "translated corpus file");
  classify.app->add_option("-o,--out", classify_out, "output corpus file (default stdout)");

  auto& rate = make_command(app, commands, "rate", "summarize classified comments per product");
  std::string rate_in, rate_out_dir, rate_format;
  rate.app->add_option("-i,--in", rate_in, "classified corpus file");
  rate.app->add_option("--out-dir", rate_out_dir, "write ratings.jsonl, report.txt and charts here");
  rate.app->add_option("-f,--format", rate_format, "print every product as svg_bar, svg_pie or ascii");

  auto& evaluate = make_command(app, commands, "eval", "compare predictions with gold labels");
  std::string eval_in, eval_out;
  bool eval_strict = false;
  evaluate.app->add_option("-i,--in", eval_in, "classified corpus file with gold labels");
  evaluate.app->add_option("-o,--out", eval_out, "report file (default stdout)");
  evaluate.app->add_flag("--strict", eval_strict, "require matching sign for a true positive");

  auto& pipeline = make_command(app, commands, "pipeline", "run every stage end to end");
  add_crawl_flags(pipeline);
  add_translate_flags(pipeline);
  add_classify_flags(pipeline);
  pipeline.overrides.add(pipeline.app, "corpus", "input corpus (skips crawling)");
  pipeline.overrides.add(pipeline.app, "output_dir", "directory for all outputs");
  pipeline.overrides.add(pipeline.app, "strict_eval", "on/off: sign-sensitive true positives");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*crawl.app) {
      auto cfg = crawl.resolve();
      auto batch = ruomis::pipeline::run_stage("crawl", [&] {
        return ruomis::pipeline::crawl(cfg.crawl);
      });
      emit(crawl_out, ruomis::format_corpus(batch));
      std::cerr << "crawled " << batch.comments.size() << " comments from "
                << batch.source << "\n";
    } else if (*translate.app) {
      auto cfg = translate.resolve();
      auto batch = load_input(input_path(translate_in, cfg), cfg);
      batch = ruomis::pipeline::run_stage("translate", [&] {
        return ruomis::translate::translate_batch(std::move(batch), cfg.translator);
      });
      emit(translate_out, ruomis::format_corpus(batch));
    } else if (*classify.app) {
      auto cfg = classify.resolve();
      auto batch = load_input(input_path(classify_in, cfg), cfg);
      auto res = ruomis::pipeline::run_stage("classify", [&] {
        return ruomis::pipeline::load_resources(cfg);
      });
      batch = ruomis::pipeline::classify_batch(std::move(batch), res, cfg.threads);
      emit(classify_out, ruomis::format_corpus(batch));
    } else if (*rate.app) {
      auto cfg = rate.resolve();
      auto batch = load_input(input_path(rate_in, cfg), cfg);
      auto summaries = ruomis::pipeline::run_stage("rate", [&] {
        return ruomis::pipeline::rate_batch(batch);
      });
      if (!rate_out_dir.empty()) ruomis::pipeline::write_ratings(summaries, rate_out_dir);
      if (!rate_format.empty()) {
        auto format = ruomis::rating::parse_chart_format(rate_format);
        for (const auto& s : summaries) std::cout << ruomis::rating::render_chart(s, format);
      } else if (rate_out_dir.empty()) {
        for (const auto& s : summaries) std::cout << ruomis::rating::to_json(s).dump() << "\n";
      }
    } else if (*evaluate.app) {
      auto cfg = evaluate.resolve();
      auto batch = load_input(input_path(eval_in, cfg), cfg);
      auto report = ruomis::pipeline::run_stage("eval", [&] {
        return ruomis::eval::evaluate(batch, eval_strict || cfg.strict_eval);
      });
      emit(eval_out, ruomis::pipeline::format_eval_report(report));
    } else if (*pipeline.app) {
      auto cfg = pipeline.resolve();
      auto result = ruomis::pipeline::run_pipeline(cfg);
      std::cerr << "processed " << result.comments << " comments ("
                << result.noise_comments << " flagged as noise); wrote "
                << result.files.size() << " files to " << cfg.output_dir << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ruomis::pipeline::exit_code(e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
