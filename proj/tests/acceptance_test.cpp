// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ruomis/corpus.hpp"
#include "ruomis/eval.hpp"
#include "ruomis/nlp.hpp"
#include "ruomis/opinion.hpp"
#include "ruomis/pipeline.hpp"
#include "ruomis/rating.hpp"
#include "ruomis/translate.hpp"
#include "test_util.hpp"

namespace {

using namespace ruomis;
using ruomis::testing::data_path;
using ruomis::testing::fixture_path;
using ruomis::testing::TempDir;

/// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <typename A, typename B>
  void equal(const A& actual, const B& expected, const std::string& what) {
    if (actual == expected) return;
    std::ostringstream os;
    os << what << ": got '" << actual << "', want '" << expected << "'";
    failures.push_back(os.str());
  }
};

const nlp::TagLexicon& tags() {
  static const auto lex = nlp::TagLexicon::load(data_path("tag_lexicon.tsv"));
  return lex;
}

// 1. Precision/recall/F from the reported contingency counts.
void metrics_reproduction(Check& c) {
  auto m = eval::compute_metrics({191, 513, 0, 916});
  c.equal(eval::format_metric(m.precision), "0.271", "precision");
  c.equal(eval::format_metric(m.recall), "1.000", "recall");
  c.equal(eval::format_metric(m.f_measure), "0.427", "f-measure");
}

// 2. Reported per-class deviations and their average.
void deviation_reproduction(Check& c) {
  auto d = eval::proportion_deviation({527, 177, 916}, {120, 71, 1429});
  c.equal(d.dev_positive.format(3), "0.251", "positive deviation");
  c.equal(d.dev_negative.format(3), "0.065", "negative deviation");
  c.equal(d.dev_neutral.format(3), "0.317", "neutral deviation");
  c.equal(d.average.format(3), "0.211", "average deviation");
}

// 3. Pooled percentages from the reported per-product counts.
void percentage_reproduction(Check& c) {
  struct Row {
    std::uint64_t pos, neg, neu;
  };
  const Row ruomis_rows[] = {{164, 52, 324}, {210, 60, 270}, {153, 65, 322}};
  const Row manual_rows[] = {{51, 24, 465}, {38, 27, 475}, {31, 20, 489}};
  auto expand = [](const Row (&rows)[3]) {
    std::vector<opinion::CommentClassification> out;
    for (int p = 0; p < 3; ++p) {
      const std::uint64_t counts[3] = {rows[p].pos, rows[p].neg, rows[p].neu};
      for (int k = 0; k < 3; ++k)
        for (std::uint64_t i = 0; i < counts[k]; ++i)
          for (std::string pid : {"product-" + std::to_string(p + 1), std::string("all")}) {
            opinion::CommentClassification cls;
            cls.product_id = pid;
            cls.polarity = static_cast<Polarity>(k);
            cls.units = {cls.polarity};
            out.push_back(std::move(cls));
          }
    }
    return out;
  };
  auto check = [&](const Row (&rows)[3], const Row& total, const char* pcts[3],
                   const std::string& label) {
    auto cls = expand(rows);
    std::uint64_t pos = 0, neg = 0, neu = 0;
    for (int p = 1; p <= 3; ++p) {
      auto s = rating::summarize_product(cls, "product-" + std::to_string(p));
      c.equal(s.total, 540u, label + " product total");
      pos += s.n_positive;
      neg += s.n_negative;
      neu += s.n_neutral;
    }
    auto all = rating::summarize_product(cls, "all");
    c.expect(pos == all.n_positive && neg == all.n_negative && neu == all.n_neutral,
             label + " per-product counts do not add up");
    c.equal(all.n_positive, total.pos, label + " positive");
    c.equal(all.n_negative, total.neg, label + " negative");
    c.equal(all.n_neutral, total.neu, label + " neutral");
    c.equal(all.total, 1620u, label + " total");
    for (int k = 0; k < 3; ++k)
      c.equal(all.pct_text(rating::kClasses[k]), pcts[k], label + " percentage");
  };
  const char* ruomis_pct[3] = {"32.5", "10.9", "56.5"};
  const char* manual_pct[3] = {"7.4", "4.4", "88.2"};
  check(ruomis_rows, {527, 177, 916}, ruomis_pct, "classifier");
  check(manual_rows, {120, 71, 1429}, manual_pct, "manual");
}

// 4. Tokenize and tag the worked sentence; extract its opinion word.
void tagging_reproduction(Check& c) {
  auto tokens = nlp::tokenize("The pictures are very clear.");
  auto tagged = nlp::pos_tag(tokens, tags());
  c.equal(nlp::format_tagged(tagged), "The/DT pictures/NNS are/VBP very/RB clear/JJ ./PUNCT",
          "tagging");
  auto words = opinion::extract_opinion_words(tagged);
  c.expect(words == std::vector<std::string>{"clear"}, "opinion words != [clear]");
}

// 5. Gloss recovery of the introductory sentence and its classification.
void translation_recovery(Check& c) {
  auto dict = translate::GlossDictionary::load(data_path("gloss_dictionary.tsv"));
  std::string out = translate::dictionary_translate("Iss mobile ka camera acha ha", dict);
  auto tokens = text::split_whitespace(out);
  c.expect(std::find(tokens.begin(), tokens.end(), "good") != tokens.end(),
           "gloss '" + out + "' lacks 'good'");

  opinion::OpinionLexicon lex;
  lex.add("good", +1);
  Comment comment;
  comment.id = "intro";
  comment.product_id = "p";
  comment.raw_text = "Iss mobile ka camera acha ha";
  comment.language_hint = LanguageHint::kRomanUrdu;
  pipeline::Resources res{tags(), lex, {}};
  CorpusBatch batch;
  batch.comments = {comment};
  translate::OfflineBackend backend(dict);
  batch = translate::translate_batch(std::move(batch), backend, true);
  batch = pipeline::classify_batch(std::move(batch), res, 1);
  c.equal(to_string(batch.comments[0].predicted->polarity), "positive", "classification");

  // The same comment through the full pipeline with the bundled resources.
  TempDir tmp;
  auto cfg = load_config(fixture_path("pipeline.conf"));
  cfg.corpus = tmp.write("one.jsonl", format_comment_record(comment) + "\n");
  cfg.output_dir = tmp.file("out");
  std::ostringstream diag;
  pipeline::run_pipeline(cfg, diag);
  auto classified = load_corpus(tmp.file("out/classified.jsonl"), true).batch;
  c.equal(to_string(classified.comments.at(0).predicted->polarity), "positive",
          "full pipeline classification");
}

// 6. Property suites, each over at least 200 generated cases.
constexpr int kCases = 250;

void property_suites(Check& c) {
  std::mt19937 rng(20141120);
  std::uniform_int_distribution<int> cls(0, 2);

  // Count conservation.
  for (int i = 0; i < kCases; ++i) {
    std::vector<opinion::CommentClassification> all;
    std::uniform_int_distribution<int> len(1, 80);
    for (int k = len(rng); k > 0; --k) {
      opinion::CommentClassification x;
      x.product_id = "p";
      x.units = {static_cast<Polarity>(cls(rng))};
      all.push_back(x);
    }
    auto s = rating::summarize_product(all, "p");
    if (s.n_positive + s.n_negative + s.n_neutral != s.total || s.total != all.size()) {
      c.expect(false, "count conservation");
      break;
    }
  }

  // Lexicon monotonicity.
  const std::vector<std::string> vocab = {"good", "bad", "clear", "slow", "fast", "weak", "nice"};
  const nlp::PosTag tag_pool[] = {nlp::PosTag::JJ, nlp::PosTag::JJR, nlp::PosTag::NN,
                                  nlp::PosTag::RB};
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1), tag(0, 3), slen(0, 8);
  for (int i = 0; i < kCases; ++i) {
    opinion::OpinionLexicon before;
    std::string added = vocab[word(rng)];
    for (const auto& w : vocab)
      if (w != added && cls(rng) != 2) before.add(w, cls(rng) == 0 ? +1 : -1);
    opinion::OpinionLexicon after = before;
    after.add(added, +1);
    std::vector<nlp::TaggedToken> sentence;
    for (std::size_t k = slen(rng); k > 0; --k) sentence.push_back({vocab[word(rng)], tag_pool[tag(rng)]});
    if (opinion::score_sentence(sentence, after).net < opinion::score_sentence(sentence, before).net) {
      c.expect(false, "lexicon monotonicity");
      break;
    }
  }

  // Tokenizer character preservation.
  const std::string chars = "ab Z.,!?;:\"'()-/7\t";
  std::uniform_int_distribution<std::size_t> ch(0, chars.size() - 1), tlen(0, 30);
  for (int i = 0; i < kCases; ++i) {
    std::string s, expected, joined;
    for (std::size_t k = tlen(rng); k > 0; --k) s += chars[ch(rng)];
    for (char x : s)
      if (!text::is_space(x)) expected += x;
    for (const auto& t : nlp::tokenize(s)) joined += t;
    if (joined != expected) {
      c.expect(false, "tokenizer character preservation on '" + s + "'");
      break;
    }
  }

  // Contingency cell sum.
  std::uniform_int_distribution<std::size_t> plen(1, 100);
  for (int i = 0; i < kCases; ++i) {
    std::vector<eval::LabelPair> pairs;
    for (std::size_t k = plen(rng); k > 0; --k)
      pairs.emplace_back(static_cast<Polarity>(cls(rng)), static_cast<Polarity>(cls(rng)));
    if (eval::build_contingency(pairs).total() != pairs.size() ||
        eval::build_contingency(pairs, true).total() != pairs.size()) {
      c.expect(false, "contingency cell sum");
      break;
    }
  }

  // F-measure lies between precision and recall.
  std::uniform_int_distribution<std::uint64_t> cell(0, 300);
  int defined = 0;
  for (int i = 0; i < kCases; ++i) {
    auto m = eval::compute_metrics({cell(rng), cell(rng), cell(rng), cell(rng)});
    if (!m.f_measure) continue;
    ++defined;
    double p = m.precision->value(), r = m.recall->value(), f = m.f_measure->value();
    if (f > std::max(p, r) + 1e-12 || f < std::min(p, r) - 1e-12 ||
        std::abs(f - 2 * p * r / (p + r)) > 1e-12) {
      c.expect(false, "f-measure harmonic-mean bounds");
      break;
    }
  }
  c.expect(defined >= 200, "too few defined f-measure cases");

  // Deviation symmetry and zero iff equal.
  std::uniform_int_distribution<std::uint64_t> n(0, 40);
  for (int i = 0; i < kCases; ++i) {
    eval::ClassCounts a{n(rng), n(rng), n(rng) + 1};
    std::uniform_int_distribution<std::uint64_t> cut(0, a.total());
    std::uint64_t x = cut(rng), y = cut(rng);
    if (x > y) std::swap(x, y);
    eval::ClassCounts b = i % 4 == 0 ? a : eval::ClassCounts{x, y - x, a.total() - y};
    auto ab = eval::proportion_deviation(a, b), ba = eval::proportion_deviation(b, a);
    bool symmetric = ab.dev_positive == ba.dev_positive && ab.dev_negative == ba.dev_negative &&
                     ab.dev_neutral == ba.dev_neutral && ab.average == ba.average;
    if (!symmetric || (ab.average.num == 0) != (a == b)) {
      c.expect(false, "deviation symmetry / zero-iff-equal");
      break;
    }
  }
}

// 7. Brute-force recounts against build_contingency and score_sentence.
void oracle_equivalence(Check& c) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> cls(0, 2);
  std::uniform_int_distribution<std::size_t> plen(1, 50);
  for (int i = 0; i < kCases; ++i) {
    std::vector<eval::LabelPair> pairs;
    for (std::size_t k = plen(rng); k > 0; --k)
      pairs.emplace_back(static_cast<Polarity>(cls(rng)), static_cast<Polarity>(cls(rng)));
    eval::Contingency oracle;
    for (const auto& [pred, act] : pairs) {
      bool p = pred != Polarity::kNeutral, a = act != Polarity::kNeutral;
      if (p && a) ++oracle.tp;
      if (p && !a) ++oracle.fp;
      if (!p && a) ++oracle.fn;
      if (!p && !a) ++oracle.tn;
    }
    if (!(eval::build_contingency(pairs) == oracle)) {
      c.expect(false, "contingency oracle mismatch");
      break;
    }
  }

  const std::vector<std::string> vocab = {"good", "Bad", "clear", "phone", "ugly", "very"};
  const nlp::PosTag tag_pool[] = {nlp::PosTag::JJ, nlp::PosTag::JJR, nlp::PosTag::JJS,
                                  nlp::PosTag::NN, nlp::PosTag::VBZ};
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1), tag(0, 4), slen(0, 6);
  for (int i = 0; i < kCases; ++i) {
    std::map<std::string, int> lexmap;
    for (const char* w : {"good", "bad", "clear", "ugly", "phone"})
      if (int v = cls(rng) - 1) lexmap[w] = v;
    opinion::OpinionLexicon lex;
    for (const auto& [w, v] : lexmap) lex.add(w, v);
    std::vector<nlp::TaggedToken> sentence;
    for (std::size_t k = slen(rng); k > 0; --k) sentence.push_back({vocab[word(rng)], tag_pool[tag(rng)]});
    std::size_t pos = 0, neg = 0;
    for (const auto& t : sentence) {
      bool adjective = t.tag == nlp::PosTag::JJ || t.tag == nlp::PosTag::JJR ||
                       t.tag == nlp::PosTag::JJS;
      auto it = lexmap.find(text::lower(t.surface));
      if (!adjective || it == lexmap.end()) continue;
      (it->second > 0 ? pos : neg) += 1;
    }
    auto s = opinion::score_sentence(sentence, lex);
    if (s.pos_count != pos || s.neg_count != neg) {
      c.expect(false, "score_sentence oracle mismatch");
      break;
    }
  }
}

// 8. The pipeline subcommand twice on the fixture corpus, against golden files.
int run_cli(const std::string& args) {
  std::string cmd = std::string("'") + RUOMIS_CLI + "' " + args + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void end_to_end_determinism(Check& c) {
  namespace fs = std::filesystem;
  auto corpus = load_corpus(fixture_path("corpus.jsonl"), true).batch;
  std::size_t labeled = 0;
  for (const auto& x : corpus.comments) labeled += x.gold.has_value();
  c.expect(labeled >= 60, "fixture corpus has fewer than 60 labeled comments");

  // Every reference neutral/noise example is present with its relevancy label.
  const std::pair<const char*, Relevancy> table1[] = {
      {"Lol thanx...", Relevancy::kRelevant},
      {"Do it contain skype???", Relevancy::kRelevant},
      {"I need a backup tool", Relevancy::kNoise},
      {"www.xyz.com is the website you need for change", Relevancy::kNoise},
      {"I have nokia xyz in good condition. Only serious buyers can call.", Relevancy::kNoise},
      {"I wanna buy this cell...plzz somebody tell me whats exactly release date is...?",
       Relevancy::kRelevant},
      {"I m selling BB curve 8900. Good condition. Demand is 4500/- Not Negotiable. rwp isb "
       "contact 92 334 xxx 0000.",
       Relevancy::kNoise},
      {"agr kise k pass ya mobile hai good condition mai tou mujy contact kare 0333x0xx1xx argent",
       Relevancy::kRelevant},
      {"hy mara pas nokia 108 ha 10 month warinti new condichn final demand 2700 full box lahore "
       "03xx 8xx5xx9",
       Relevancy::kNoise},
      {"Aslam o alaikum.frndz mjhe xperia x8 ki original battery chahye kisi dost ne sale krni ho "
       "to plz cntct me 0xx-2xx9xx8x frm lahore.",
       Relevancy::kNoise}};
  for (const auto& [raw, relevancy] : table1) {
    auto it = std::find_if(corpus.comments.begin(), corpus.comments.end(),
                           [&](const Comment& x) { return x.raw_text == raw; });
    c.expect(it != corpus.comments.end() && it->gold && it->gold->relevancy == relevancy,
             std::string("table example missing or mislabeled: ") + raw);
  }
  bool machine = false, user_noise = false;
  for (const auto& x : corpus.comments) {
    machine |= x.gold && x.gold->origin == Origin::kMachine;
    user_noise |= x.gold && x.gold->origin == Origin::kUser && x.gold->relevancy == Relevancy::kNoise;
  }
  c.expect(machine && user_noise, "noise categories not covered");

  const fs::path golden(RUOMIS_GOLDEN_DIR);
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(golden))
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), golden).string());
  std::sort(files.begin(), files.end());
  c.expect(!files.empty(), "no golden files");

  TempDir tmp;
  for (int run = 1; run <= 2; ++run) {
    std::string out = tmp.file("run" + std::to_string(run));
    auto start = std::chrono::steady_clock::now();
    int status = run_cli("pipeline -c '" + fixture_path("pipeline.conf") + "' --output-dir '" +
                         out + "'");
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.equal(status, 0, "run " + std::to_string(run) + " exit status");
    c.expect(seconds < 5.0, "run " + std::to_string(run) + " took " + std::to_string(seconds) + " s");
    std::vector<std::string> produced;
    for (const auto& e : fs::recursive_directory_iterator(out))
      if (e.is_regular_file()) produced.push_back(fs::relative(e.path(), out).string());
    std::sort(produced.begin(), produced.end());
    c.expect(produced == files, "run " + std::to_string(run) + " file set differs from golden");
    for (const auto& f : files)
      if (!fs::exists(fs::path(out) / f) ||
          text::read_file((fs::path(out) / f).string()) != text::read_file((golden / f).string()))
        c.expect(false, "run " + std::to_string(run) + ": " + f + " differs from golden");
  }
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
      {"metrics reproduction (0.271 / 1.000 / 0.427)", metrics_reproduction},
      {"deviation reproduction (0.251 / 0.065 / 0.317, avg 0.211)", deviation_reproduction},
      {"percentage reproduction (per-product -> pooled)", percentage_reproduction},
      {"tagging reproduction (DT NNS VBP RB JJ PUNCT, [clear])", tagging_reproduction},
      {"translation gloss recovery (good, positive)", translation_recovery},
      {"property suites (>= 200 cases each)", property_suites},
      {"oracle equivalence (contingency, score_sentence)", oracle_equivalence},
      {"end-to-end determinism (golden, 2 runs, < 5 s)", end_to_end_determinism},
  };
  int failed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    Check check;
    try {
      fn(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    bool ok = check.failures.empty();
    failed += !ok;
    std::cout << "criterion " << ++index << ": " << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    for (const auto& f : check.failures) std::cout << "    " << f << "\n";
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << "\n";
  return failed == 0 ? 0 : 1;
}
