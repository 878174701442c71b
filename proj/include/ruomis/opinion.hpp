#pragma once

#include <iostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ruomis/corpus.hpp"
#include "ruomis/error.hpp"
#include "ruomis/nlp.hpp"
#include "ruomis/text.hpp"

namespace ruomis::opinion {

/// Lowercase adjective to +1 / -1.
class OpinionLexicon {
 public:
  OpinionLexicon() = default;

  /// TSV `word<TAB>positive|negative`. A word listed with both signs throws
  /// DuplicateEntry; a repeat with the same sign is accepted once.
  static OpinionLexicon load(const std::string& path,
                             std::ostream& diagnostics = std::cerr) {
    OpinionLexicon lex;
    text::for_each_tsv_row(path, [&](std::size_t line, const auto& fields) {
      if (fields.size() != 2 || fields[0].empty())
        throw Error(ErrorKind::kMalformedRecord, path,
                    "expected word<TAB>positive|negative", line);
      int value;
      if (fields[1] == "positive") value = +1;
      else if (fields[1] == "negative") value = -1;
      else throw Error(ErrorKind::kUnknownPolarity, fields[1], path, line);
      if (!lex.add(fields[0], value))
        throw Error(ErrorKind::kDuplicateEntry, text::lower(fields[0]),
                    "listed as both positive and negative in " + path, line);
    });
    if (lex.size() == 0)
      diagnostics << "warning: opinion lexicon " << path << " is empty\n";
    return lex;
  }

  /// False if the word is already present with the opposite sign.
  bool add(std::string_view word, int value) {
    auto [it, inserted] = entries_.emplace(text::lower(word), value > 0 ? 1 : -1);
    return inserted || it->second == (value > 0 ? 1 : -1);
  }

  int value(std::string_view lowercase_word) const {
    auto it = entries_.find(std::string(lowercase_word));
    return it == entries_.end() ? 0 : it->second;
  }

  std::size_t size() const { return entries_.size(); }

  std::size_t count(int sign) const {
    std::size_t n = 0;
    for (const auto& [word, v] : entries_) n += (v == sign);
    return n;
  }

 private:
  std::unordered_map<std::string, int> entries_;
};

inline Polarity polarity_of(long net) {
  if (net > 0) return Polarity::kPositive;
  if (net < 0) return Polarity::kNegative;
  return Polarity::kNeutral;
}

struct SentenceScore {
  std::vector<std::pair<std::string, int>> opinion_words;
  std::size_t pos_count = 0;
  std::size_t neg_count = 0;
  long net = 0;
  Polarity polarity = Polarity::kNeutral;
};

/// Lowercase surfaces of JJ/JJR/JJS tokens, in order.
inline std::vector<std::string> extract_opinion_words(
    const std::vector<nlp::TaggedToken>& tagged) {
  std::vector<std::string> out;
  for (const auto& t : tagged)
    if (nlp::is_adjective(t.tag)) out.push_back(text::lower(t.surface));
  return out;
}

/// Only adjective-tagged tokens count; ties and sentences without a lexicon
/// hit are neutral.
inline SentenceScore score_sentence(const std::vector<nlp::TaggedToken>& tagged,
                                    const OpinionLexicon& lexicon) {
  SentenceScore s;
  for (std::string& word : extract_opinion_words(tagged)) {
    int v = lexicon.value(word);
    if (v == 0) continue;
    (v > 0 ? s.pos_count : s.neg_count) += 1;
    s.opinion_words.emplace_back(std::move(word), v);
  }
  s.net = static_cast<long>(s.pos_count) - static_cast<long>(s.neg_count);
  s.polarity = polarity_of(s.net);
  return s;
}

enum class Mode {
  kAggregate,  // one unit per comment, sign of the summed nets
  kPaper,      // every sentence is its own classification unit
};

inline std::string_view to_string(Mode m) {
  return m == Mode::kPaper ? "paper" : "aggregate";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "paper") return Mode::kPaper;
  if (s == "aggregate") return Mode::kAggregate;
  return std::nullopt;
}

/// Polarity of each classification unit. Aggregate mode always yields exactly
/// one unit; paper mode yields one per sentence (and one neutral unit for a
/// comment with no sentences).
inline std::vector<Polarity> classify_units(const std::vector<SentenceScore>& scores,
                                            Mode mode) {
  if (mode == Mode::kPaper) {
    std::vector<Polarity> units;
    for (const auto& s : scores) units.push_back(s.polarity);
    if (units.empty()) units.push_back(Polarity::kNeutral);
    return units;
  }
  long sum = 0;
  for (const auto& s : scores) sum += s.net;
  return {polarity_of(sum)};
}

/// Comment-level polarity: the aggregate verdict.
inline Polarity classify_comment(const std::vector<SentenceScore>& scores) {
  return classify_units(scores, Mode::kAggregate).front();
}

struct NoiseVerdict {
  bool is_noise = false;
  std::vector<NoiseReason> reasons{NoiseReason::kNone};
};

inline const std::vector<std::string>& default_noise_keywords() {
  static const std::vector<std::string> kKeywords = {
      "selling", "sale", "demand", "buyers", "contact", "warinti", "argent",
      "urgent"};
  return kKeywords;
}

/// One keyword per line; blank and `#` lines ignored. Stored lowercase.
inline std::vector<std::string> load_noise_keywords(const std::string& path) {
  std::vector<std::string> out;
  for (const std::string& line : text::read_lines(path)) {
    std::string_view t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(text::lower(t));
  }
  return out;
}

namespace detail {

inline std::string_view strip_punct(std::string_view t) {
  while (!t.empty() && text::is_punct(t.front())) t.remove_prefix(1);
  while (!t.empty() && text::is_punct(t.back())) t.remove_suffix(1);
  return t;
}

inline bool looks_like_url(std::string_view token) {
  std::string t = text::lower(strip_punct(token));
  if (t.find("www.") != std::string::npos || t.find("http") != std::string::npos)
    return true;
  static constexpr std::string_view kTlds[] = {
      ".com", ".pk", ".net", ".org", ".info", ".biz", ".co", ".in", ".io",
      ".me", ".ly", ".tk", ".us", ".uk", ".edu", ".gov"};
  for (std::string_view tld : kTlds) {
    if (!text::ends_with(t, tld) || t.size() <= tld.size()) continue;
    std::string_view host = std::string_view(t).substr(0, t.size() - tld.size());
    // The label before the TLD must be a plausible hostname, not "...".
    bool ok = std::all_of(host.begin(), host.end(), [](char c) {
      return text::is_alpha(c) || text::is_digit(c) || c == '-' || c == '.';
    });
    if (ok && (text::is_alpha(host.back()) || text::is_digit(host.back())))
      return true;
  }
  return false;
}

inline bool is_masked_digit(char c) {
  return text::is_digit(c) || c == 'x' || c == 'X';
}

}  // namespace detail

inline constexpr std::size_t kPhoneWindow = 14;
inline constexpr std::size_t kPhoneMinDigits = 7;

/// True when some window of 14 characters holds at least 7 digit positions.
/// Digit positions are digits or 'x' masks inside a number-like run (digits,
/// masks, spaces, hyphens); a run needs at least three real digits so plain
/// words like "xxx" do not count.
inline bool contains_phone_number(std::string_view s) {
  auto run_char = [](char c) {
    return detail::is_masked_digit(c) || c == ' ' || c == '-';
  };
  std::size_t i = 0;
  while (i < s.size()) {
    if (!detail::is_masked_digit(s[i]) ||
        (i > 0 && text::is_alpha(s[i - 1]) && !detail::is_masked_digit(s[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < s.size() && run_char(s[end])) ++end;
    // A masked letter glued to a word ("xperia") is not part of a number.
    std::size_t j = end;
    while (j > i && !detail::is_masked_digit(s[j - 1])) --j;
    std::string_view run = s.substr(i, j - i);
    std::size_t real = 0;
    for (char c : run) real += text::is_digit(c);
    if (real >= 3) {
      for (std::size_t w = 0; w < run.size(); ++w) {
        std::size_t n = 0;
        for (std::size_t k = w; k < run.size() && k < w + kPhoneWindow; ++k)
          n += detail::is_masked_digit(run[k]);
        if (n >= kPhoneMinDigits) return true;
      }
    }
    i = end;
  }
  return false;
}

/// Works on raw (untranslated) text: URLs and contact numbers survive
/// translation unchanged, and the sale vocabulary includes romanized
/// spellings.
inline NoiseVerdict detect_noise(const Comment& comment,
                                 const std::vector<std::string>& keywords =
                                     default_noise_keywords()) {
  const auto tokens = text::split_whitespace(comment.raw_text);
  std::vector<NoiseReason> reasons;
  for (const auto& t : tokens) {
    if (detail::looks_like_url(t)) {
      reasons.push_back(NoiseReason::kUrl);
      break;
    }
  }
  if (contains_phone_number(comment.raw_text))
    reasons.push_back(NoiseReason::kPhoneNumber);
  bool sale = false;
  for (const auto& t : tokens) {
    std::string word = text::lower(detail::strip_punct(t));
    for (const auto& k : keywords)
      if (word == k) sale = true;
    if (sale) break;
  }
  if (sale) reasons.push_back(NoiseReason::kSaleKeyword);

  NoiseVerdict v;
  v.is_noise = !reasons.empty();
  if (v.is_noise) v.reasons = std::move(reasons);
  return v;
}

struct CommentClassification {
  std::string comment_id;
  std::string product_id;
  std::vector<SentenceScore> sentence_scores;
  Polarity polarity = Polarity::kNeutral;
  std::vector<Polarity> units;
  NoiseVerdict noise;
};

struct ClassifierOptions {
  Mode mode = Mode::kAggregate;
  bool noise_filter = true;
  std::vector<std::string> noise_keywords = default_noise_keywords();
};

/// Full per-comment analysis: segment, tokenize, tag, score, classify, and
/// check for noise. With the filter on, a noise comment collapses to a single
/// neutral unit.
inline CommentClassification classify(const Comment& comment,
                                      const nlp::TagLexicon& tags,
                                      const OpinionLexicon& lexicon,
                                      const ClassifierOptions& options) {
  CommentClassification out;
  out.comment_id = comment.id;
  out.product_id = comment.product_id;
  for (const std::string& sentence : nlp::split_sentences(comment.analysis_text()))
    out.sentence_scores.push_back(
        score_sentence(nlp::pos_tag(nlp::tokenize(sentence), tags), lexicon));
  out.noise = detect_noise(comment, options.noise_keywords);
  if (options.noise_filter && out.noise.is_noise) {
    out.polarity = Polarity::kNeutral;
    out.units = {Polarity::kNeutral};
    return out;
  }
  out.polarity = classify_comment(out.sentence_scores);
  out.units = classify_units(out.sentence_scores, options.mode);
  return out;
}

inline Prediction to_prediction(const CommentClassification& c) {
  Prediction p;
  p.polarity = c.polarity;
  p.units = c.units;
  for (const auto& s : c.sentence_scores)
    for (const auto& [word, value] : s.opinion_words) p.opinion_words.push_back(word);
  p.noise = c.noise.is_noise;
  p.noise_reasons = c.noise.reasons;
  return p;
}

}  // namespace ruomis::opinion
