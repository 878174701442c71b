#pragma once

// Comment records and the line-delimited corpus file: one JSON object per
// line, UTF-8, blank lines ignored.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "ruomis/error.hpp"
#include "ruomis/text.hpp"

namespace ruomis {

enum class Polarity { kPositive, kNegative, kNeutral };
enum class LanguageHint { kRomanUrdu, kEnglish, kUnknown };
enum class Relevancy { kRelevant, kNoise };
enum class Origin { kUser, kMachine, kUnknown };
enum class NoiseReason { kUrl, kPhoneNumber, kSaleKeyword, kNone };

inline std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNegative: return "negative";
    case Polarity::kNeutral: return "neutral";
  }
  return "neutral";
}

inline std::string_view to_string(LanguageHint h) {
  switch (h) {
    case LanguageHint::kRomanUrdu: return "roman_urdu";
    case LanguageHint::kEnglish: return "english";
    case LanguageHint::kUnknown: return "unknown";
  }
  return "unknown";
}

inline std::string_view to_string(Relevancy r) {
  return r == Relevancy::kRelevant ? "relevant" : "noise";
}

inline std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::kUser: return "user";
    case Origin::kMachine: return "machine";
    case Origin::kUnknown: return "unknown";
  }
  return "unknown";
}

inline std::string_view to_string(NoiseReason r) {
  switch (r) {
    case NoiseReason::kUrl: return "url";
    case NoiseReason::kPhoneNumber: return "phone_number";
    case NoiseReason::kSaleKeyword: return "sale_keyword";
    case NoiseReason::kNone: return "none";
  }
  return "none";
}

namespace detail {

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view s, const Enum (&values)[N]) {
  for (Enum v : values)
    if (to_string(v) == s) return v;
  return std::nullopt;
}

}  // namespace detail

inline std::optional<Polarity> parse_polarity(std::string_view s) {
  static constexpr Polarity kAll[] = {Polarity::kPositive, Polarity::kNegative,
                                      Polarity::kNeutral};
  return detail::parse_enum(s, kAll);
}

inline std::optional<LanguageHint> parse_language_hint(std::string_view s) {
  static constexpr LanguageHint kAll[] = {
      LanguageHint::kRomanUrdu, LanguageHint::kEnglish, LanguageHint::kUnknown};
  return detail::parse_enum(s, kAll);
}

inline std::optional<Relevancy> parse_relevancy(std::string_view s) {
  static constexpr Relevancy kAll[] = {Relevancy::kRelevant, Relevancy::kNoise};
  return detail::parse_enum(s, kAll);
}

inline std::optional<Origin> parse_origin(std::string_view s) {
  static constexpr Origin kAll[] = {Origin::kUser, Origin::kMachine,
                                    Origin::kUnknown};
  return detail::parse_enum(s, kAll);
}

inline std::optional<NoiseReason> parse_noise_reason(std::string_view s) {
  static constexpr NoiseReason kAll[] = {
      NoiseReason::kUrl, NoiseReason::kPhoneNumber, NoiseReason::kSaleKeyword,
      NoiseReason::kNone};
  return detail::parse_enum(s, kAll);
}

struct GoldLabel {
  Polarity polarity = Polarity::kNeutral;
  Relevancy relevancy = Relevancy::kRelevant;
  Origin origin = Origin::kUnknown;

  friend bool operator==(const GoldLabel&, const GoldLabel&) = default;
};

/// Classifier output carried on a record so the rate and eval stages can run
/// from the classified corpus file alone. `units` holds one polarity per
/// classification unit (one per sentence in paper mode, one otherwise).
struct Prediction {
  Polarity polarity = Polarity::kNeutral;
  std::vector<Polarity> units;
  std::vector<std::string> opinion_words;
  bool noise = false;
  std::vector<NoiseReason> noise_reasons;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct Comment {
  std::string id;
  std::string product_id;
  std::string raw_text;
  std::optional<std::string> translated_text;
  LanguageHint language_hint = LanguageHint::kUnknown;
  std::optional<GoldLabel> gold;
  std::optional<Prediction> predicted;

  /// Text the tagger should see: the translation when present.
  const std::string& analysis_text() const {
    return translated_text ? *translated_text : raw_text;
  }

  friend bool operator==(const Comment&, const Comment&) = default;
};

struct CorpusBatch {
  std::vector<Comment> comments;
  std::string source;
};

struct LoadResult {
  CorpusBatch batch;
  std::vector<std::size_t> skipped_lines;
};

namespace detail {

using Json = nlohmann::ordered_json;

inline const Json& require_field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null())
    throw Error(ErrorKind::kMissingField, key, "required field absent");
  return *it;
}

inline std::string require_string(const Json& obj, const char* key) {
  const Json& v = require_field(obj, key);
  if (!v.is_string())
    throw Error(ErrorKind::kMalformedRecord, key, "expected a string");
  return v.get<std::string>();
}

template <typename Parse>
auto require_enum(const Json& obj, const char* key, Parse parse) {
  std::string s = require_string(obj, key);
  auto v = parse(s);
  if (!v) throw Error(ErrorKind::kMalformedRecord, key, "bad value '" + s + "'");
  return *v;
}

inline GoldLabel parse_gold(const Json& g) {
  if (!g.is_object())
    throw Error(ErrorKind::kMalformedRecord, "gold", "expected an object");
  GoldLabel label;
  label.polarity = require_enum(g, "polarity", parse_polarity);
  label.relevancy = require_enum(g, "relevancy", parse_relevancy);
  label.origin = require_enum(g, "origin", parse_origin);
  return label;
}

inline Prediction parse_prediction(const Json& p) {
  if (!p.is_object())
    throw Error(ErrorKind::kMalformedRecord, "predicted", "expected an object");
  Prediction out;
  out.polarity = require_enum(p, "polarity", parse_polarity);
  try {
    for (const auto& u : p.value("units", Json::array())) {
      auto v = parse_polarity(u.get<std::string>());
      if (!v) throw Error(ErrorKind::kMalformedRecord, "units", "bad polarity");
      out.units.push_back(*v);
    }
    for (const auto& w : p.value("opinion_words", Json::array()))
      out.opinion_words.push_back(w.get<std::string>());
    out.noise = p.value("noise", false);
    for (const auto& r : p.value("noise_reasons", Json::array())) {
      auto v = parse_noise_reason(r.get<std::string>());
      if (!v)
        throw Error(ErrorKind::kMalformedRecord, "noise_reasons", "bad reason");
      out.noise_reasons.push_back(*v);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kMalformedRecord, "predicted", e.what());
  }
  if (out.units.empty()) out.units.push_back(out.polarity);
  return out;
}

}  // namespace detail

inline Comment parse_comment_record(std::string_view line) {
  using detail::Json;
  Json obj;
  try {
    obj = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kMalformedRecord, "", e.what());
  }
  if (!obj.is_object())
    throw Error(ErrorKind::kMalformedRecord, "", "record is not an object");

  Comment c;
  c.id = detail::require_string(obj, "id");
  c.product_id = detail::require_string(obj, "product_id");
  c.raw_text = std::string(text::trim(detail::require_string(obj, "raw_text")));
  if (c.id.empty())
    throw Error(ErrorKind::kMalformedRecord, "id", "empty id");
  if (c.raw_text.empty())
    throw Error(ErrorKind::kMalformedRecord, "raw_text", "empty after trim");

  if (auto it = obj.find("translated_text"); it != obj.end() && !it->is_null()) {
    if (!it->is_string())
      throw Error(ErrorKind::kMalformedRecord, "translated_text",
                  "expected a string");
    c.translated_text = it->get<std::string>();
  }
  if (auto it = obj.find("language_hint"); it != obj.end() && !it->is_null())
    c.language_hint =
        detail::require_enum(obj, "language_hint", parse_language_hint);
  if (auto it = obj.find("gold"); it != obj.end() && !it->is_null())
    c.gold = detail::parse_gold(*it);
  if (auto it = obj.find("predicted"); it != obj.end() && !it->is_null())
    c.predicted = detail::parse_prediction(*it);
  return c;
}

inline std::string format_comment_record(const Comment& c) {
  using detail::Json;
  Json obj;
  obj["id"] = c.id;
  obj["product_id"] = c.product_id;
  obj["raw_text"] = c.raw_text;
  if (c.translated_text) obj["translated_text"] = *c.translated_text;
  obj["language_hint"] = to_string(c.language_hint);
  if (c.gold) {
    obj["gold"] = {{"polarity", to_string(c.gold->polarity)},
                   {"relevancy", to_string(c.gold->relevancy)},
                   {"origin", to_string(c.gold->origin)}};
  }
  if (c.predicted) {
    const Prediction& p = *c.predicted;
    Json units = Json::array(), reasons = Json::array();
    for (Polarity u : p.units) units.push_back(to_string(u));
    for (NoiseReason r : p.noise_reasons) reasons.push_back(to_string(r));
    obj["predicted"] = {{"polarity", to_string(p.polarity)},
                        {"units", units},
                        {"opinion_words", p.opinion_words},
                        {"noise", p.noise},
                        {"noise_reasons", reasons}};
  }
  return obj.dump(-1, ' ', false, Json::error_handler_t::replace);
}

/// Throws DuplicateId naming the first repeated id.
inline void check_unique_ids(const std::vector<Comment>& comments) {
  std::unordered_set<std::string_view> seen;
  for (const Comment& c : comments)
    if (!seen.insert(c.id).second)
      throw Error(ErrorKind::kDuplicateId, c.id, "id appears more than once");
}

/// Strict mode aborts on the first bad line with MalformedRecord carrying the
/// line number; lenient mode skips bad lines and lists them in the result.
inline LoadResult load_corpus(const std::string& path, bool strict) {
  LoadResult result;
  result.batch.source = path;
  auto lines = text::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      result.batch.comments.push_back(parse_comment_record(lines[i]));
    } catch (const Error& e) {
      if (strict)
        throw Error(ErrorKind::kMalformedRecord, e.subject(), e.what(), i + 1);
      result.skipped_lines.push_back(i + 1);
    }
  }
  check_unique_ids(result.batch.comments);
  return result;
}

inline std::string format_corpus(const CorpusBatch& batch) {
  std::string out;
  for (const Comment& c : batch.comments) {
    out += format_comment_record(c);
    out += '\n';
  }
  return out;
}

inline void write_corpus(const CorpusBatch& batch, const std::string& path) {
  text::write_file(path, format_corpus(batch));
}

}  // namespace ruomis
