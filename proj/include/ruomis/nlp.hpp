#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ruomis/error.hpp"
#include "ruomis/text.hpp"

namespace ruomis::nlp {

enum class PosTag {
  DT, NNS, NN, NNP, VBP, VB, VBD, VBZ, RB, JJ, JJR, JJS,
  PRP, IN, CC, CD, UH, PUNCT, OTHER,
};

inline constexpr PosTag kAllTags[] = {
    PosTag::DT, PosTag::NNS, PosTag::NN,  PosTag::NNP, PosTag::VBP,
    PosTag::VB, PosTag::VBD, PosTag::VBZ, PosTag::RB,  PosTag::JJ,
    PosTag::JJR, PosTag::JJS, PosTag::PRP, PosTag::IN, PosTag::CC,
    PosTag::CD, PosTag::UH,  PosTag::PUNCT, PosTag::OTHER};

inline std::string_view to_string(PosTag t) {
  switch (t) {
    case PosTag::DT: return "DT";
    case PosTag::NNS: return "NNS";
    case PosTag::NN: return "NN";
    case PosTag::NNP: return "NNP";
    case PosTag::VBP: return "VBP";
    case PosTag::VB: return "VB";
    case PosTag::VBD: return "VBD";
    case PosTag::VBZ: return "VBZ";
    case PosTag::RB: return "RB";
    case PosTag::JJ: return "JJ";
    case PosTag::JJR: return "JJR";
    case PosTag::JJS: return "JJS";
    case PosTag::PRP: return "PRP";
    case PosTag::IN: return "IN";
    case PosTag::CC: return "CC";
    case PosTag::CD: return "CD";
    case PosTag::UH: return "UH";
    case PosTag::PUNCT: return "PUNCT";
    case PosTag::OTHER: return "OTHER";
  }
  return "OTHER";
}

inline std::optional<PosTag> parse_tag(std::string_view s) {
  for (PosTag t : kAllTags)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

inline bool is_adjective(PosTag t) {
  return t == PosTag::JJ || t == PosTag::JJR || t == PosTag::JJS;
}

struct TaggedToken {
  std::string surface;
  PosTag tag = PosTag::OTHER;

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

class TagLexicon {
 public:
  TagLexicon() = default;

  /// TSV `word<TAB>TAG`. Unknown tags and repeated words are rejected.
  static TagLexicon load(const std::string& path) {
    TagLexicon lex;
    text::for_each_tsv_row(path, [&](std::size_t line, const auto& fields) {
      if (fields.size() != 2 || fields[0].empty())
        throw Error(ErrorKind::kMalformedRecord, path, "expected word<TAB>TAG",
                    line);
      auto tag = parse_tag(fields[1]);
      if (!tag) throw Error(ErrorKind::kUnknownTag, fields[1], path, line);
      if (!lex.add(fields[0], *tag))
        throw Error(ErrorKind::kDuplicateEntry, text::lower(fields[0]), path,
                    line);
    });
    return lex;
  }

  bool add(std::string_view word, PosTag tag) {
    return entries_.emplace(text::lower(word), tag).second;
  }

  std::optional<PosTag> find(std::string_view lowercase_word) const {
    auto it = entries_.find(std::string(lowercase_word));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, PosTag>& entries() const { return entries_; }

 private:
  std::unordered_map<std::string, PosTag> entries_;
};

inline bool is_sentence_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

/// Splits after every maximal run of '.', '!' or '?' that is followed by
/// whitespace or the end of text. Pieces are trimmed; blank pieces dropped.
inline std::vector<std::string> split_sentences(std::string_view input) {
  std::vector<std::string> out;
  auto emit = [&](std::string_view piece) {
    piece = text::trim(piece);
    if (!piece.empty()) out.emplace_back(piece);
  };
  std::size_t start = 0, i = 0;
  while (i < input.size()) {
    if (!is_sentence_terminal(input[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < input.size() && is_sentence_terminal(input[run_end])) ++run_end;
    if (run_end == input.size() || text::is_space(input[run_end])) {
      emit(input.substr(start, run_end - start));
      start = run_end;
    }
    i = run_end;
  }
  emit(input.substr(start));
  return out;
}

inline bool is_detachable(char c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':':
    case '"': case '\'': case '(': case ')':
      return true;
    default:
      return false;
  }
}

/// Whitespace split, then leading and trailing punctuation from
/// . , ! ? ; : " ' ( ) is detached. A run of one repeated mark ("???", "...")
/// stays a single token. Interior characters stay attached.
inline std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> out;
  for (const std::string& word : text::split_whitespace(sentence)) {
    std::size_t lead = 0, tail = word.size();
    std::vector<std::string> leading, trailing;
    while (lead < tail && is_detachable(word[lead])) {
      std::size_t run = lead;
      while (run < tail && word[run] == word[lead]) ++run;
      leading.push_back(word.substr(lead, run - lead));
      lead = run;
    }
    while (tail > lead && is_detachable(word[tail - 1])) {
      std::size_t run = tail;
      while (run > lead && word[run - 1] == word[tail - 1]) --run;
      trailing.push_back(word.substr(run, tail - run));
      tail = run;
    }
    for (auto& t : leading) out.push_back(std::move(t));
    if (tail > lead) out.push_back(word.substr(lead, tail - lead));
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it)
      out.push_back(std::move(*it));
  }
  return out;
}

namespace detail {

inline bool is_punctuation_only(std::string_view t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), text::is_punct);
}

// "8900", "4,500", "4500/-", "+92", "03-12".
inline bool is_numeric(std::string_view t) {
  if (!t.empty() && t[0] == '+') t.remove_prefix(1);
  if (t.empty() || !text::is_digit(t[0])) return false;
  return std::all_of(t.begin(), t.end(), [](char c) {
    return text::is_digit(c) || c == '.' || c == ',' || c == ':' || c == '/' ||
           c == '-';
  });
}

inline bool has_tag(const TagLexicon& lex, std::string_view word, PosTag tag) {
  return !word.empty() && lex.find(word) == tag;
}

// Comparative/superlative stems: cheap-er, nic-er (nice), bigg-er (big),
// happi-er (happy).
inline bool adjective_stem(const TagLexicon& lex, std::string_view word,
                           std::string_view suffix) {
  if (!text::ends_with(word, suffix) || word.size() <= suffix.size() + 1)
    return false;
  std::string_view stem = word.substr(0, word.size() - suffix.size());
  if (has_tag(lex, stem, PosTag::JJ)) return true;
  if (has_tag(lex, std::string(stem) + "e", PosTag::JJ)) return true;
  if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2] &&
      has_tag(lex, stem.substr(0, stem.size() - 1), PosTag::JJ))
    return true;
  if (stem.back() == 'i' &&
      has_tag(lex, std::string(stem.substr(0, stem.size() - 1)) + "y", PosTag::JJ))
    return true;
  return false;
}

inline bool noun_plural(const TagLexicon& lex, std::string_view word) {
  if (!text::ends_with(word, "s") || word.size() < 3) return false;
  if (has_tag(lex, word.substr(0, word.size() - 1), PosTag::NN)) return true;
  if (text::ends_with(word, "es") && has_tag(lex, word.substr(0, word.size() - 2), PosTag::NN))
    return true;
  if (text::ends_with(word, "ies") &&
      has_tag(lex, std::string(word.substr(0, word.size() - 3)) + "y", PosTag::NN))
    return true;
  return false;
}

inline std::optional<PosTag> suffix_tag(const TagLexicon& lex, std::string_view w) {
  if (w.size() > 3 && text::ends_with(w, "ly")) return PosTag::RB;
  for (std::string_view s : {"able", "ible", "ful", "ous", "ish", "ive"})
    if (w.size() > s.size() + 1 && text::ends_with(w, s)) return PosTag::JJ;
  if (adjective_stem(lex, w, "er")) return PosTag::JJR;
  if (adjective_stem(lex, w, "est")) return PosTag::JJS;
  if (noun_plural(lex, w)) return PosTag::NNS;
  return std::nullopt;
}

}  // namespace detail

/// Tag of one token at position `index` within its sentence. Rules apply in
/// order: punctuation, number, lexicon, suffix, non-initial capital, NN.
inline PosTag tag_token(std::string_view token, std::size_t index,
                        const TagLexicon& lexicon) {
  if (detail::is_punctuation_only(token)) return PosTag::PUNCT;
  if (detail::is_numeric(token)) return PosTag::CD;
  std::string lower = text::lower(token);
  if (auto tag = lexicon.find(lower)) return *tag;
  if (auto tag = detail::suffix_tag(lexicon, lower)) return *tag;
  if (index > 0 && text::is_upper(token[0])) return PosTag::NNP;
  return PosTag::NN;
}

inline std::vector<TaggedToken> pos_tag(const std::vector<std::string>& tokens,
                                        const TagLexicon& lexicon) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i)
    out.push_back({tokens[i], tag_token(tokens[i], i, lexicon)});
  return out;
}

/// "The/DT pictures/NNS" rendering.
inline std::string format_tagged(const std::vector<TaggedToken>& tagged) {
  std::string out;
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    if (i) out += ' ';
    out += tagged[i].surface;
    out += '/';
    out += to_string(tagged[i].tag);
  }
  return out;
}

}  // namespace ruomis::nlp
