#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ruomis/corpus.hpp"
#include "ruomis/error.hpp"
#include "ruomis/text.hpp"

namespace ruomis::translate {

/// Lowercase Roman Urdu token to English gloss (possibly several words).
class GlossDictionary {
 public:
  GlossDictionary() = default;

  /// TSV `roman_token<TAB>english_gloss`; `#` lines are comments. Keys are
  /// lowercased on load; a key listed twice is rejected.
  static GlossDictionary load(const std::string& path) {
    GlossDictionary dict;
    text::for_each_tsv_row(path, [&](std::size_t line, const auto& fields) {
      if (fields.size() != 2 || fields[0].empty() ||
          text::normalize_space(fields[1]).empty())
        throw Error(ErrorKind::kMalformedRecord, path,
                    "expected roman_token<TAB>english_gloss", line);
      if (!dict.add(fields[0], fields[1]))
        throw Error(ErrorKind::kDuplicateEntry, text::lower(fields[0]),
                    "key listed twice in " + path, line);
    });
    return dict;
  }

  /// False when the key is already present.
  bool add(std::string_view token, std::string_view gloss) {
    return entries_.emplace(text::lower(token), text::normalize_space(gloss))
        .second;
  }

  const std::string* find(std::string_view lowercase_token) const {
    auto it = entries_.find(std::string(lowercase_token));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

/// Word-by-word gloss. Each whitespace token is looked up by its lowercase
/// form with surrounding punctuation peeled off, so "ha." glosses to "is.".
/// Misses pass through verbatim. Output tokens are joined by single spaces.
inline std::string dictionary_translate(std::string_view input,
                                        const GlossDictionary& dict) {
  std::vector<std::string> out;
  for (std::string& token : text::split_whitespace(input)) {
    std::size_t lead = 0, tail = token.size();
    while (lead < tail && text::is_punct(token[lead])) ++lead;
    while (tail > lead && text::is_punct(token[tail - 1])) --tail;
    const std::string* gloss =
        tail > lead ? dict.find(text::lower(std::string_view(token).substr(
                          lead, tail - lead)))
                    : nullptr;
    if (gloss)
      out.push_back(token.substr(0, lead) + *gloss + token.substr(tail));
    else
      out.push_back(std::move(token));
  }
  return text::join(out, " ");
}

/// Translates a group of texts; output is index-aligned with input.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::vector<std::string> translate(const std::vector<std::string>& texts) = 0;
};

class OfflineBackend : public Backend {
 public:
  explicit OfflineBackend(GlossDictionary dict) : dict_(std::move(dict)) {}

  std::vector<std::string> translate(const std::vector<std::string>& texts) override {
    std::vector<std::string> out;
    out.reserve(texts.size());
    for (const std::string& t : texts) out.push_back(dictionary_translate(t, dict_));
    return out;
  }

  const GlossDictionary& dictionary() const { return dict_; }

 private:
  GlossDictionary dict_;
};

enum class BackendKind { kOffline, kRemote };

struct TranslatorConfig {
  BackendKind backend = BackendKind::kOffline;
  std::string dictionary_path;
  std::string endpoint_url;
  std::string api_key_env_name;
  std::size_t batch_size = 16;
  bool skip_translated = true;
  std::size_t max_concurrency = 4;
  // Delay before retry k (k = 0, 1, 2) is retry_base_delay_ms * 2^k.
  std::size_t retry_base_delay_ms = 500;
  std::size_t timeout_seconds = 30;
};

/// Sets translated_text on every comment that needs one. Comments already
/// translated are left alone when `skip_translated`; English-hinted comments
/// are copied through without calling the backend. Order, ids and raw_text
/// never change.
inline CorpusBatch translate_batch(CorpusBatch batch, Backend& backend,
                                   bool skip_translated) {
  std::vector<std::size_t> pending;
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < batch.comments.size(); ++i) {
    Comment& c = batch.comments[i];
    if (skip_translated && c.translated_text) continue;
    if (c.language_hint == LanguageHint::kEnglish) {
      c.translated_text = c.raw_text;
      continue;
    }
    pending.push_back(i);
    texts.push_back(c.raw_text);
  }
  if (texts.empty()) return batch;
  auto translated = backend.translate(texts);
  if (translated.size() != texts.size())
    throw Error(ErrorKind::kRemote, "", "backend returned a misaligned result");
  for (std::size_t k = 0; k < pending.size(); ++k)
    batch.comments[pending[k]].translated_text = std::move(translated[k]);
  return batch;
}

}  // namespace ruomis::translate
