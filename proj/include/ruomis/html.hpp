#pragma once

// Error-tolerant HTML tree builder and a CSS selector subset (type, .class,
// #id, universal, descendant combinator). Good enough for comment listings on
// server-rendered product pages; no scripting, no namespaces.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ruomis/error.hpp"
#include "ruomis/text.hpp"

namespace ruomis::html {

struct Node {
  enum class Kind { kDocument, kElement, kText };

  Kind kind = Kind::kElement;
  std::string tag;  // lowercase, elements only
  std::map<std::string, std::string> attributes;
  std::string text;  // text nodes only, entities decoded
  Node* parent = nullptr;
  std::vector<std::unique_ptr<Node>> children;

  bool is_element() const { return kind == Kind::kElement; }

  const std::string* attribute(const std::string& name) const {
    auto it = attributes.find(name);
    return it == attributes.end() ? nullptr : &it->second;
  }

  bool has_class(std::string_view cls) const {
    const std::string* value = attribute("class");
    if (!value) return false;
    for (const std::string& c : text::split_whitespace(*value))
      if (c == cls) return true;
    return false;
  }
};

/// Owns the parsed tree. Nodes are stable in memory for the document's life.
class Document {
 public:
  explicit Document(std::unique_ptr<Node> root) : root_(std::move(root)) {}
  const Node& root() const { return *root_; }

 private:
  std::unique_ptr<Node> root_;
};

namespace detail {

inline bool is_void_element(std::string_view tag) {
  static constexpr std::string_view kVoid[] = {
      "area", "base", "br", "col", "embed", "hr", "img", "input",
      "link", "meta", "param", "source", "track", "wbr"};
  for (auto v : kVoid)
    if (v == tag) return true;
  return false;
}

inline bool is_raw_text_element(std::string_view tag) {
  return tag == "script" || tag == "style" || tag == "textarea" ||
         tag == "title";
}

// Opening one of these implicitly closes an open sibling of the same name.
inline bool closes_same_sibling(std::string_view tag) {
  return tag == "p" || tag == "li" || tag == "tr" || tag == "td" ||
         tag == "th" || tag == "option" || tag == "dt" || tag == "dd";
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(char(cp));
  } else if (cp < 0x800) {
    out.push_back(char(0xC0 | (cp >> 6)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(char(0xE0 | (cp >> 12)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(char(0xF0 | (cp >> 18)));
    out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(char(0x80 | (cp & 0x3F)));
  }
}

/// Decodes the handful of named entities real comment pages use plus numeric
/// references. Unknown entities are left verbatim.
inline std::string decode_entities(std::string_view s) {
  static const std::map<std::string_view, std::uint32_t> kNamed = {
      {"amp", '&'},     {"lt", '<'},       {"gt", '>'},     {"quot", '"'},
      {"apos", '\''},   {"nbsp", 0xA0},    {"copy", 0xA9},  {"hellip", 0x2026},
      {"ndash", 0x2013}, {"mdash", 0x2014}, {"rsquo", 0x2019}, {"lsquo", 0x2018},
      {"rdquo", 0x201D}, {"ldquo", 0x201C}};
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (!name.empty() && name[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      std::string_view digits = name.substr(hex ? 2 : 1);
      bool ok = !digits.empty();
      for (char c : digits) {
        int v;
        if (text::is_digit(c)) v = c - '0';
        else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else { ok = false; break; }
        cp = cp * (hex ? 16 : 10) + std::uint32_t(v);
        if (cp > 0x10FFFF) { ok = false; break; }
      }
      if (ok) {
        // A decoded no-break space is still whitespace for our purposes.
        if (cp == 0xA0) out.push_back(' ');
        else append_utf8(out, cp);
        decoded = true;
      }
    } else if (auto it = kNamed.find(name); it != kNamed.end()) {
      if (it->second == 0xA0) out.push_back(' ');
      else append_utf8(out, it->second);
      decoded = true;
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

class TreeBuilder {
 public:
  explicit TreeBuilder(std::string_view src) : src_(src) {
    root_ = std::make_unique<Node>();
    root_->kind = Node::Kind::kDocument;
    stack_.push_back(root_.get());
  }

  std::unique_ptr<Node> build() {
    while (pos_ < src_.size()) {
      if (src_[pos_] == '<') {
        if (starts_with("<!--")) skip_past("-->");
        else if (starts_with("<!") || starts_with("<?")) skip_past(">");
        else if (starts_with("</")) end_tag();
        else if (pos_ + 1 < src_.size() && text::is_alpha(src_[pos_ + 1])) start_tag();
        else add_text(src_.substr(pos_++, 1));
      } else {
        auto next = src_.find('<', pos_);
        if (next == std::string_view::npos) next = src_.size();
        add_text(src_.substr(pos_, next - pos_));
        pos_ = next;
      }
    }
    return std::move(root_);
  }

 private:
  bool starts_with(std::string_view prefix) const {
    return src_.substr(pos_, prefix.size()) == prefix;
  }

  void skip_past(std::string_view terminator) {
    auto end = src_.find(terminator, pos_);
    pos_ = end == std::string_view::npos ? src_.size() : end + terminator.size();
  }

  Node* current() const { return stack_.back(); }

  Node* append(std::unique_ptr<Node> node) {
    node->parent = current();
    Node* raw = node.get();
    current()->children.push_back(std::move(node));
    return raw;
  }

  void add_text(std::string_view raw) {
    if (raw.empty()) return;
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::kText;
    node->text = decode_entities(raw);
    append(std::move(node));
  }

  std::string read_name() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && !text::is_space(src_[pos_]) &&
           src_[pos_] != '>' && src_[pos_] != '/' && src_[pos_] != '=')
      ++pos_;
    return text::lower(src_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < src_.size() && text::is_space(src_[pos_])) ++pos_;
  }

  void start_tag() {
    ++pos_;  // '<'
    auto node = std::make_unique<Node>();
    node->tag = read_name();
    bool self_closing = false;
    while (pos_ < src_.size()) {
      skip_space();
      if (pos_ >= src_.size()) break;
      char c = src_[pos_];
      if (c == '>') { ++pos_; break; }
      if (c == '/') { self_closing = true; ++pos_; continue; }
      std::string name = read_name();
      if (name.empty()) { ++pos_; continue; }
      skip_space();
      std::string value;
      if (pos_ < src_.size() && src_[pos_] == '=') {
        ++pos_;
        skip_space();
        if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')) {
          char quote = src_[pos_++];
          auto end = src_.find(quote, pos_);
          if (end == std::string_view::npos) end = src_.size();
          value = decode_entities(src_.substr(pos_, end - pos_));
          pos_ = std::min(end + 1, src_.size());
        } else {
          std::size_t start = pos_;
          while (pos_ < src_.size() && !text::is_space(src_[pos_]) &&
                 src_[pos_] != '>')
            ++pos_;
          value = decode_entities(src_.substr(start, pos_ - start));
        }
      }
      node->attributes.emplace(std::move(name), std::move(value));
    }

    if (closes_same_sibling(node->tag) && current()->tag == node->tag)
      stack_.pop_back();

    const std::string tag = node->tag;
    Node* raw = append(std::move(node));
    if (is_void_element(tag) || self_closing) return;
    if (is_raw_text_element(tag)) {
      std::string close = "</" + tag;
      std::size_t end = pos_;
      while (true) {
        end = src_.find("</", end);
        if (end == std::string_view::npos) { end = src_.size(); break; }
        if (text::lower(src_.substr(end, close.size())) == close) break;
        end += 2;
      }
      if (tag != "script" && tag != "style") {
        stack_.push_back(raw);
        add_text(src_.substr(pos_, end - pos_));
        stack_.pop_back();
      }
      pos_ = end;
      if (pos_ < src_.size()) skip_past(">");
      return;
    }
    stack_.push_back(raw);
  }

  void end_tag() {
    pos_ += 2;
    std::string name = read_name();
    skip_past(">");
    // Pop to the nearest matching open element; stray end tags are ignored.
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->tag == name) {
        stack_.resize(i);
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::unique_ptr<Node> root_;
  std::vector<Node*> stack_;
};

inline void collect_text(const Node& node, std::string& out) {
  if (node.kind == Node::Kind::kText) {
    out += node.text;
    return;
  }
  if (node.is_element() && node.tag == "br") {
    out += ' ';
    return;
  }
  for (const auto& child : node.children) collect_text(*child, out);
  // Block-level boundaries separate words even without whitespace in markup.
  if (node.is_element() && (node.tag == "p" || node.tag == "div" ||
                            node.tag == "li" || node.tag == "td"))
    out += ' ';
}

}  // namespace detail

inline Document parse(std::string_view source) {
  return Document(detail::TreeBuilder(source).build());
}

/// Concatenated descendant text, raw (not whitespace-normalized).
inline std::string text_content(const Node& node) {
  std::string out;
  detail::collect_text(node, out);
  return out;
}

/// One compound selector such as `div.comment#c1`.
struct Compound {
  std::string tag;  // empty or "*" matches any element
  std::string id;
  std::vector<std::string> classes;

  bool matches(const Node& n) const {
    if (!n.is_element()) return false;
    if (!tag.empty() && tag != "*" && tag != n.tag) return false;
    if (!id.empty()) {
      const std::string* v = n.attribute("id");
      if (!v || *v != id) return false;
    }
    for (const std::string& c : classes)
      if (!n.has_class(c)) return false;
    return true;
  }
};

/// Descendant-combinator chain, outermost compound first.
class Selector {
 public:
  static Selector parse(std::string_view expr) {
    Selector sel;
    sel.source_ = std::string(expr);
    auto parts = text::split_whitespace(expr);
    if (parts.empty())
      throw Error(ErrorKind::kInvalidSelector, sel.source_, "empty selector");
    for (const std::string& part : parts)
      sel.chain_.push_back(parse_compound(part, sel.source_));
    return sel;
  }

  const std::string& source() const { return source_; }

  bool matches(const Node& n) const {
    if (!chain_.back().matches(n)) return false;
    // Greedy ancestor walk is exact for descendant-only chains.
    std::size_t want = chain_.size() - 1;
    for (const Node* a = n.parent; a && want > 0; a = a->parent)
      if (chain_[want - 1].matches(*a)) --want;
    return want == 0;
  }

  /// Matching elements under `scope` (exclusive) in document order.
  std::vector<const Node*> select(const Node& scope) const {
    std::vector<const Node*> out;
    walk(scope, out);
    return out;
  }

  const Node* select_first(const Node& scope) const {
    auto all = select(scope);
    return all.empty() ? nullptr : all.front();
  }

 private:
  static bool is_ident_char(char c) {
    return text::is_alpha(c) || text::is_digit(c) || c == '-' || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
  }

  static Compound parse_compound(std::string_view part, const std::string& src) {
    Compound c;
    std::size_t i = 0;
    auto ident = [&]() {
      std::size_t start = i;
      while (i < part.size() && is_ident_char(part[i])) ++i;
      if (i == start)
        throw Error(ErrorKind::kInvalidSelector, src,
                    "expected a name at '" + std::string(part) + "'");
      return std::string(part.substr(start, i - start));
    };
    if (i < part.size() && part[i] == '*') {
      c.tag = "*";
      ++i;
    } else if (i < part.size() && is_ident_char(part[i])) {
      c.tag = text::lower(ident());
    }
    while (i < part.size()) {
      char ch = part[i++];
      if (ch == '.') c.classes.push_back(ident());
      else if (ch == '#') {
        if (!c.id.empty())
          throw Error(ErrorKind::kInvalidSelector, src, "two ids in one compound");
        c.id = ident();
      } else {
        throw Error(ErrorKind::kInvalidSelector, src,
                    std::string("unsupported character '") + ch + "'");
      }
    }
    return c;
  }

  void walk(const Node& n, std::vector<const Node*>& out) const {
    for (const auto& child : n.children) {
      if (matches(*child)) out.push_back(child.get());
      walk(*child, out);
    }
  }

  std::string source_;
  std::vector<Compound> chain_;
};

}  // namespace ruomis::html
