/*
 * Copyright 2026 The Archive Query Miner Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aqm/strings.hpp"

namespace aqm {

/**
 * Tag-soup HTML parser. Tolerant of unclosed and mis-nested tags, never
 * executes scripts, and replaces undecodable bytes. Good enough for archived
 * SERPs; not a spec-complete HTML5 tree builder.
 */
struct HtmlNode {
  enum class Type { document, element, text };

  Type type = Type::document;
  std::string tag;  // lowercase, elements only
  std::vector<std::pair<std::string, std::string>> attrs;
  std::string text;  // text nodes only, entity-decoded
  std::vector<std::unique_ptr<HtmlNode>> children;
  HtmlNode* parent = nullptr;

  bool is_element() const { return type == Type::element; }

  std::optional<std::string_view> attr(std::string_view name) const {
    for (const auto& [k, v] : attrs)
      if (k == name) return std::string_view(v);
    return std::nullopt;
  }

  /// Concatenated descendant text, script/style content excluded.
  std::string text_content() const {
    std::string out;
    append_text(out);
    return out;
  }

  /// 1-based position among same-tag element siblings.
  int nth_of_type() const {
    if (!parent) return 1;
    int n = 0;
    for (const auto& sib : parent->children) {
      if (sib->is_element() && sib->tag == tag) {
        ++n;
        if (sib.get() == this) return n;
      }
    }
    return n;
  }

  template <typename Fn>
  void for_each_element(Fn&& fn) const {
    for (const auto& child : children) {
      if (child->is_element()) {
        fn(*child);
        child->for_each_element(fn);
      }
    }
  }

 private:
  void append_text(std::string& out) const {
    if (type == Type::text) {
      out += text;
      return;
    }
    if (is_element() && (tag == "script" || tag == "style")) return;
    for (const auto& child : children) child->append_text(out);
  }
};

namespace detail {

inline uint32_t cp1252_to_codepoint(unsigned char b) {
  static const uint16_t kHigh[32] = {
      0x20AC, 0x0081, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
      0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0x008D, 0x017D, 0x008F,
      0x0090, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
      0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0x009D, 0x017E, 0x0178};
  if (b >= 0x80 && b <= 0x9F) return kHigh[b - 0x80];
  return b;
}

inline std::string transcode_cp1252(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (char ch : in) {
    unsigned char b = static_cast<unsigned char>(ch);
    if (b < 0x80)
      out += ch;
    else
      utf8_append(out, cp1252_to_codepoint(b));
  }
  return out;
}

/// Finds a declared charset ("charset=...") in the document head, if any.
inline std::optional<std::string> sniff_charset(std::string_view bytes) {
  std::string_view head = bytes.substr(0, std::min<size_t>(bytes.size(), 4096));
  std::string lower = to_ascii_lower(head);
  size_t pos = lower.find("charset");
  while (pos != std::string::npos) {
    size_t i = pos + 7;
    while (i < lower.size() && (is_ascii_space(lower[i]) || lower[i] == '=' ||
                                lower[i] == '"' || lower[i] == '\''))
      ++i;
    size_t start = i;
    while (i < lower.size() && (std::isalnum(static_cast<unsigned char>(lower[i])) ||
                                lower[i] == '-' || lower[i] == '_'))
      ++i;
    if (i > start) return lower.substr(start, i - start);
    pos = lower.find("charset", pos + 7);
  }
  return std::nullopt;
}

inline std::string decode_entities(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (size_t i = 0; i < in.size(); ++i) {
    if (in[i] != '&') {
      out += in[i];
      continue;
    }
    size_t semi = in.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += '&';
      continue;
    }
    std::string_view name = in.substr(i + 1, semi - i - 1);
    if (!name.empty() && name[0] == '#') {
      uint32_t cp = 0;
      bool ok = name.size() > 1;
      if (name.size() > 2 && (name[1] == 'x' || name[1] == 'X')) {
        for (size_t k = 2; k < name.size() && ok; ++k) {
          int d = hex_digit(name[k]);
          if (d < 0 || cp > 0x10FFFF)
            ok = false;
          else
            cp = cp * 16 + static_cast<uint32_t>(d);
        }
      } else {
        for (size_t k = 1; k < name.size() && ok; ++k) {
          if (name[k] < '0' || name[k] > '9' || cp > 0x10FFFF)
            ok = false;
          else
            cp = cp * 10 + static_cast<uint32_t>(name[k] - '0');
        }
      }
      if (ok && cp > 0 && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF)) {
        utf8_append(out, cp);
        i = semi;
        continue;
      }
      out += '&';
      continue;
    }
    uint32_t cp = 0;
    if (name == "amp") cp = '&';
    else if (name == "lt") cp = '<';
    else if (name == "gt") cp = '>';
    else if (name == "quot") cp = '"';
    else if (name == "apos") cp = '\'';
    else if (name == "nbsp") cp = 0xA0;
    if (cp) {
      utf8_append(out, cp);
      i = semi;
    } else {
      out += '&';
    }
  }
  return out;
}

inline bool is_void_element(std::string_view tag) {
  static const std::set<std::string_view> kVoid = {
      "area", "base", "br",     "col",  "embed", "hr",    "img",
      "input", "link", "meta",  "param", "source", "track", "wbr"};
  return kVoid.count(tag) > 0;
}

// Opening one of these while the same tag is open implicitly closes it.
inline bool self_closing_sibling(std::string_view tag) {
  static const std::set<std::string_view> kSiblings = {"li", "p", "td", "th",
                                                       "tr", "option", "dd", "dt"};
  return kSiblings.count(tag) > 0;
}

}  // namespace detail

class HtmlDocument {
 public:
  /// Parses possibly-malformed HTML bytes. The encoding is sniffed from a
  /// declared charset and defaults to UTF-8; undecodable bytes are replaced.
  static HtmlDocument parse(std::string_view bytes) {
    // UTF-8 BOM
    if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes = bytes.substr(3);
    std::string text;
    auto charset = detail::sniff_charset(bytes);
    if (charset && (*charset == "iso-8859-1" || *charset == "latin-1" ||
                    *charset == "latin1" || *charset == "windows-1252" ||
                    *charset == "cp1252")) {
      text = detail::transcode_cp1252(bytes);
    } else {
      text = utf8_sanitize(bytes);
    }
    HtmlDocument doc;
    doc.root_ = std::make_unique<HtmlNode>();
    doc.build(text);
    return doc;
  }

  const HtmlNode& root() const { return *root_; }

  template <typename Fn>
  void for_each_element(Fn&& fn) const {
    root_->for_each_element(fn);
  }

 private:
  HtmlDocument() = default;

  void append_text_node(HtmlNode* parent, std::string_view raw) {
    if (raw.empty()) return;
    auto node = std::make_unique<HtmlNode>();
    node->type = HtmlNode::Type::text;
    node->text = detail::decode_entities(raw);
    node->parent = parent;
    parent->children.push_back(std::move(node));
  }

  static void parse_attrs(std::string_view s, HtmlNode& node) {
    size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && (is_ascii_space(s[i]) || s[i] == '/')) ++i;
      if (i >= s.size()) break;
      size_t name_start = i;
      while (i < s.size() && !is_ascii_space(s[i]) && s[i] != '=' && s[i] != '/' &&
             s[i] != '>')
        ++i;
      std::string name = to_ascii_lower(s.substr(name_start, i - name_start));
      if (name.empty()) {
        ++i;
        continue;
      }
      while (i < s.size() && is_ascii_space(s[i])) ++i;
      std::string value;
      if (i < s.size() && s[i] == '=') {
        ++i;
        while (i < s.size() && is_ascii_space(s[i])) ++i;
        if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
          char quote = s[i++];
          size_t vstart = i;
          while (i < s.size() && s[i] != quote) ++i;
          value = detail::decode_entities(s.substr(vstart, i - vstart));
          if (i < s.size()) ++i;
        } else {
          size_t vstart = i;
          while (i < s.size() && !is_ascii_space(s[i]) && s[i] != '>') ++i;
          value = detail::decode_entities(s.substr(vstart, i - vstart));
        }
      }
      // first occurrence wins
      if (!node.attr(name)) node.attrs.emplace_back(std::move(name), std::move(value));
    }
  }

  void build(std::string_view text) {
    std::vector<HtmlNode*> stack{root_.get()};
    size_t i = 0;
    size_t text_start = 0;
    auto flush_text = [&](size_t end) {
      if (end > text_start)
        append_text_node(stack.back(), text.substr(text_start, end - text_start));
    };
    while (i < text.size()) {
      if (text[i] != '<') {
        ++i;
        continue;
      }
      if (text.substr(i, 4) == "<!--") {
        flush_text(i);
        size_t close = text.find("-->", i + 4);
        i = close == std::string_view::npos ? text.size() : close + 3;
        text_start = i;
        continue;
      }
      if (i + 1 < text.size() && (text[i + 1] == '!' || text[i + 1] == '?')) {
        flush_text(i);
        size_t close = text.find('>', i);
        i = close == std::string_view::npos ? text.size() : close + 1;
        text_start = i;
        continue;
      }
      if (i + 1 < text.size() && text[i + 1] == '/') {
        flush_text(i);
        size_t close = text.find('>', i);
        if (close == std::string_view::npos) {
          i = text.size();
          text_start = i;
          break;
        }
        std::string tag = to_ascii_lower(std::string(trim(text.substr(i + 2, close - i - 2))));
        // Pop to the matching open element if there is one; stray close
        // tags are ignored.
        for (size_t d = stack.size(); d > 1; --d) {
          if (stack[d - 1]->tag == tag) {
            stack.resize(d - 1);
            break;
          }
        }
        i = close + 1;
        text_start = i;
        continue;
      }
      if (i + 1 >= text.size() ||
          !(std::isalpha(static_cast<unsigned char>(text[i + 1])))) {
        ++i;  // literal '<'
        continue;
      }
      flush_text(i);
      size_t close = text.find('>', i);
      if (close == std::string_view::npos) {
        text_start = i;
        break;
      }
      std::string_view inside = text.substr(i + 1, close - i - 1);
      bool self_closed = !inside.empty() && inside.back() == '/';
      if (self_closed) inside.remove_suffix(1);
      size_t name_end = 0;
      while (name_end < inside.size() && !is_ascii_space(inside[name_end]) &&
             inside[name_end] != '/')
        ++name_end;
      std::string tag = to_ascii_lower(inside.substr(0, name_end));
      auto node = std::make_unique<HtmlNode>();
      node->type = HtmlNode::Type::element;
      node->tag = tag;
      parse_attrs(inside.substr(name_end), *node);
      if (detail::self_closing_sibling(tag) && stack.back()->tag == tag) {
        stack.pop_back();
      }
      HtmlNode* raw = node.get();
      node->parent = stack.back();
      stack.back()->children.push_back(std::move(node));
      i = close + 1;
      text_start = i;
      if (self_closed || detail::is_void_element(tag)) continue;
      if (tag == "script" || tag == "style") {
        // Raw text until the matching close tag; '<' inside is literal.
        std::string closer = "</" + tag;
        size_t abs_end = text.size();
        for (size_t k = i; k + closer.size() <= text.size(); ++k) {
          size_t m = 0;
          while (m < closer.size() && ascii_lower(text[k + m]) == closer[m]) ++m;
          if (m == closer.size()) {
            abs_end = k;
            break;
          }
        }
        if (abs_end > i) append_text_node(raw, text.substr(i, abs_end - i));
        if (abs_end == text.size()) {
          i = text.size();
        } else {
          size_t gt = text.find('>', abs_end);
          i = gt == std::string_view::npos ? text.size() : gt + 1;
        }
        text_start = i;
        continue;
      }
      stack.push_back(raw);
    }
    flush_text(text.size());
  }

  std::unique_ptr<HtmlNode> root_;
};

/// Collapses runs of whitespace (including non-breaking spaces) to single
/// spaces and trims the ends — the normalization applied to extracted
/// titles and snippets.
inline std::string collapse_whitespace(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  bool pending_space = false;
  size_t i = 0;
  while (i < in.size()) {
    size_t before = i;
    uint32_t cp = utf8_next(in, i);
    bool ws = cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
              cp == '\v' || cp == 0xA0;
    if (ws) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out.append(in.substr(before, i - before));
    }
  }
  return out;
}

}  // namespace aqm
