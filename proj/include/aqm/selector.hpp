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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aqm/html.hpp"
#include "aqm/strings.hpp"

namespace aqm {

class SelectorError : public std::runtime_error {
 public:
  explicit SelectorError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * Compiled CSS selector over a documented dialect: type, .class, #id,
 * [attr], [attr=value], descendant (whitespace) and child ('>') combinators,
 * and :nth-of-type(n). Anything else is a SelectorError at compile time, so
 * an unsupported selector in a config fails the config load instead of
 * silently matching nothing.
 */
class Selector {
 public:
  static Selector compile(std::string_view text) {
    Selector s;
    s.source_ = std::string(text);
    Parser p{text, 0};
    p.skip_ws();
    if (p.done()) throw SelectorError("empty selector");
    bool expect_compound = true;
    while (!p.done()) {
      if (expect_compound) {
        s.steps_.push_back(p.parse_compound());
        expect_compound = false;
      } else {
        bool saw_ws = p.skip_ws();
        if (p.done()) break;
        if (p.peek() == '>') {
          p.next();
          p.skip_ws();
          s.steps_.back().combinator_to_next = Combinator::child;
        } else if (saw_ws) {
          s.steps_.back().combinator_to_next = Combinator::descendant;
        } else {
          throw SelectorError("unsupported selector syntax near '" +
                              std::string(1, p.peek()) + "' in: " + s.source_);
        }
        expect_compound = true;
      }
    }
    if (expect_compound) throw SelectorError("selector ends with a combinator: " + s.source_);
    return s;
  }

  const std::string& source() const { return source_; }

  /// True if `node` matches the full selector with ancestor lookups confined
  /// to the subtree rooted at `scope` (inclusive).
  bool matches(const HtmlNode& node, const HtmlNode& scope) const {
    return match_from(node, steps_.size() - 1, scope);
  }

  /// All elements in `scope`'s subtree (excluding `scope` itself) matching
  /// this selector, in document order.
  std::vector<const HtmlNode*> select_all(const HtmlNode& scope) const {
    std::vector<const HtmlNode*> out;
    scope.for_each_element([&](const HtmlNode& el) {
      if (matches(el, scope)) out.push_back(&el);
    });
    return out;
  }

  const HtmlNode* select_first(const HtmlNode& scope) const {
    auto all = select_all(scope);
    return all.empty() ? nullptr : all.front();
  }

 private:
  enum class Combinator { none, descendant, child };

  struct Condition {
    enum class Kind { cls, id, attr_present, attr_equals, nth_of_type };
    Kind kind;
    std::string name;   // class name, id, or attribute name
    std::string value;  // attribute value
    int n = 0;          // nth-of-type index
  };

  struct Compound {
    std::string type;  // lowercase element name, empty or "*" = any
    std::vector<Condition> conditions;
    Combinator combinator_to_next = Combinator::none;
  };

  struct Parser {
    std::string_view text;
    size_t pos;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char next() { return text[pos++]; }

    bool skip_ws() {
      bool any = false;
      while (!done() && is_ascii_space(peek())) {
        ++pos;
        any = true;
      }
      return any;
    }

    static bool ident_char(char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    }

    std::string ident() {
      size_t start = pos;
      while (!done() && ident_char(peek())) ++pos;
      if (pos == start) throw SelectorError("expected identifier in selector");
      return std::string(text.substr(start, pos - start));
    }

    Compound parse_compound() {
      Compound c;
      if (!done() && peek() == '*') {
        next();
        c.type = "*";
      } else if (!done() && (std::isalpha(static_cast<unsigned char>(peek())))) {
        c.type = to_ascii_lower(ident());
      }
      while (!done()) {
        char ch = peek();
        if (ch == '.') {
          next();
          c.conditions.push_back({Condition::Kind::cls, ident(), "", 0});
        } else if (ch == '#') {
          next();
          c.conditions.push_back({Condition::Kind::id, ident(), "", 0});
        } else if (ch == '[') {
          next();
          skip_ws();
          std::string name = to_ascii_lower(ident());
          skip_ws();
          if (!done() && peek() == ']') {
            next();
            c.conditions.push_back({Condition::Kind::attr_present, name, "", 0});
          } else if (!done() && peek() == '=') {
            next();
            std::string value;
            if (!done() && (peek() == '"' || peek() == '\'')) {
              char quote = next();
              size_t start = pos;
              while (!done() && peek() != quote) ++pos;
              if (done()) throw SelectorError("unterminated attribute value");
              value = std::string(text.substr(start, pos - start));
              next();
            } else {
              size_t start = pos;
              while (!done() && peek() != ']') ++pos;
              value = std::string(trim(text.substr(start, pos - start)));
            }
            skip_ws();
            if (done() || next() != ']')
              throw SelectorError("unterminated attribute selector");
            c.conditions.push_back({Condition::Kind::attr_equals, name, value, 0});
          } else {
            throw SelectorError("unsupported attribute selector syntax");
          }
        } else if (ch == ':') {
          next();
          std::string name = ident();
          if (name != "nth-of-type")
            throw SelectorError("unsupported pseudo-class :" + name);
          if (done() || next() != '(')
            throw SelectorError(":nth-of-type needs an argument");
          skip_ws();
          int n = 0;
          bool any = false;
          while (!done() && peek() >= '0' && peek() <= '9') {
            n = n * 10 + (next() - '0');
            any = true;
          }
          skip_ws();
          if (!any || done() || next() != ')' || n < 1)
            throw SelectorError(":nth-of-type needs a positive integer");
          c.conditions.push_back({Condition::Kind::nth_of_type, "", "", n});
        } else {
          break;
        }
      }
      if (c.type.empty() && c.conditions.empty())
        throw SelectorError("unsupported selector syntax near '" +
                            std::string(1, peek()) + "'");
      return c;
    }
  };

  static bool has_class(const HtmlNode& el, std::string_view cls) {
    auto attr = el.attr("class");
    if (!attr) return false;
    std::string_view s = *attr;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || is_ascii_space(s[i])) {
        if (s.substr(start, i - start) == cls) return true;
        start = i + 1;
      }
    }
    return false;
  }

  static bool match_compound(const HtmlNode& el, const Compound& c) {
    if (!el.is_element()) return false;
    if (!c.type.empty() && c.type != "*" && el.tag != c.type) return false;
    for (const auto& cond : c.conditions) {
      switch (cond.kind) {
        case Condition::Kind::cls:
          if (!has_class(el, cond.name)) return false;
          break;
        case Condition::Kind::id: {
          auto id = el.attr("id");
          if (!id || *id != cond.name) return false;
          break;
        }
        case Condition::Kind::attr_present:
          if (!el.attr(cond.name)) return false;
          break;
        case Condition::Kind::attr_equals: {
          auto v = el.attr(cond.name);
          if (!v || *v != cond.value) return false;
          break;
        }
        case Condition::Kind::nth_of_type:
          if (el.nth_of_type() != cond.n) return false;
          break;
      }
    }
    return true;
  }

  bool match_from(const HtmlNode& node, size_t step, const HtmlNode& scope) const {
    if (!match_compound(node, steps_[step])) return false;
    if (step == 0) return true;
    Combinator comb = steps_[step - 1].combinator_to_next;
    const HtmlNode* parent = node.parent;
    if (comb == Combinator::child) {
      if (!parent || parent == scope.parent) return false;
      // Parent must stay inside the scope subtree (scope itself allowed).
      return match_from(*parent, step - 1, scope);
    }
    while (parent && parent != scope.parent) {
      if (match_from(*parent, step - 1, scope)) return true;
      if (parent == &scope) break;
      parent = parent->parent;
    }
    return false;
  }

  std::string source_;
  std::vector<Compound> steps_;
};

}  // namespace aqm
