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

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "aqm/html.hpp"
#include "aqm/selector.hpp"
#include "aqm/url.hpp"

namespace aqm {

/**
 * Selector configuration for one SERP layout: where the result items live,
 * and, relative to each item, where its title, link anchor and snippet are.
 * A provider carries several of these ordered by preference to cover layout
 * redesigns over the years.
 */
struct SerpParserSpec {
  std::string results_selector;
  std::string title_selector;
  std::string url_selector;
  std::string snippet_selector;
  std::string query_selector;
  std::optional<std::string> url_gate;
  std::string id;  // e.g. "serp_parsers[0]", assigned at registry load

  // Compiled at load; compile() throws SelectorError / regex_error so a bad
  // config fails loudly instead of silently not matching.
  std::shared_ptr<const Selector> results_sel, title_sel, url_sel, snippet_sel, query_sel;
  std::shared_ptr<const std::regex> gate_re;

  void compile() {
    auto compile_opt = [](const std::string& s) -> std::shared_ptr<const Selector> {
      if (s.empty()) return nullptr;
      return std::make_shared<const Selector>(Selector::compile(s));
    };
    if (results_selector.empty()) throw SelectorError("results_selector must be non-empty");
    results_sel = compile_opt(results_selector);
    title_sel = compile_opt(title_selector);
    url_sel = compile_opt(url_selector);
    snippet_sel = compile_opt(snippet_selector);
    query_sel = compile_opt(query_selector);
    gate_re = url_gate ? std::make_shared<const std::regex>(*url_gate) : nullptr;
  }

  bool operator==(const SerpParserSpec& o) const {
    return results_selector == o.results_selector && title_selector == o.title_selector &&
           url_selector == o.url_selector && snippet_selector == o.snippet_selector &&
           query_selector == o.query_selector && url_gate == o.url_gate;
  }
};

struct SearchResult {
  int rank = 0;  // 1-based
  std::string title;
  std::string url;  // absolute after resolution against the SERP URL
  std::string snippet;

  bool operator==(const SearchResult&) const = default;
};

struct ParsedSerp {
  std::optional<std::string> interpreted_query;
  std::vector<SearchResult> results;
  std::string matched_spec;
  std::vector<std::string> warnings;  // e.g. items dropped for missing anchors
};

/// Strips a web-archive replay prefix ("…/web/<timestamp><flag>/<original>")
/// from a URL, returning the original URL when the pattern is present.
inline std::string unwrap_archive_url(std::string_view url) {
  size_t at = url.find("/web/");
  if (at == std::string_view::npos) return std::string(url);
  size_t i = at + 5;
  size_t digits = 0;
  while (i < url.size() && url[i] >= '0' && url[i] <= '9') {
    ++i;
    ++digits;
  }
  if (digits < 4) return std::string(url);
  // optional modifier such as "id_", "if_", "im_"
  size_t mod = i;
  while (mod < url.size() && url[mod] != '/' && mod - i <= 3) ++mod;
  if (mod - i > 0 && (mod >= url.size() || url[mod] != '/' || url[mod - 1] != '_'))
    return std::string(url);
  if (mod >= url.size() || url[mod] != '/') return std::string(url);
  std::string_view rest = url.substr(mod + 1);
  if (rest.starts_with("http://") || rest.starts_with("https://") ||
      rest.starts_with("//"))
    return std::string(rest);
  return std::string(url);
}

namespace detail {

inline std::string element_text(const HtmlNode& el) {
  return collapse_whitespace(el.text_content());
}

}  // namespace detail

/**
 * Parses an archived SERP with the first applicable spec. A spec applies
 * when its url_gate matches the SERP URL (or is absent) and its
 * results_selector finds at least one item. Ranks are contiguous 1..n in
 * document order; items without a resolvable link are dropped with a
 * warning. Returns nothing when no spec applies (a parse miss).
 */
inline std::optional<ParsedSerp> parse_serp(std::string_view html, std::string_view serp_url,
                                            const std::vector<SerpParserSpec>& specs) {
  HtmlDocument doc = HtmlDocument::parse(html);
  for (const auto& spec : specs) {
    if (spec.url_gate) {
      auto gate = spec.gate_re ? spec.gate_re
                               : std::make_shared<const std::regex>(*spec.url_gate);
      if (!std::regex_search(std::string(serp_url), *gate)) continue;
    }
    std::shared_ptr<const Selector> results_sel = spec.results_sel;
    if (!results_sel)
      results_sel = std::make_shared<const Selector>(Selector::compile(spec.results_selector));
    auto items = results_sel->select_all(doc.root());
    if (items.empty()) continue;

    auto compiled = [](const std::shared_ptr<const Selector>& pre,
                       const std::string& source) -> std::shared_ptr<const Selector> {
      if (pre) return pre;
      if (source.empty()) return nullptr;
      return std::make_shared<const Selector>(Selector::compile(source));
    };
    auto title_sel = compiled(spec.title_sel, spec.title_selector);
    auto url_sel = compiled(spec.url_sel, spec.url_selector);
    auto snippet_sel = compiled(spec.snippet_sel, spec.snippet_selector);
    auto query_sel = compiled(spec.query_sel, spec.query_selector);

    ParsedSerp out;
    out.matched_spec = spec.id.empty() ? spec.results_selector : spec.id;
    if (query_sel) {
      if (const HtmlNode* q = query_sel->select_first(doc.root())) {
        std::string text;
        if (auto value = q->attr("value"))
          text = collapse_whitespace(*value);
        else
          text = detail::element_text(*q);
        if (!text.empty()) out.interpreted_query = std::move(text);
      }
    }
    int rank = 0;
    size_t item_index = 0;
    for (const HtmlNode* item : items) {
      ++item_index;
      const HtmlNode* anchor = url_sel ? url_sel->select_first(*item) : nullptr;
      std::optional<std::string_view> href =
          anchor ? anchor->attr("href") : std::nullopt;
      if (!href || trim(*href).empty()) {
        out.warnings.push_back("result item " + std::to_string(item_index) +
                               " dropped: no link anchor");
        continue;
      }
      SearchResult r;
      r.url = unwrap_archive_url(url_resolve(serp_url, trim(*href)));
      if (title_sel) {
        if (const HtmlNode* t = title_sel->select_first(*item))
          r.title = detail::element_text(*t);
      }
      if (snippet_sel) {
        if (const HtmlNode* s = snippet_sel->select_first(*item))
          r.snippet = detail::element_text(*s);
      }
      r.rank = ++rank;
      out.results.push_back(std::move(r));
    }
    return out;
  }
  return std::nullopt;
}

/// One parsed SERP together with where it sat in the provider's pagination.
struct PagedSerp {
  ParsedSerp serp;
  std::optional<uint64_t> page;    // 0-based page number
  std::optional<uint64_t> offset;  // explicit result offset; wins over page
};

struct MergedRanking {
  std::vector<SearchResult> results;  // ranks are global, ascending, gaps allowed
  std::vector<std::string> conflicts;
};

/**
 * Merges paginated SERPs for one query into a single ranking. An item with
 * local rank r on 0-based page p lands at global rank p*results_per_page + r;
 * an explicit offset o puts it at o + r. Duplicates claiming one global rank
 * are reported and the one from the lowest-offset page wins.
 */
inline MergedRanking infer_continued_ranks(std::vector<PagedSerp> serps,
                                           uint64_t results_per_page) {
  auto start_of = [results_per_page](const PagedSerp& ps) -> uint64_t {
    if (ps.offset) return *ps.offset;
    return ps.page.value_or(0) * results_per_page;
  };
  std::stable_sort(serps.begin(), serps.end(),
                   [&](const PagedSerp& a, const PagedSerp& b) {
                     return start_of(a) < start_of(b);
                   });
  MergedRanking out;
  std::map<uint64_t, SearchResult> by_rank;
  for (const auto& ps : serps) {
    uint64_t start = start_of(ps);
    for (const auto& r : ps.serp.results) {
      uint64_t global = start + static_cast<uint64_t>(r.rank);
      auto [it, inserted] = by_rank.try_emplace(global, r);
      if (!inserted) {
        out.conflicts.push_back("conflicting results at global rank " +
                                std::to_string(global) + ": kept " + it->second.url +
                                ", ignored " + r.url);
      } else {
        it->second.rank = static_cast<int>(global);
      }
    }
  }
  out.results.reserve(by_rank.size());
  for (auto& [rank, result] : by_rank) out.results.push_back(std::move(result));
  return out;
}

}  // namespace aqm
