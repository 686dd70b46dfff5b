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
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "aqm/strings.hpp"
#include "aqm/url.hpp"

namespace aqm {

enum class ParserKind { query_parameter, path_segment, fragment_parameter };
enum class ParsedField { query, page, offset };

inline std::string_view to_string(ParserKind k) {
  switch (k) {
    case ParserKind::query_parameter: return "query_parameter";
    case ParserKind::path_segment: return "path_segment";
    case ParserKind::fragment_parameter: return "fragment_parameter";
  }
  return "";
}

inline std::string_view to_string(ParsedField f) {
  switch (f) {
    case ParsedField::query: return "query";
    case ParsedField::page: return "page";
    case ParsedField::offset: return "offset";
  }
  return "";
}

/**
 * One rule for pulling a query, page, or offset out of a SERP URL. Three
 * kinds exist: a named query-string parameter, a path segment by index, or
 * a named parameter inside the fragment identifier.
 *
 * `url_gate` restricts the rule to URLs it matches (unanchored search over
 * the full URL). `strip_prefix` is matched anchored at the start of the raw
 * extracted value and removed when it matches; the value passes through
 * unchanged when it does not.
 */
struct QueryParserSpec {
  ParserKind kind = ParserKind::query_parameter;
  std::string parameter_name;  // query_parameter / fragment_parameter
  size_t segment_index = 0;    // path_segment
  std::optional<std::string> url_gate;
  std::optional<std::string> strip_prefix;
  ParsedField field = ParsedField::query;
  std::string id;  // e.g. "query_parsers[0]", assigned at registry load

  // Compiled once at load; apply_parser falls back to compiling locally for
  // specs built by hand, keeping the spec value shareable across threads.
  std::shared_ptr<const std::regex> gate_re, strip_re;

  /// Compiles url_gate and strip_prefix; throws std::regex_error on bad
  /// patterns, which registry loading turns into a config error.
  void compile_patterns() {
    gate_re = url_gate ? std::make_shared<const std::regex>(*url_gate) : nullptr;
    strip_re = strip_prefix ? std::make_shared<const std::regex>(*strip_prefix) : nullptr;
  }

  bool operator==(const QueryParserSpec& o) const {
    return kind == o.kind && parameter_name == o.parameter_name &&
           segment_index == o.segment_index && url_gate == o.url_gate &&
           strip_prefix == o.strip_prefix && field == o.field;
  }
};

/// Query text plus optional page/offset extracted from one capture URL,
/// with the id of the spec that produced each field.
struct ExtractionResult {
  std::optional<std::string> query;
  std::optional<uint64_t> page;
  std::optional<uint64_t> offset;
  std::string query_parser, page_parser, offset_parser;

  bool empty() const { return !query && !page && !offset; }
  bool operator==(const ExtractionResult&) const = default;
};

/**
 * Applies one parser spec to split URL components, returning the raw
 * (undecoded, post-strip_prefix) value, or nothing. For parameter kinds the
 * pairs split on '&' then on the first '='; the first pair whose name
 * matches byte-for-byte wins.
 */
inline std::optional<std::string> apply_parser(const QueryParserSpec& spec,
                                               const UrlComponents& components) {
  if (spec.url_gate) {
    auto gate = spec.gate_re ? spec.gate_re
                             : std::make_shared<const std::regex>(*spec.url_gate);
    std::string full = components.assemble();
    if (!std::regex_search(full, *gate)) return std::nullopt;
  }
  std::optional<std::string> raw;
  switch (spec.kind) {
    case ParserKind::query_parameter:
    case ParserKind::fragment_parameter: {
      const auto& part = spec.kind == ParserKind::query_parameter
                             ? components.query_string
                             : components.fragment;
      if (!part) return std::nullopt;
      for (auto [name, value] : parse_query_pairs(*part)) {
        if (name == spec.parameter_name) {
          raw = std::string(value);
          break;
        }
      }
      break;
    }
    case ParserKind::path_segment: {
      auto segs = components.nonempty_segments();
      if (spec.segment_index >= segs.size()) return std::nullopt;
      raw = std::string(segs[spec.segment_index]);
      break;
    }
  }
  if (!raw) return std::nullopt;
  if (spec.strip_prefix) {
    auto strip = spec.strip_re ? spec.strip_re
                               : std::make_shared<const std::regex>(*spec.strip_prefix);
    std::smatch m;
    if (std::regex_search(*raw, m, *strip, std::regex_constants::match_continuous)) {
      raw = raw->substr(m.length(0));
    }
  }
  return raw;
}

/**
 * Decodes a raw extracted value: for parameter kinds '+' becomes a space,
 * then percent-escapes decode as UTF-8. Malformed escapes pass through
 * literally; invalid UTF-8 is replaced. The result is trimmed.
 */
inline std::string decode_value(std::string_view raw, ParserKind kind) {
  bool plus_to_space = kind != ParserKind::path_segment;
  std::string decoded = percent_decode_lenient(raw, plus_to_space);
  return std::string(trim(utf8_sanitize(decoded)));
}

namespace detail {

inline std::optional<uint64_t> parse_nonnegative_int(std::string_view s) {
  if (s.empty() || s.size() > 19) return std::nullopt;
  uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<uint64_t>(c - '0');
  }
  return v;
}

}  // namespace detail

/**
 * Runs the per-field parser chains over a URL. Each field independently
 * goes to the first spec in its list that yields a non-empty decoded value;
 * page/offset additionally must parse as base-10 non-negative integers or
 * the chain continues past them. Nothing is returned when all three fields
 * come up empty.
 */
inline std::optional<ExtractionResult> extract_from_url(
    const std::vector<QueryParserSpec>& query_parsers,
    const std::vector<QueryParserSpec>& page_parsers,
    const std::vector<QueryParserSpec>& offset_parsers, std::string_view url) {
  UrlComponents components = split_url(url);
  ExtractionResult out;
  for (const auto& spec : query_parsers) {
    auto raw = apply_parser(spec, components);
    if (!raw) continue;
    std::string decoded = decode_value(*raw, spec.kind);
    if (decoded.empty()) continue;
    out.query = std::move(decoded);
    out.query_parser = spec.id;
    break;
  }
  auto run_numeric = [&components](const std::vector<QueryParserSpec>& specs,
                                   std::optional<uint64_t>& slot, std::string& id) {
    for (const auto& spec : specs) {
      auto raw = apply_parser(spec, components);
      if (!raw) continue;
      auto value = detail::parse_nonnegative_int(decode_value(*raw, spec.kind));
      if (!value) continue;
      slot = *value;
      id = spec.id;
      break;
    }
  };
  run_numeric(page_parsers, out.page, out.page_parser);
  run_numeric(offset_parsers, out.offset, out.offset_parser);
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace aqm
