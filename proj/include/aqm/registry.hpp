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
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqm/capture.hpp"
#include "aqm/extraction.hpp"
#include "aqm/html.hpp"
#include "aqm/serp.hpp"

namespace aqm {

class RegistryError : public std::runtime_error {
 public:
  explicit RegistryError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * Everything known about one search provider: where its SERPs live
 * (domains, URL prefixes), how to read queries out of its URLs (ordered
 * parser chains), and how to read results out of its pages (ordered
 * selector configs).
 *
 * download_cap semantics: a positive integer caps SERP downloads for the
 * provider; an explicit null in the file means uncapped; an absent key
 * leaves the provider subject to the planner's default cap.
 */
struct ProviderConfig {
  std::string name;
  std::string category;
  std::vector<std::string> domains;
  std::vector<std::string> url_prefixes;
  std::vector<QueryParserSpec> query_parsers;
  std::vector<QueryParserSpec> page_parsers;
  std::vector<QueryParserSpec> offset_parsers;
  std::vector<SerpParserSpec> serp_parsers;
  std::optional<uint64_t> download_cap;
  bool cap_unlimited = false;  // file said "download_cap": null
  bool excluded = false;
  std::optional<std::string> exclusion_reason;

  bool operator==(const ProviderConfig&) const = default;

  /// True when `url` (scheme ignored) begins with one of this provider's
  /// URL prefixes.
  bool matches_url(std::string_view url) const {
    std::string_view rest = url;
    if (auto p = rest.find("://"); p != std::string_view::npos) rest = rest.substr(p + 3);
    for (const auto& prefix : url_prefixes)
      if (rest.starts_with(prefix)) return true;
    return false;
  }
};

class ProviderRegistry {
 public:
  explicit ProviderRegistry(std::vector<ProviderConfig> providers)
      : providers_(std::move(providers)) {
    for (size_t i = 0; i < providers_.size(); ++i) index_[providers_[i].name] = i;
  }

  const std::vector<ProviderConfig>& providers() const { return providers_; }
  size_t size() const { return providers_.size(); }

  const ProviderConfig* find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &providers_[it->second];
  }

  /// First provider (file order) whose prefixes match the URL.
  const ProviderConfig* provider_for_url(std::string_view url) const {
    for (const auto& p : providers_)
      if (p.matches_url(url)) return &p;
    return nullptr;
  }

 private:
  std::vector<ProviderConfig> providers_;
  std::unordered_map<std::string, size_t> index_;
};

namespace detail {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline ParserKind parser_kind_from_string(std::string_view s) {
  if (s == "query_parameter") return ParserKind::query_parameter;
  if (s == "path_segment") return ParserKind::path_segment;
  if (s == "fragment_parameter") return ParserKind::fragment_parameter;
  throw RegistryError("unknown parser kind '" + std::string(s) + "'");
}

inline ParsedField parsed_field_from_string(std::string_view s) {
  if (s == "query") return ParsedField::query;
  if (s == "page") return ParsedField::page;
  if (s == "offset") return ParsedField::offset;
  throw RegistryError("unknown parser field '" + std::string(s) + "'");
}

inline QueryParserSpec query_parser_from_json(const json& j, ParsedField list_field,
                                              const std::string& where) {
  if (!j.is_object()) throw RegistryError(where + ": parser spec must be an object");
  QueryParserSpec spec;
  if (!j.contains("kind") || !j["kind"].is_string())
    throw RegistryError(where + ": missing 'kind'");
  spec.kind = parser_kind_from_string(j["kind"].get<std::string>());
  spec.field = list_field;
  if (j.contains("field")) {
    spec.field = parsed_field_from_string(j["field"].get<std::string>());
    if (spec.field != list_field)
      throw RegistryError(where + ": 'field' disagrees with the containing list");
  }
  bool needs_name = spec.kind != ParserKind::path_segment;
  if (needs_name) {
    if (!j.contains("parameter_name") || !j["parameter_name"].is_string() ||
        j["parameter_name"].get<std::string>().empty())
      throw RegistryError(where + ": 'parameter_name' required for kind " +
                          std::string(to_string(spec.kind)));
    if (j.contains("segment_index"))
      throw RegistryError(where + ": 'segment_index' not allowed for kind " +
                          std::string(to_string(spec.kind)));
    spec.parameter_name = j["parameter_name"].get<std::string>();
  } else {
    if (!j.contains("segment_index") || !j["segment_index"].is_number_unsigned())
      throw RegistryError(where + ": 'segment_index' required for kind path_segment");
    if (j.contains("parameter_name"))
      throw RegistryError(where + ": 'parameter_name' not allowed for kind path_segment");
    spec.segment_index = j["segment_index"].get<uint64_t>();
  }
  if (j.contains("url_gate")) spec.url_gate = j["url_gate"].get<std::string>();
  if (j.contains("strip_prefix")) spec.strip_prefix = j["strip_prefix"].get<std::string>();
  try {
    spec.compile_patterns();
  } catch (const std::regex_error& e) {
    throw RegistryError(where + ": bad regular expression: " + e.what());
  }
  return spec;
}

inline SerpParserSpec serp_parser_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw RegistryError(where + ": parser spec must be an object");
  SerpParserSpec spec;
  if (!j.contains("results_selector") || !j["results_selector"].is_string() ||
      j["results_selector"].get<std::string>().empty())
    throw RegistryError(where + ": 'results_selector' required");
  spec.results_selector = j["results_selector"].get<std::string>();
  auto opt_string = [&](const char* key) -> std::string {
    return j.contains(key) ? j[key].get<std::string>() : std::string{};
  };
  spec.title_selector = opt_string("title_selector");
  spec.url_selector = opt_string("url_selector");
  spec.snippet_selector = opt_string("snippet_selector");
  spec.query_selector = opt_string("query_selector");
  if (j.contains("url_gate")) spec.url_gate = j["url_gate"].get<std::string>();
  try {
    spec.compile();
  } catch (const SelectorError& e) {
    throw RegistryError(where + ": " + e.what());
  } catch (const std::regex_error& e) {
    throw RegistryError(where + ": bad regular expression: " + e.what());
  }
  return spec;
}

inline ordered_json query_parser_to_json(const QueryParserSpec& spec) {
  ordered_json j;
  j["kind"] = std::string(to_string(spec.kind));
  if (spec.kind != ParserKind::path_segment)
    j["parameter_name"] = spec.parameter_name;
  else
    j["segment_index"] = spec.segment_index;
  if (spec.url_gate) j["url_gate"] = *spec.url_gate;
  if (spec.strip_prefix) j["strip_prefix"] = *spec.strip_prefix;
  j["field"] = std::string(to_string(spec.field));
  return j;
}

inline ordered_json serp_parser_to_json(const SerpParserSpec& spec) {
  ordered_json j;
  j["results_selector"] = spec.results_selector;
  if (!spec.title_selector.empty()) j["title_selector"] = spec.title_selector;
  if (!spec.url_selector.empty()) j["url_selector"] = spec.url_selector;
  if (!spec.snippet_selector.empty()) j["snippet_selector"] = spec.snippet_selector;
  if (!spec.query_selector.empty()) j["query_selector"] = spec.query_selector;
  if (spec.url_gate) j["url_gate"] = *spec.url_gate;
  return j;
}

inline size_t line_of_byte_offset(std::string_view text, size_t offset) {
  size_t line = 1;
  for (size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

/// Validates a provider's invariants; the error names the provider and field.
inline void validate_provider(const ProviderConfig& p) {
  auto fail = [&](const std::string& field, const std::string& what) {
    throw RegistryError("provider '" + p.name + "': field '" + field + "': " + what);
  };
  if (p.name.empty()) throw RegistryError("provider with empty name");
  if (p.category.empty()) fail("category", "must be non-empty");
  if (p.domains.empty()) fail("domains", "must be non-empty");
  std::set<std::string_view> seen;
  for (const auto& d : p.domains) {
    if (d.empty() || d.find('/') != std::string::npos || d.find("://") != std::string::npos)
      fail("domains", "'" + d + "' is not a bare domain");
    if (!seen.insert(d).second) fail("domains", "duplicate domain '" + d + "'");
  }
  for (const auto& prefix : p.url_prefixes) {
    bool ok = false;
    for (const auto& d : p.domains) {
      if (prefix == d ||
          (prefix.starts_with(d) && prefix.size() > d.size() &&
           (prefix[d.size()] == '/' || prefix[d.size()] == ':' || prefix[d.size()] == '?'))) {
        ok = true;
        break;
      }
    }
    if (!ok) fail("url_prefixes", "prefix '" + prefix + "' does not start with any domain");
  }
  if (p.query_parsers.empty() && !p.excluded)
    fail("query_parsers", "may be empty only for excluded providers");
  if (p.excluded && (!p.exclusion_reason || p.exclusion_reason->empty()))
    fail("exclusion_reason", "excluded providers need a reason");
  if (p.download_cap && *p.download_cap == 0)
    fail("download_cap", "must be positive when present");
  if (p.download_cap && p.cap_unlimited)
    fail("download_cap", "cannot be both a number and null");
}

/**
 * Loads a provider registry from a JSON document: a top-level array of
 * provider objects (keys: name, category, domains, url_prefixes,
 * query_parsers, page_parsers, offset_parsers, serp_parsers, download_cap,
 * excluded, exclusion_reason). Iteration order is file order. Parse errors
 * carry the line; invariant violations name the provider and field.
 */
inline ProviderRegistry load_registry_from_string(std::string_view text) {
  namespace dj = detail;
  dj::json doc;
  try {
    doc = dj::json::parse(text);
  } catch (const dj::json::parse_error& e) {
    throw RegistryError("registry parse error at line " +
                        std::to_string(dj::line_of_byte_offset(text, e.byte)) + ": " +
                        e.what());
  }
  if (!doc.is_array()) throw RegistryError("registry must be a JSON array of providers");
  std::vector<ProviderConfig> providers;
  std::set<std::string> names;
  for (const auto& j : doc) {
    if (!j.is_object()) throw RegistryError("registry entries must be objects");
    ProviderConfig p;
    if (!j.contains("name") || !j["name"].is_string())
      throw RegistryError("provider entry missing 'name'");
    p.name = j["name"].get<std::string>();
    if (!names.insert(p.name).second)
      throw RegistryError("provider '" + p.name + "': field 'name': duplicate name");
    auto where = [&](const std::string& list, size_t i) {
      return "provider '" + p.name + "': " + list + "[" + std::to_string(i) + "]";
    };
    p.category = j.value("category", std::string{});
    if (j.contains("domains"))
      for (const auto& d : j["domains"]) p.domains.push_back(d.get<std::string>());
    if (j.contains("url_prefixes"))
      for (const auto& u : j["url_prefixes"]) p.url_prefixes.push_back(u.get<std::string>());
    auto load_query_parsers = [&](const char* key, ParsedField field,
                                  std::vector<QueryParserSpec>& out) {
      if (!j.contains(key)) return;
      if (!j[key].is_array())
        throw RegistryError("provider '" + p.name + "': field '" + std::string(key) +
                            "': must be an array");
      size_t i = 0;
      for (const auto& spec_json : j[key]) {
        auto spec = dj::query_parser_from_json(spec_json, field, where(key, i));
        spec.id = std::string(key) + "[" + std::to_string(i) + "]";
        out.push_back(std::move(spec));
        ++i;
      }
    };
    load_query_parsers("query_parsers", ParsedField::query, p.query_parsers);
    load_query_parsers("page_parsers", ParsedField::page, p.page_parsers);
    load_query_parsers("offset_parsers", ParsedField::offset, p.offset_parsers);
    if (j.contains("serp_parsers")) {
      size_t i = 0;
      for (const auto& spec_json : j["serp_parsers"]) {
        auto spec = dj::serp_parser_from_json(spec_json, where("serp_parsers", i));
        spec.id = "serp_parsers[" + std::to_string(i) + "]";
        p.serp_parsers.push_back(std::move(spec));
        ++i;
      }
    }
    if (j.contains("download_cap")) {
      if (j["download_cap"].is_null())
        p.cap_unlimited = true;
      else if (j["download_cap"].is_number_unsigned())
        p.download_cap = j["download_cap"].get<uint64_t>();
      else
        throw RegistryError("provider '" + p.name +
                            "': field 'download_cap': must be a positive integer or null");
    }
    p.excluded = j.value("excluded", false);
    if (j.contains("exclusion_reason"))
      p.exclusion_reason = j["exclusion_reason"].get<std::string>();
    validate_provider(p);
    providers.push_back(std::move(p));
  }
  return ProviderRegistry(std::move(providers));
}

inline ProviderRegistry load_registry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RegistryError("cannot open registry file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_registry_from_string(buffer.str());
}

/// Serializes a registry back to the file format; load(save(r)) reproduces
/// r field-for-field.
inline std::string save_registry_to_string(const ProviderRegistry& registry) {
  namespace dj = detail;
  dj::ordered_json doc = dj::ordered_json::array();
  for (const auto& p : registry.providers()) {
    dj::ordered_json j;
    j["name"] = p.name;
    j["category"] = p.category;
    j["domains"] = p.domains;
    j["url_prefixes"] = p.url_prefixes;
    auto dump_parsers = [&](const char* key, const std::vector<QueryParserSpec>& specs) {
      auto arr = dj::ordered_json::array();
      for (const auto& s : specs) arr.push_back(dj::query_parser_to_json(s));
      j[key] = std::move(arr);
    };
    dump_parsers("query_parsers", p.query_parsers);
    dump_parsers("page_parsers", p.page_parsers);
    dump_parsers("offset_parsers", p.offset_parsers);
    auto serp_arr = dj::ordered_json::array();
    for (const auto& s : p.serp_parsers) serp_arr.push_back(dj::serp_parser_to_json(s));
    j["serp_parsers"] = std::move(serp_arr);
    if (p.download_cap) j["download_cap"] = *p.download_cap;
    if (p.cap_unlimited) j["download_cap"] = nullptr;
    j["excluded"] = p.excluded;
    if (p.exclusion_reason) j["exclusion_reason"] = *p.exclusion_reason;
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

inline void save_registry(const ProviderRegistry& registry,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RegistryError("cannot write registry file: " + path.string());
  out << save_registry_to_string(registry);
}

/// Runs the provider's parser chains over one capture's URL.
inline std::optional<ExtractionResult> extract(const ProviderConfig& provider,
                                               const Capture& capture) {
  return extract_from_url(provider.query_parsers, provider.page_parsers,
                          provider.offset_parsers, capture.url);
}

/**
 * Static search-interface check over a landing page: true iff the document
 * contains a form element, or a div whose attributes carry the substring
 * "search" (case-insensitive) in any name or value. No scripts run.
 */
inline bool detect_search_interface(std::string_view html) {
  HtmlDocument doc = HtmlDocument::parse(html);
  bool found = false;
  doc.for_each_element([&](const HtmlNode& el) {
    if (found) return;
    if (el.tag == "form") {
      found = true;
      return;
    }
    if (el.tag == "div") {
      for (const auto& [name, value] : el.attrs) {
        if (contains_ci(name, "search") || contains_ci(value, "search")) {
          found = true;
          return;
        }
      }
    }
  });
  return found;
}

}  // namespace aqm
