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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aqm/strings.hpp"

namespace aqm {

class UrlError : public std::runtime_error {
 public:
  explicit UrlError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * A SERP URL split into its raw components. No percent-decoding happens at
 * this stage; assemble() reproduces the input byte-for-byte.
 *
 * `path` holds the raw segments with the separating slashes excluded. An
 * empty vector means the URL had no path at all; a URL ending in '/' yields
 * a trailing empty segment.
 */
struct UrlComponents {
  std::optional<std::string> scheme;  // without the "://"
  bool scheme_relative = false;       // input began with "//"
  std::string authority;             // raw userinfo@host:port
  std::vector<std::string> path;
  std::optional<std::string> query_string;  // without the '?'
  std::optional<std::string> fragment;      // without the '#'

  std::string assemble() const {
    std::string out;
    if (scheme) {
      out += *scheme;
      out += "://";
    } else if (scheme_relative) {
      out += "//";
    }
    out += authority;
    if (!path.empty()) {
      for (const auto& seg : path) {
        out += '/';
        out += seg;
      }
    }
    if (query_string) {
      out += '?';
      out += *query_string;
    }
    if (fragment) {
      out += '#';
      out += *fragment;
    }
    return out;
  }

  /// Path segments that are non-empty, in order. Parser indices count over
  /// these, so trailing or doubled slashes do not shift them.
  std::vector<std::string_view> nonempty_segments() const {
    std::vector<std::string_view> out;
    for (const auto& seg : path)
      if (!seg.empty()) out.emplace_back(seg);
    return out;
  }

  /// Host part of the authority: userinfo and port stripped.
  std::string host() const {
    std::string_view a = authority;
    if (auto at = a.rfind('@'); at != std::string_view::npos) a = a.substr(at + 1);
    if (auto colon = a.rfind(':'); colon != std::string_view::npos) {
      std::string_view port = a.substr(colon + 1);
      bool digits = !port.empty();
      for (char c : port)
        if (c < '0' || c > '9') digits = false;
      if (digits) a = a.substr(0, colon);
    }
    return std::string(a);
  }
};

namespace detail {

inline bool has_scheme_prefix(std::string_view url, size_t& scheme_end) {
  if (url.empty() || !((url[0] >= 'a' && url[0] <= 'z') || (url[0] >= 'A' && url[0] <= 'Z')))
    return false;
  size_t i = 1;
  while (i < url.size()) {
    char c = url[i];
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
        c == '+' || c == '-' || c == '.') {
      ++i;
    } else {
      break;
    }
  }
  if (i < url.size() && url[i] == ':' && url.substr(i + 1, 2) == "//") {
    scheme_end = i;
    return true;
  }
  return false;
}

}  // namespace detail

/**
 * Splits a URL into scheme, authority, path segments, query string and
 * fragment without decoding anything. A scheme is only recognized when
 * followed by "//"; otherwise the authority is taken to start at the first
 * byte (archived capture URLs always carry a scheme, but URL prefixes like
 * "example.org/search" do not).
 *
 * Throws UrlError when no authority (host) can be found.
 */
inline UrlComponents split_url(std::string_view url) {
  UrlComponents c;
  size_t pos = 0;
  size_t scheme_end = 0;
  if (detail::has_scheme_prefix(url, scheme_end)) {
    c.scheme = std::string(url.substr(0, scheme_end));
    pos = scheme_end + 3;
  } else if (url.size() >= 2 && url[0] == '/' && url[1] == '/') {
    c.scheme_relative = true;
    pos = 2;
  }
  size_t auth_end = url.find_first_of("/?#", pos);
  if (auth_end == std::string_view::npos) auth_end = url.size();
  c.authority = std::string(url.substr(pos, auth_end - pos));
  {
    UrlComponents probe;
    probe.authority = c.authority;
    if (probe.host().empty())
      throw UrlError("no recognizable authority in URL: " + std::string(url));
  }
  pos = auth_end;
  if (pos < url.size() && url[pos] == '/') {
    size_t path_end = url.find_first_of("?#", pos);
    if (path_end == std::string_view::npos) path_end = url.size();
    // Leading '/' consumed; the rest splits on '/' keeping empty segments.
    c.path = split(url.substr(pos + 1, path_end - pos - 1), '/');
    pos = path_end;
  }
  if (pos < url.size() && url[pos] == '?') {
    size_t q_end = url.find('#', pos);
    if (q_end == std::string_view::npos) q_end = url.size();
    c.query_string = std::string(url.substr(pos + 1, q_end - pos - 1));
    pos = q_end;
  }
  if (pos < url.size() && url[pos] == '#') {
    c.fragment = std::string(url.substr(pos + 1));
  }
  return c;
}

/// Splits a raw query string on '&', then each pair on the first '='. Pairs
/// without '=' yield an empty value. Nothing is decoded.
inline std::vector<std::pair<std::string_view, std::string_view>> parse_query_pairs(
    std::string_view qs) {
  std::vector<std::pair<std::string_view, std::string_view>> out;
  size_t start = 0;
  for (size_t i = 0; i <= qs.size(); ++i) {
    if (i == qs.size() || qs[i] == '&') {
      std::string_view pair = qs.substr(start, i - start);
      size_t eq = pair.find('=');
      if (eq == std::string_view::npos)
        out.emplace_back(pair, std::string_view{});
      else
        out.emplace_back(pair.substr(0, eq), pair.substr(eq + 1));
      start = i + 1;
    }
  }
  return out;
}

/**
 * Lenient percent-decoding: "%41" decodes to 'A', malformed escapes (short
 * or non-hex) pass through literally. With `plus_to_space`, '+' decodes to
 * a space first (form encoding).
 */
inline std::string percent_decode_lenient(std::string_view in, bool plus_to_space) {
  std::string out;
  out.reserve(in.size());
  for (size_t i = 0; i < in.size(); ++i) {
    char ch = in[i];
    if (ch == '+' && plus_to_space) {
      out += ' ';
    } else if (ch == '%' && i + 2 < in.size() && hex_digit(in[i + 1]) >= 0 &&
               hex_digit(in[i + 2]) >= 0) {
      out += static_cast<char>(hex_digit(in[i + 1]) * 16 + hex_digit(in[i + 2]));
      i += 2;
    } else {
      out += ch;
    }
  }
  return out;
}

/// Percent-encodes everything outside unreserved characters. With
/// `space_as_plus`, a space becomes '+' (form encoding).
inline std::string percent_encode(std::string_view in, bool space_as_plus) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(in.size());
  for (char ch : in) {
    unsigned char c = static_cast<unsigned char>(ch);
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
        c == '-' || c == '_' || c == '.' || c == '~') {
      out += ch;
    } else if (ch == ' ' && space_as_plus) {
      out += '+';
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

namespace detail {

inline std::vector<std::string> remove_dot_segments(std::vector<std::string> segs,
                                                    bool keep_trailing_empty) {
  std::vector<std::string> out;
  for (size_t i = 0; i < segs.size(); ++i) {
    const std::string& s = segs[i];
    bool last = i + 1 == segs.size();
    if (s == ".") {
      if (last && keep_trailing_empty) out.emplace_back("");
    } else if (s == "..") {
      if (!out.empty()) out.pop_back();
      if (last && keep_trailing_empty) out.emplace_back("");
    } else {
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace detail

/**
 * Resolves `ref` against an absolute `base` URL (RFC 3986 §5 merge with
 * dot-segment removal). Handles absolute refs, scheme-relative, absolute
 * paths, relative paths, and "?query" / "#frag" only forms.
 */
inline std::string url_resolve(std::string_view base, std::string_view ref) {
  if (ref.empty()) return std::string(base);
  size_t scheme_end = 0;
  if (detail::has_scheme_prefix(ref, scheme_end)) return std::string(ref);
  UrlComponents b = split_url(base);
  b.fragment.reset();
  if (ref[0] == '#') {
    b.fragment = std::string(ref.substr(1));
    return b.assemble();
  }
  if (ref.size() >= 2 && ref[0] == '/' && ref[1] == '/') {
    UrlComponents r = split_url(ref);
    r.scheme = b.scheme;
    r.scheme_relative = !b.scheme.has_value();
    return r.assemble();
  }
  if (ref[0] == '?') {
    size_t frag = ref.find('#');
    b.query_string = std::string(ref.substr(1, frag == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : frag - 1));
    if (frag != std::string_view::npos) b.fragment = std::string(ref.substr(frag + 1));
    return b.assemble();
  }
  // Path reference: split off query/fragment first.
  std::string_view path_part = ref;
  std::optional<std::string> query, fragment;
  if (auto h = path_part.find('#'); h != std::string_view::npos) {
    fragment = std::string(path_part.substr(h + 1));
    path_part = path_part.substr(0, h);
  }
  if (auto q = path_part.find('?'); q != std::string_view::npos) {
    query = std::string(path_part.substr(q + 1));
    path_part = path_part.substr(0, q);
  }
  std::vector<std::string> segs;
  if (!path_part.empty() && path_part[0] == '/') {
    segs = split(path_part.substr(1), '/');
  } else {
    segs = b.path;
    if (!segs.empty()) segs.pop_back();  // drop the base's last segment
    for (auto& s : split(path_part, '/')) segs.push_back(std::move(s));
  }
  bool trailing_dot = !path_part.empty() &&
                      (path_part.back() == '/' || path_part == "." || path_part == ".." ||
                       path_part.ends_with("/.") || path_part.ends_with("/.."));
  b.path = detail::remove_dot_segments(std::move(segs), trailing_dot);
  if (b.path.empty()) b.path.emplace_back("");  // authority followed by '/'
  b.query_string = std::move(query);
  b.fragment = std::move(fragment);
  return b.assemble();
}

}  // namespace aqm
