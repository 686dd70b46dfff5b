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
#include <stdexcept>
#include <string>
#include <string_view>

#include "aqm/url.hpp"

namespace aqm {

namespace detail {

inline bool is_leap_year(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

inline int days_in_month(int y, int m) {
  static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap_year(y)) return 29;
  return kDays[m - 1];
}

// Howard Hinnant's days-from-civil; valid for all Gregorian dates.
inline int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

}  // namespace detail

/// True iff `ts` is exactly 14 ASCII digits forming a valid UTC instant
/// (YYYYMMDDhhmmss).
inline bool is_valid_timestamp14(std::string_view ts) {
  if (ts.size() != 14) return false;
  for (char c : ts)
    if (c < '0' || c > '9') return false;
  auto num = [&](size_t pos, size_t len) {
    int v = 0;
    for (size_t i = pos; i < pos + len; ++i) v = v * 10 + (ts[i] - '0');
    return v;
  };
  int year = num(0, 4), month = num(4, 2), day = num(6, 2);
  int hour = num(8, 2), minute = num(10, 2), second = num(12, 2);
  if (month < 1 || month > 12) return false;
  if (day < 1 || day > detail::days_in_month(year, month)) return false;
  return hour < 24 && minute < 60 && second < 60;
}

/// Seconds since the Unix epoch for a valid 14-digit UTC timestamp.
inline int64_t timestamp14_to_unix(std::string_view ts) {
  auto num = [&](size_t pos, size_t len) {
    int v = 0;
    for (size_t i = pos; i < pos + len; ++i) v = v * 10 + (ts[i] - '0');
    return v;
  };
  int64_t days = detail::days_from_civil(num(0, 4), num(4, 2), num(6, 2));
  return days * 86400 + num(8, 2) * 3600 + num(10, 2) * 60 + num(12, 2);
}

/// "20200301120000" -> "2020-03-01T12:00:00Z" (the WARC-Date rendering).
inline std::string timestamp14_to_iso8601(std::string_view ts) {
  std::string out;
  out.reserve(20);
  out.append(ts.substr(0, 4));
  out += '-';
  out.append(ts.substr(4, 2));
  out += '-';
  out.append(ts.substr(6, 2));
  out += 'T';
  out.append(ts.substr(8, 2));
  out += ':';
  out.append(ts.substr(10, 2));
  out += ':';
  out.append(ts.substr(12, 2));
  out += 'Z';
  return out;
}

/// Inverse of timestamp14_to_iso8601; empty string when the input does not
/// have that exact shape.
inline std::string iso8601_to_timestamp14(std::string_view iso) {
  if (iso.size() != 20 || iso[4] != '-' || iso[7] != '-' || iso[10] != 'T' ||
      iso[13] != ':' || iso[16] != ':' || iso[19] != 'Z')
    return {};
  std::string out;
  out.reserve(14);
  out.append(iso.substr(0, 4));
  out.append(iso.substr(5, 2));
  out.append(iso.substr(8, 2));
  out.append(iso.substr(11, 2));
  out.append(iso.substr(14, 2));
  out.append(iso.substr(17, 2));
  return is_valid_timestamp14(out) ? out : std::string{};
}

/// One archived observation of a URL in the web archive.
struct Capture {
  std::string url;
  std::string timestamp;  // 14-digit YYYYMMDDhhmmss, UTC
  int status = 0;
  std::string mime;
  std::string digest;

  void validate() const {
    if (!is_valid_timestamp14(timestamp))
      throw std::invalid_argument("capture timestamp is not a valid 14-digit UTC instant: " +
                                  timestamp);
    if (url.empty() || split_url(url).host().empty())
      throw std::invalid_argument("capture URL has no host: " + url);
  }

  bool operator==(const Capture&) const = default;
};

/// Keeps exactly the successful HTML captures: status 200 and a MIME type
/// of "text/html" (optionally with parameters).
inline bool is_serp_candidate(const Capture& c) {
  return c.status == 200 &&
         (c.mime == "text/html" || c.mime.starts_with("text/html;"));
}

}  // namespace aqm
