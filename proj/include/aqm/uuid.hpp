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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "aqm/digest.hpp"

namespace aqm {

/**
 * Name-based (version 5, SHA-1) UUID per RFC 4122: the namespace bytes and
 * the name are hashed, the version nibble is set to 5 and the variant bits
 * to 10. Equal inputs produce equal UUIDs across processes and runs.
 */
struct Uuid {
  std::array<uint8_t, 16> bytes{};

  std::string str() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(36);
    for (size_t i = 0; i < 16; ++i) {
      if (i == 4 || i == 6 || i == 8 || i == 10) out += '-';
      out += digits[bytes[i] >> 4];
      out += digits[bytes[i] & 0xF];
    }
    return out;
  }

  int version() const { return bytes[6] >> 4; }
  // Top two bits of octet 8; RFC 4122 variant is 0b10.
  int variant_bits() const { return bytes[8] >> 6; }

  bool operator==(const Uuid&) const = default;
};

/// The predefined URL namespace, 6ba7b811-9dad-11d1-80b4-00c04fd430c8.
inline constexpr std::array<uint8_t, 16> kUuidUrlNamespace = {
    0x6b, 0xa7, 0xb8, 0x11, 0x9d, 0xad, 0x11, 0xd1,
    0x80, 0xb4, 0x00, 0xc0, 0x4f, 0xd4, 0x30, 0xc8};

inline Uuid uuid5(const std::array<uint8_t, 16>& ns, std::string_view name) {
  std::string material(reinterpret_cast<const char*>(ns.data()), ns.size());
  material.append(name);
  auto hash = sha1_bytes(material);
  Uuid u;
  for (size_t i = 0; i < 16; ++i) u.bytes[i] = hash[i];
  u.bytes[6] = static_cast<uint8_t>((u.bytes[6] & 0x0F) | 0x50);
  u.bytes[8] = static_cast<uint8_t>((u.bytes[8] & 0x3F) | 0x80);
  return u;
}

inline Uuid uuid5_url(std::string_view name) { return uuid5(kUuidUrlNamespace, name); }

}  // namespace aqm
