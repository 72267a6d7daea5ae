// Copyright 2026 The SSC Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Per-image signalling for the modules around the codec.
//
//   offset 0  "SSC1"
//   offset 4  u8 version (1)
//   offset 5  u8 flags: bit0 transform, bit1 CR, bit2 RS
//   offset 6  u8 transform kind
//   offset 7  side-info payload (see EncodeSideInfoPayload)
//
// All multi-byte fields are little-endian.

#ifndef SSC_HEADER_H_
#define SSC_HEADER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ssc/lintrans.h"

namespace ssc {

inline constexpr uint8_t kHeaderVersion = 1;
inline constexpr size_t kHeaderPrefixBytes = 7;
inline constexpr uint8_t kFlagTransform = 1 << 0;
inline constexpr uint8_t kFlagCr = 1 << 1;
inline constexpr uint8_t kFlagRs = 1 << 2;

struct SandwichHeader {
  uint8_t version = kHeaderVersion;
  uint8_t flags = 0;
  SideInfo side_info;

  bool transform_on() const { return flags & kFlagTransform; }
  bool cr_on() const { return flags & kFlagCr; }
  bool rs_on() const { return flags & kFlagRs; }

  bool operator==(const SandwichHeader&) const = default;
};

std::vector<uint8_t> SerializeHeader(const SandwichHeader& h);
// Throws kFormat (bad magic, truncation, unknown kind, inconsistent flags)
// or kVersion.
SandwichHeader ParseHeader(std::span<const uint8_t> bytes,
                           size_t* consumed = nullptr);

}  // namespace ssc

#endif  // SSC_HEADER_H_
