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

#include "ssc/header.h"

#include <string>

#include "ssc/bytes.h"
#include "ssc/status.h"

namespace ssc {
namespace {

constexpr uint8_t kMagic[4] = {'S', 'S', 'C', '1'};
constexpr uint8_t kKnownFlags = kFlagTransform | kFlagCr | kFlagRs;

void CheckConsistent(uint8_t flags, TransformKind kind) {
  if (flags & ~kKnownFlags) Fail(ErrorCode::kFormat, "header: unknown flag bits");
  const bool has_transform = kind != TransformKind::kIdentity;
  if (has_transform != static_cast<bool>(flags & kFlagTransform)) {
    Fail(ErrorCode::kFormat, "header: transform flag disagrees with kind");
  }
}

}  // namespace

std::vector<uint8_t> SerializeHeader(const SandwichHeader& h) {
  CheckConsistent(h.flags, h.side_info.kind);
  ByteWriter w;
  w.Bytes(kMagic);
  w.U8(h.version);
  w.U8(h.flags);
  w.U8(static_cast<uint8_t>(h.side_info.kind));
  w.Bytes(EncodeSideInfoPayload(h.side_info));
  return w.Take();
}

SandwichHeader ParseHeader(std::span<const uint8_t> bytes, size_t* consumed) {
  ByteReader r(bytes);
  for (uint8_t m : kMagic) {
    if (r.U8() != m) Fail(ErrorCode::kFormat, "header: bad magic");
  }
  SandwichHeader h;
  h.version = r.U8();
  if (h.version != kHeaderVersion) {
    Fail(ErrorCode::kVersion,
         "header: unsupported version " + std::to_string(h.version));
  }
  h.flags = r.U8();
  const uint8_t kind = r.U8();
  if (kind > static_cast<uint8_t>(TransformKind::kPcaQuantize)) {
    Fail(ErrorCode::kFormat, "header: unknown transform kind " + std::to_string(kind));
  }
  CheckConsistent(h.flags, static_cast<TransformKind>(kind));
  size_t used = 0;
  h.side_info = DecodeSideInfoPayload(static_cast<TransformKind>(kind),
                                      bytes.subspan(r.pos()), &used);
  if (consumed) *consumed = r.pos() + used;
  return h;
}

}  // namespace ssc
