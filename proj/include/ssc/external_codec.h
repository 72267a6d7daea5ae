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

// Black-box codec behind a pipe. The child is started as
//   <cmd...> --quality <q>
// reads one binary PPM (P6) on stdin and must answer on stdout with an
// 8-byte little-endian coded size in bytes followed by one P6 PPM of the same
// dimensions. A nonzero exit status is a failure.

#ifndef SSC_EXTERNAL_CODEC_H_
#define SSC_EXTERNAL_CODEC_H_

#include <string>
#include <vector>

#include "ssc/image.h"
#include "ssc/proxy_codec.h"

namespace ssc {

struct ExternalCodecOptions {
  double timeout_seconds = 60.0;
  // Upper bound on children running at once across all threads.
  int max_concurrent = 4;
};

// Splits a command template on whitespace; no shell is involved.
std::vector<std::string> SplitCommand(const std::string& cmd);

// Throws Error(kProtocol) for malformed replies, nonzero exits or timeouts;
// the message carries the child's stderr tail.
CodecResult ExternalCode(const ImageRGB& img, const std::string& adapter,
                         int quality, const ExternalCodecOptions& opts = {});

// Adjusts the process-wide limit on concurrent children.
void SetExternalCodecConcurrency(int max_children);

}  // namespace ssc

#endif  // SSC_EXTERNAL_CODEC_H_
