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

#ifndef SSC_STATUS_H_
#define SSC_STATUS_H_

#include <stdexcept>
#include <string>

namespace ssc {

enum class ErrorCode {
  kInvalidArgument,
  kDimension,
  kIo,
  kFormat,
  kVersion,
  kProtocol,
  kUnsupported,
  kDivergence,
  kEmpty,
};

const char* ErrorCodeName(ErrorCode code);

// Single exception type for the library; the code tells callers (mainly the
// CLI) how to map a failure to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

#define SSC_CHECK_ARG(cond, msg)                                 \
  do {                                                           \
    if (!(cond)) ::ssc::Fail(::ssc::ErrorCode::kInvalidArgument, \
                             std::string(msg));                  \
  } while (0)

}  // namespace ssc

#endif  // SSC_STATUS_H_
