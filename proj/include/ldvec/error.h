// ldvec/error.h

// Copyright 2026 The ldvec Authors
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

#ifndef LDVEC_ERROR_H_
#define LDVEC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ldvec {

enum class ErrorCode {
  kIo,
  kBadMagic,
  kUnsupportedVersion,
  kUnsupportedDtype,
  kTruncated,
  kZeroDimension,
  kManifestParse,
  kDimensionMismatch,
  kInvalidWeights,
  kInvalidLabels,
  kNotPositiveDefinite,
  kNotSymmetric,
  kNegativeCount,
  kNonFinite,
  kShapeMismatch,
  kLabelOutOfRange,
  kMissingLabel,
  kEmptyClass,
  kInvalidArgument,
  kBoundDecrease,
};

std::string_view ErrorCodeName(ErrorCode code);

/// Every failure in the library is reported as an Error carrying a code, so
/// callers (the CLI in particular) can map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string &what) {
  throw Error(code, what);
}

inline void Require(bool cond, ErrorCode code, const std::string &what) {
  if (!cond) Fail(code, what);
}

}  // namespace ldvec

#endif  // LDVEC_ERROR_H_
