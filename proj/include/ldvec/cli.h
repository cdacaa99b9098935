// ldvec/cli.h

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

#ifndef LDVEC_CLI_H_
#define LDVEC_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "ldvec/error.h"

namespace ldvec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Exit status for a library error: 1 for I/O and runtime invariant
/// failures, 2 for invalid or inconsistent input.
int ExitCodeFor(ErrorCode code);

/// Runs one `ldvec` invocation. `args` excludes the program name. Data goes
/// to files, the eval report to `out`, logs and diagnostics to `err`.
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace ldvec

#endif  // LDVEC_CLI_H_
