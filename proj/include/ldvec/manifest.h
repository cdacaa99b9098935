// ldvec/manifest.h

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

#ifndef LDVEC_MANIFEST_H_
#define LDVEC_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldvec/array-io.h"

namespace ldvec {

inline constexpr const char *kManifestExtension = ".manifest";
inline constexpr const char *kArrayExtension = ".ldiv";

/// Text manifest tying .ldiv payloads into a model or dataset.
///
/// One `key = value` pair per line; blank lines and lines starting with '#'
/// are ignored and key order does not matter. Reserved keys:
///
///   kind     one of ubm, tmatrix, backend, stats, ivectors, scores,
///            features, truth
///   D R Nc L S
///            dimensions (positive integers)
///   labels   whitespace-separated language names
///   array.<name>
///            path of an .ldiv payload, relative to the manifest directory
///
/// Files are written with keys sorted so output is byte-stable.
class Manifest {
 public:
  Manifest() = default;
  explicit Manifest(std::string kind);

  static Manifest Load(const std::filesystem::path &path);
  /// Writes the text file only; payloads are written by PutArray.
  void Save(const std::filesystem::path &path) const;

  const std::string &kind() const { return kind_; }
  /// Throws kManifestParse unless kind() == expected.
  void ExpectKind(const std::string &expected) const;

  bool Has(const std::string &key) const;
  const std::string &Get(const std::string &key) const;
  std::int64_t GetInt(const std::string &key) const;
  double GetDouble(const std::string &key) const;
  void Set(const std::string &key, const std::string &value);
  void SetInt(const std::string &key, std::int64_t value);

  std::vector<std::string> Labels() const;
  /// Labels must be unique, nonempty and free of whitespace.
  void SetLabels(const std::vector<std::string> &labels);

  std::vector<std::string> ArrayNames() const;
  bool HasArray(const std::string &name) const;

  /// Writes `array` next to `manifest_path` (optionally in `subdir`) as
  /// <stem>.<name>.ldiv and records the relative path.
  void PutArray(const std::filesystem::path &manifest_path, const std::string &name,
                const Array &array, const std::string &subdir = "");

  /// Reads a referenced payload and checks its dims. An empty `dims` skips
  /// the check.
  Array GetArray(const std::string &name,
                 const std::vector<std::uint64_t> &dims = {}) const;

  const std::filesystem::path &base_dir() const { return base_dir_; }

 private:
  std::string kind_;
  std::map<std::string, std::string> entries_;
  std::filesystem::path base_dir_;
};

void ValidateLabels(const std::vector<std::string> &labels);

}  // namespace ldvec

#endif  // LDVEC_MANIFEST_H_
