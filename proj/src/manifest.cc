// ldvec/manifest.cc

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

#include "ldvec/manifest.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace ldvec {

namespace {

const std::string kArrayPrefix = "array.";

std::string Trim(const std::string &s) {
  const char *ws = " \t\r\n";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool HasSpace(const std::string &s) {
  return s.find_first_of(" \t\r\n") != std::string::npos;
}

}  // namespace

void ValidateLabels(const std::vector<std::string> &labels) {
  std::set<std::string> seen;
  for (const std::string &label : labels) {
    Require(!label.empty(), ErrorCode::kInvalidLabels, "empty language label");
    Require(!HasSpace(label), ErrorCode::kInvalidLabels,
            "label contains whitespace: '" + label + "'");
    Require(seen.insert(label).second, ErrorCode::kInvalidLabels,
            "duplicate language label: " + label);
  }
}

Manifest::Manifest(std::string kind) : kind_(std::move(kind)) {}

Manifest Manifest::Load(const std::filesystem::path &path) {
  std::ifstream is(path);
  Require(static_cast<bool>(is), ErrorCode::kIo, "cannot open manifest: " + path.string());
  Manifest m;
  m.base_dir_ = path.parent_path();
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    Require(eq != std::string::npos, ErrorCode::kManifestParse,
            path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = Trim(t.substr(0, eq));
    std::string value = Trim(t.substr(eq + 1));
    Require(!key.empty() && !HasSpace(key), ErrorCode::kManifestParse,
            path.string() + ":" + std::to_string(lineno) + ": bad key");
    if (key == "kind") {
      Require(m.kind_.empty(), ErrorCode::kManifestParse, "duplicate kind");
      m.kind_ = value;
      continue;
    }
    Require(m.entries_.emplace(key, value).second, ErrorCode::kManifestParse,
            path.string() + ": duplicate key " + key);
  }
  Require(!m.kind_.empty(), ErrorCode::kManifestParse, path.string() + ": missing kind");
  if (m.Has("labels")) ValidateLabels(m.Labels());
  return m;
}

void Manifest::Save(const std::filesystem::path &path) const {
  Require(!kind_.empty(), ErrorCode::kManifestParse, "manifest kind unset");
  std::ofstream os(path, std::ios::trunc);
  Require(static_cast<bool>(os), ErrorCode::kIo, "cannot write manifest: " + path.string());
  os << "# ldvec manifest\n";
  os << "kind = " << kind_ << "\n";
  for (const auto &[key, value] : entries_) os << key << " = " << value << "\n";
  Require(static_cast<bool>(os), ErrorCode::kIo, "write failed: " + path.string());
}

void Manifest::ExpectKind(const std::string &expected) const {
  Require(kind_ == expected, ErrorCode::kManifestParse,
          "expected manifest kind '" + expected + "', got '" + kind_ + "'");
}

bool Manifest::Has(const std::string &key) const { return entries_.count(key) > 0; }

const std::string &Manifest::Get(const std::string &key) const {
  auto it = entries_.find(key);
  Require(it != entries_.end(), ErrorCode::kManifestParse, "missing key " + key);
  return it->second;
}

std::int64_t Manifest::GetInt(const std::string &key) const {
  const std::string &s = Get(key);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  Require(ec == std::errc() && ptr == s.data() + s.size(), ErrorCode::kManifestParse,
          "key " + key + " is not an integer: " + s);
  return v;
}

double Manifest::GetDouble(const std::string &key) const {
  const std::string &s = Get(key);
  std::istringstream is(s);
  double v = 0;
  is >> v;
  Require(!is.fail() && is.eof(), ErrorCode::kManifestParse,
          "key " + key + " is not a number: " + s);
  return v;
}

void Manifest::Set(const std::string &key, const std::string &value) {
  Require(!key.empty() && !HasSpace(key) && key != "kind", ErrorCode::kManifestParse,
          "bad manifest key: " + key);
  Require(value.find('\n') == std::string::npos, ErrorCode::kManifestParse,
          "manifest value spans lines");
  entries_[key] = Trim(value);
}

void Manifest::SetInt(const std::string &key, std::int64_t value) {
  Set(key, std::to_string(value));
}

std::vector<std::string> Manifest::Labels() const {
  std::vector<std::string> labels;
  if (!Has("labels")) return labels;
  std::istringstream is(Get("labels"));
  std::string label;
  while (is >> label) labels.push_back(label);
  return labels;
}

void Manifest::SetLabels(const std::vector<std::string> &labels) {
  ValidateLabels(labels);
  std::string joined;
  for (const std::string &label : labels) {
    if (!joined.empty()) joined += ' ';
    joined += label;
  }
  Set("labels", joined);
}

std::vector<std::string> Manifest::ArrayNames() const {
  std::vector<std::string> names;
  for (const auto &[key, value] : entries_)
    if (key.rfind(kArrayPrefix, 0) == 0) names.push_back(key.substr(kArrayPrefix.size()));
  return names;
}

bool Manifest::HasArray(const std::string &name) const {
  return Has(kArrayPrefix + name);
}

void Manifest::PutArray(const std::filesystem::path &manifest_path,
                        const std::string &name, const Array &array,
                        const std::string &subdir) {
  std::filesystem::path dir = manifest_path.parent_path();
  std::filesystem::path rel =
      std::filesystem::path(subdir) /
      (manifest_path.stem().string() + "." + name + kArrayExtension);
  if (!subdir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir / subdir, ec);
    Require(!ec, ErrorCode::kIo, "cannot create " + (dir / subdir).string());
  }
  WriteArray(dir / rel, array);
  Set(kArrayPrefix + name, rel.generic_string());
}

Array Manifest::GetArray(const std::string &name,
                         const std::vector<std::uint64_t> &dims) const {
  std::filesystem::path path = base_dir_ / Get(kArrayPrefix + name);
  Require(std::filesystem::exists(path), ErrorCode::kIo,
          "referenced array missing: " + path.string());
  Array array = ReadArray(path);
  if (!dims.empty() && array.dims != dims) {
    auto fmt = [](const std::vector<std::uint64_t> &d) {
      std::string s;
      for (std::size_t k = 0; k < d.size(); ++k)
        s += (k ? "x" : "") + std::to_string(d[k]);
      return s;
    };
    Fail(ErrorCode::kDimensionMismatch, "array " + name + " has dims " +
                                            fmt(array.dims) + ", manifest declares " +
                                            fmt(dims));
  }
  return array;
}

}  // namespace ldvec
