// ldvec/array-io.cc

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

#include "ldvec/array-io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>

namespace ldvec {

namespace {

static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559,
              "binary64 doubles required");

template <typename U>
void PutLe(std::vector<unsigned char> *out, U value) {
  for (std::size_t k = 0; k < sizeof(U); ++k)
    out->push_back(static_cast<unsigned char>((value >> (8 * k)) & 0xff));
}

template <typename U>
U GetLe(const unsigned char *p) {
  U value = 0;
  for (std::size_t k = 0; k < sizeof(U); ++k)
    value |= static_cast<U>(p[k]) << (8 * k);
  return value;
}

std::uint64_t Product(const std::vector<std::uint64_t> &dims) {
  std::uint64_t total = 1;
  for (std::uint64_t d : dims) {
    if (d != 0 && total > std::numeric_limits<std::uint64_t>::max() / d)
      Fail(ErrorCode::kShapeMismatch, "array size overflows");
    total *= d;
  }
  return total;
}

void CheckShape(const Array &array) {
  Require(!array.dims.empty(), ErrorCode::kZeroDimension, "rank must be >= 1");
  Require(array.dims.size() <= 255, ErrorCode::kShapeMismatch,
          "rank must fit in one byte");
  for (std::uint64_t d : array.dims)
    Require(d >= 1, ErrorCode::kZeroDimension, "every dimension must be >= 1");
  Require(Product(array.dims) == array.values.size(), ErrorCode::kShapeMismatch,
          "value count does not match dims");
}

}  // namespace

Array::Array(std::vector<std::uint64_t> d, std::vector<double> v)
    : dims(std::move(d)), values(std::move(v)) {}

bool BitwiseEqual(const Array &a, const Array &b) {
  if (a.dims != b.dims || a.values.size() != b.values.size()) return false;
  return a.values.empty() ||
         std::memcmp(a.values.data(), b.values.data(),
                     a.values.size() * sizeof(double)) == 0;
}

std::vector<unsigned char> EncodeArray(const Array &array) {
  CheckShape(array);
  std::vector<unsigned char> out;
  out.reserve(10 + 8 * array.dims.size() + 8 * array.values.size());
  out.insert(out.end(), std::begin(kArrayMagic), std::end(kArrayMagic));
  PutLe<std::uint32_t>(&out, kArrayVersion);
  out.push_back(kDtypeFloat64);
  out.push_back(static_cast<unsigned char>(array.dims.size()));
  for (std::uint64_t d : array.dims) PutLe<std::uint64_t>(&out, d);
  for (double v : array.values) PutLe<std::uint64_t>(&out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Array DecodeArray(std::span<const unsigned char> bytes) {
  constexpr std::size_t kFixed = 10;
  Require(bytes.size() >= 4, ErrorCode::kTruncated, "file shorter than magic");
  Require(std::memcmp(bytes.data(), kArrayMagic, 4) == 0, ErrorCode::kBadMagic,
          "expected LDIV magic");
  Require(bytes.size() >= kFixed, ErrorCode::kTruncated, "header truncated");
  std::uint32_t version = GetLe<std::uint32_t>(bytes.data() + 4);
  Require(version == kArrayVersion, ErrorCode::kUnsupportedVersion,
          "version " + std::to_string(version));
  Require(bytes[8] == kDtypeFloat64, ErrorCode::kUnsupportedDtype,
          "dtype " + std::to_string(bytes[8]));
  std::size_t rank = bytes[9];
  Require(rank >= 1, ErrorCode::kZeroDimension, "rank 0");
  Require(bytes.size() >= kFixed + 8 * rank, ErrorCode::kTruncated,
          "dims truncated");

  Array array;
  array.dims.resize(rank);
  for (std::size_t k = 0; k < rank; ++k) {
    array.dims[k] = GetLe<std::uint64_t>(bytes.data() + kFixed + 8 * k);
    Require(array.dims[k] >= 1, ErrorCode::kZeroDimension, "zero dimension");
  }
  std::uint64_t count = Product(array.dims);
  std::size_t offset = kFixed + 8 * rank;
  Require(count <= (bytes.size() - offset) / 8 &&
              bytes.size() - offset >= 8 * count,
          ErrorCode::kTruncated, "payload truncated");
  Require(bytes.size() - offset == 8 * count, ErrorCode::kShapeMismatch,
          "trailing bytes after payload");
  array.values.resize(count);
  for (std::uint64_t k = 0; k < count; ++k)
    array.values[k] = std::bit_cast<double>(
        GetLe<std::uint64_t>(bytes.data() + offset + 8 * k));
  return array;
}

void WriteArray(const std::filesystem::path &path, const Array &array) {
  std::vector<unsigned char> bytes = EncodeArray(array);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  Require(static_cast<bool>(os), ErrorCode::kIo,
          "cannot open for writing: " + path.string());
  os.write(reinterpret_cast<const char *>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  Require(static_cast<bool>(os), ErrorCode::kIo, "write failed: " + path.string());
}

Array ReadArray(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  Require(static_cast<bool>(is), ErrorCode::kIo,
          "cannot open for reading: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  try {
    return DecodeArray(bytes);
  } catch (const Error &e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

Array ToArray(const Eigen::MatrixXd &m) {
  Array array;
  array.dims = {static_cast<std::uint64_t>(m.rows()),
                static_cast<std::uint64_t>(m.cols())};
  array.values.resize(m.size());
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) array.values[k++] = m(r, c);
  return array;
}

Array ToArray(const Eigen::VectorXd &v) {
  return Array({static_cast<std::uint64_t>(v.size())},
               std::vector<double>(v.data(), v.data() + v.size()));
}

Array ToArray(const std::vector<Eigen::MatrixXd> &ms) {
  Require(!ms.empty(), ErrorCode::kZeroDimension, "empty matrix stack");
  Array array;
  array.dims = {ms.size(), static_cast<std::uint64_t>(ms[0].rows()),
                static_cast<std::uint64_t>(ms[0].cols())};
  array.values.reserve(ms.size() * ms[0].size());
  for (const Eigen::MatrixXd &m : ms) {
    Require(m.rows() == ms[0].rows() && m.cols() == ms[0].cols(),
            ErrorCode::kShapeMismatch, "ragged matrix stack");
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) array.values.push_back(m(r, c));
  }
  return array;
}

Eigen::MatrixXd ToMatrix(const Array &array) {
  Require(array.rank() == 2, ErrorCode::kShapeMismatch, "expected a rank-2 array");
  Eigen::MatrixXd m(array.dims[0], array.dims[1]);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = array.values[k++];
  return m;
}

Eigen::VectorXd ToVector(const Array &array) {
  Require(array.rank() == 1, ErrorCode::kShapeMismatch, "expected a rank-1 array");
  return Eigen::Map<const Eigen::VectorXd>(array.values.data(),
                                           static_cast<Eigen::Index>(array.size()));
}

std::vector<Eigen::MatrixXd> ToMatrixStack(const Array &array) {
  Require(array.rank() == 3, ErrorCode::kShapeMismatch, "expected a rank-3 array");
  std::vector<Eigen::MatrixXd> out(array.dims[0],
                                   Eigen::MatrixXd(array.dims[1], array.dims[2]));
  std::size_t k = 0;
  for (Eigen::MatrixXd &m : out)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = array.values[k++];
  return out;
}

}  // namespace ldvec
