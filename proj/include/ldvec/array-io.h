// ldvec/array-io.h

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

#ifndef LDVEC_ARRAY_IO_H_
#define LDVEC_ARRAY_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ldvec/error.h"

namespace ldvec {

// On-disk layout of a .ldiv file, all integers little-endian:
//
//   "LDIV"  u32 version=1  u8 dtype=1 (binary64)  u8 rank
//   rank x u64 dims
//   prod(dims) x binary64, row-major
inline constexpr char kArrayMagic[4] = {'L', 'D', 'I', 'V'};
inline constexpr std::uint32_t kArrayVersion = 1;
inline constexpr std::uint8_t kDtypeFloat64 = 1;

/// Dense row-major array of doubles with arbitrary rank.
struct Array {
  std::vector<std::uint64_t> dims;
  std::vector<double> values;

  Array() = default;
  Array(std::vector<std::uint64_t> d, std::vector<double> v);

  std::size_t rank() const { return dims.size(); }
  std::size_t size() const { return values.size(); }

  bool operator==(const Array &other) const = default;
};

/// Bitwise equality; distinguishes -0.0 from 0.0 and compares NaN payloads.
bool BitwiseEqual(const Array &a, const Array &b);

void WriteArray(const std::filesystem::path &path, const Array &array);
Array ReadArray(const std::filesystem::path &path);

std::vector<unsigned char> EncodeArray(const Array &array);
Array DecodeArray(std::span<const unsigned char> bytes);

// Conversions to/from Eigen. Row-major order is preserved regardless of the
// Eigen storage order.
Array ToArray(const Eigen::MatrixXd &m);
Array ToArray(const Eigen::VectorXd &v);
/// Stacks equally-shaped matrices into a rank-3 array (count x rows x cols).
Array ToArray(const std::vector<Eigen::MatrixXd> &ms);

Eigen::MatrixXd ToMatrix(const Array &array);
Eigen::VectorXd ToVector(const Array &array);
std::vector<Eigen::MatrixXd> ToMatrixStack(const Array &array);

}  // namespace ldvec

#endif  // LDVEC_ARRAY_IO_H_
