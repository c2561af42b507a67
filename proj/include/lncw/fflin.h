// Copyright 2026 The Authors.
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

// Exact arithmetic and dense linear algebra over prime fields F_p.

#ifndef LNCW_FFLIN_H_
#define LNCW_FFLIN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace lncw {

using Residue = uint32_t;

// Largest prime below 2^16. Products of two residues then fit in 32 bits.
inline constexpr uint32_t kMaxModulus = 65521;

// Thrown when an enumeration or search would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, uint64_t required)
      : std::runtime_error(what), required_(required) {}
  uint64_t required() const { return required_; }

 private:
  uint64_t required_;
};

// The prime field F_p, 2 <= p <= 65521.
class Fq {
 public:
  // Throws std::invalid_argument unless `modulus` is a prime in range.
  explicit Fq(uint32_t modulus);

  uint32_t modulus() const { return p_; }

  Residue Add(Residue a, Residue b) const {
    uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue Sub(Residue a, Residue b) const { return a >= b ? a - b : a + p_ - b; }
  Residue Neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
  Residue Mul(Residue a, Residue b) const {
    return static_cast<Residue>((static_cast<uint64_t>(a) * b) % p_);
  }
  // Throws std::domain_error for a == 0.
  Residue Inv(Residue a) const;
  // Canonical residue of an arbitrary integer.
  Residue FromInt(int64_t v) const;

  bool operator==(const Fq& other) const = default;

 private:
  uint32_t p_;
};

bool IsPrime(uint32_t n);

// Dense row-major matrix over F_p. Zero-row and zero-column shapes are legal.
class FqMatrix {
 public:
  FqMatrix() : field_(2) {}
  FqMatrix(Fq field, size_t rows, size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  // Entries are reduced mod p; negative values are allowed.
  static FqMatrix FromRows(Fq field,
                           const std::vector<std::vector<int64_t>>& rows);
  // Throws std::invalid_argument on bad length or out-of-range entries.
  static FqMatrix FromData(Fq field, size_t rows, size_t cols,
                           std::vector<Residue> data);
  static FqMatrix Identity(Fq field, size_t n);

  const Fq& field() const { return field_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  std::span<const Residue> data() const { return data_; }

  Residue operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  Residue& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }

  std::span<const Residue> Row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Residue> Row(size_t r) { return {data_.data() + r * cols_, cols_}; }

  FqMatrix Transpose() const;
  // Rows [begin, end).
  FqMatrix RowRange(size_t begin, size_t end) const;
  // Columns [begin, end).
  FqMatrix ColRange(size_t begin, size_t end) const;
  // Appends the rows of `other` (same field and column count).
  void AppendRows(const FqMatrix& other);
  // Appends one row vector of length cols().
  void AppendRow(std::span<const Residue> row);
  // Copies `block` so that its (0,0) entry lands at (row, col).
  void SetBlock(size_t row, size_t col, const FqMatrix& block);

  bool IsZero() const;
  bool operator==(const FqMatrix& other) const;

  std::string DebugString() const;

 private:
  Fq field_;
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<Residue> data_;
};

FqMatrix operator*(const FqMatrix& a, const FqMatrix& b);
FqMatrix operator+(const FqMatrix& a, const FqMatrix& b);
FqMatrix HStack(const FqMatrix& a, const FqMatrix& b);
FqMatrix VStack(const FqMatrix& a, const FqMatrix& b);

struct RrefResult {
  FqMatrix reduced;  // same shape as the input; zero rows last
  std::vector<size_t> pivots;
  size_t rank() const { return pivots.size(); }
};

RrefResult Rref(const FqMatrix& m);
size_t Rank(const FqMatrix& m);
// The nonzero rows of Rref(m): the canonical basis of the row space.
FqMatrix RowBasis(const FqMatrix& m);

// True iff every row of `b` lies in the row space of `a`.
bool RowspaceContains(const FqMatrix& a, const FqMatrix& b);
// Some X with X * a == b, or nullopt when b's rows leave a's row space.
std::optional<FqMatrix> SolveLeft(const FqMatrix& a, const FqMatrix& b);

// Number of dim-dimensional subspaces of F_q^ambient. Throws
// std::overflow_error past 2^64.
uint64_t GaussianBinomial(uint32_t ambient, uint32_t dim, uint32_t q);

inline constexpr uint64_t kDefaultEnumerationBudget = 1'000'000;

// One full-rank RREF basis per dim-dimensional subspace of F_q^ambient,
// sorted lexicographically by row-major entries. Requires
// dim <= ambient <= 16; throws BudgetExceeded when the count exceeds budget.
std::vector<FqMatrix> EnumerateRowspaces(
    size_t ambient, size_t dim, const Fq& field,
    uint64_t budget = kDefaultEnumerationBudget);

// {"p": int, "rows": int, "cols": int, "data": [int,...]}
nlohmann::json MatrixToJson(const FqMatrix& m);
FqMatrix MatrixFromJson(const nlohmann::json& j);

}  // namespace lncw

#endif  // LNCW_FFLIN_H_
