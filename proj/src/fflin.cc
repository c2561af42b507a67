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

#include "lncw/fflin.h"

#include <algorithm>
#include <sstream>

namespace lncw {

bool IsPrime(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Fq::Fq(uint32_t modulus) : p_(modulus) {
  if (modulus > kMaxModulus || !IsPrime(modulus)) {
    throw std::invalid_argument("field modulus must be a prime in [2, 65521], got " +
                                std::to_string(modulus));
  }
}

Residue Fq::Inv(Residue a) const {
  if (a % p_ == 0) throw std::domain_error("zero has no multiplicative inverse");
  // Extended Euclid on (a, p).
  int64_t t = 0, new_t = 1;
  int64_t r = p_, new_r = a % p_;
  while (new_r != 0) {
    int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  return FromInt(t);
}

Residue Fq::FromInt(int64_t v) const {
  int64_t m = v % static_cast<int64_t>(p_);
  if (m < 0) m += p_;
  return static_cast<Residue>(m);
}

FqMatrix FqMatrix::FromRows(Fq field,
                            const std::vector<std::vector<int64_t>>& rows) {
  const size_t cols = rows.empty() ? 0 : rows.front().size();
  FqMatrix m(field, rows.size(), cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw std::invalid_argument("ragged row list");
    }
    for (size_t c = 0; c < cols; ++c) m(r, c) = field.FromInt(rows[r][c]);
  }
  return m;
}

FqMatrix FqMatrix::FromData(Fq field, size_t rows, size_t cols,
                            std::vector<Residue> data) {
  if (data.size() != rows * cols) {
    throw std::invalid_argument("matrix data length " + std::to_string(data.size()) +
                                " != rows*cols " + std::to_string(rows * cols));
  }
  for (Residue v : data) {
    if (v >= field.modulus()) {
      throw std::invalid_argument("matrix entry " + std::to_string(v) +
                                  " is not a residue mod " +
                                  std::to_string(field.modulus()));
    }
  }
  FqMatrix m(field, rows, cols);
  m.data_ = std::move(data);
  return m;
}

FqMatrix FqMatrix::Identity(Fq field, size_t n) {
  FqMatrix m(field, n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FqMatrix FqMatrix::Transpose() const {
  FqMatrix t(field_, cols_, rows_);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

FqMatrix FqMatrix::RowRange(size_t begin, size_t end) const {
  if (begin > end || end > rows_) throw std::out_of_range("row range");
  FqMatrix m(field_, end - begin, cols_);
  std::copy(data_.begin() + begin * cols_, data_.begin() + end * cols_,
            m.data_.begin());
  return m;
}

FqMatrix FqMatrix::ColRange(size_t begin, size_t end) const {
  if (begin > end || end > cols_) throw std::out_of_range("column range");
  FqMatrix m(field_, rows_, end - begin);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = begin; c < end; ++c) m(r, c - begin) = (*this)(r, c);
  }
  return m;
}

void FqMatrix::AppendRows(const FqMatrix& other) {
  if (other.cols_ != cols_ || !(other.field_ == field_)) {
    throw std::invalid_argument("AppendRows: shape or field mismatch");
  }
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  rows_ += other.rows_;
}

void FqMatrix::AppendRow(std::span<const Residue> row) {
  if (row.size() != cols_) throw std::invalid_argument("AppendRow: length mismatch");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

void FqMatrix::SetBlock(size_t row, size_t col, const FqMatrix& block) {
  if (row + block.rows_ > rows_ || col + block.cols_ > cols_) {
    throw std::out_of_range("SetBlock: block does not fit");
  }
  for (size_t r = 0; r < block.rows_; ++r) {
    std::copy(block.Row(r).begin(), block.Row(r).end(),
              data_.begin() + (row + r) * cols_ + col);
  }
}

bool FqMatrix::IsZero() const {
  return std::all_of(data_.begin(), data_.end(), [](Residue v) { return v == 0; });
}

bool FqMatrix::operator==(const FqMatrix& other) const {
  return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ &&
         data_ == other.data_;
}

std::string FqMatrix::DebugString() const {
  std::ostringstream os;
  os << "F" << field_.modulus() << " " << rows_ << "x" << cols_ << " [";
  for (size_t r = 0; r < rows_; ++r) {
    os << (r ? "; " : "");
    for (size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c);
  }
  os << "]";
  return os.str();
}

FqMatrix operator*(const FqMatrix& a, const FqMatrix& b) {
  if (a.cols() != b.rows() || !(a.field() == b.field())) {
    throw std::invalid_argument("matrix product shape mismatch: " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " * " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
  }
  const uint64_t p = a.field().modulus();
  FqMatrix out(a.field(), a.rows(), b.cols());
  std::vector<uint64_t> acc(b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (size_t k = 0; k < a.cols(); ++k) {
      const uint64_t x = a(i, k);
      if (x == 0) continue;
      auto brow = b.Row(k);
      for (size_t j = 0; j < brow.size(); ++j) acc[j] += x * brow[j];
    }
    // Each term is below 2^32, so the accumulator cannot overflow for any
    // realistic inner dimension.
    for (size_t j = 0; j < acc.size(); ++j) out(i, j) = static_cast<Residue>(acc[j] % p);
  }
  return out;
}

FqMatrix operator+(const FqMatrix& a, const FqMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || !(a.field() == b.field())) {
    throw std::invalid_argument("matrix sum shape mismatch");
  }
  FqMatrix out = a;
  for (size_t r = 0; r < a.rows(); ++r) {
    for (size_t c = 0; c < a.cols(); ++c) out(r, c) = a.field().Add(a(r, c), b(r, c));
  }
  return out;
}

FqMatrix HStack(const FqMatrix& a, const FqMatrix& b) {
  if (a.rows() != b.rows() || !(a.field() == b.field())) {
    throw std::invalid_argument("HStack: row count or field mismatch");
  }
  FqMatrix out(a.field(), a.rows(), a.cols() + b.cols());
  out.SetBlock(0, 0, a);
  out.SetBlock(0, a.cols(), b);
  return out;
}

FqMatrix VStack(const FqMatrix& a, const FqMatrix& b) {
  FqMatrix out = a;
  out.AppendRows(b);
  return out;
}

namespace {

// Gauss-Jordan elimination restricted to the first `pivot_cols` columns.
// Returns the pivot columns; `m` is left in reduced form on those columns.
std::vector<size_t> EliminateInPlace(FqMatrix& m, size_t pivot_cols) {
  const Fq& f = m.field();
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < pivot_cols && row < m.rows(); ++col) {
    size_t sel = row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row) {
      auto a = m.Row(sel);
      auto b = m.Row(row);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    auto prow = m.Row(row);
    const Residue inv = f.Inv(prow[col]);
    if (inv != 1) {
      for (auto& v : prow) v = f.Mul(v, inv);
    }
    for (size_t r = 0; r < m.rows(); ++r) {
      if (r == row) continue;
      const Residue factor = m(r, col);
      if (factor == 0) continue;
      auto target = m.Row(r);
      for (size_t c = col; c < m.cols(); ++c) {
        if (prow[c] != 0) target[c] = f.Sub(target[c], f.Mul(factor, prow[c]));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Reduces `v` against an RREF basis in place.
void ReduceAgainst(const FqMatrix& basis, const std::vector<size_t>& pivots,
                   std::span<Residue> v) {
  const Fq& f = basis.field();
  for (size_t i = 0; i < pivots.size(); ++i) {
    const Residue factor = v[pivots[i]];
    if (factor == 0) continue;
    auto brow = basis.Row(i);
    for (size_t c = 0; c < v.size(); ++c) {
      if (brow[c] != 0) v[c] = f.Sub(v[c], f.Mul(factor, brow[c]));
    }
  }
}

}  // namespace

RrefResult Rref(const FqMatrix& m) {
  RrefResult out{m, {}};
  out.pivots = EliminateInPlace(out.reduced, m.cols());
  return out;
}

size_t Rank(const FqMatrix& m) { return Rref(m).rank(); }

FqMatrix RowBasis(const FqMatrix& m) {
  RrefResult r = Rref(m);
  return r.reduced.RowRange(0, r.rank());
}

bool RowspaceContains(const FqMatrix& a, const FqMatrix& b) {
  if (a.cols() != b.cols() || !(a.field() == b.field())) {
    throw std::invalid_argument("RowspaceContains: dimension mismatch (" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.cols()) + " columns)");
  }
  RrefResult ra = Rref(a);
  std::vector<Residue> row(b.cols());
  for (size_t r = 0; r < b.rows(); ++r) {
    std::copy(b.Row(r).begin(), b.Row(r).end(), row.begin());
    ReduceAgainst(ra.reduced, ra.pivots, row);
    if (std::any_of(row.begin(), row.end(), [](Residue v) { return v != 0; })) {
      return false;
    }
  }
  return true;
}

std::optional<FqMatrix> SolveLeft(const FqMatrix& a, const FqMatrix& b) {
  if (a.cols() != b.cols() || !(a.field() == b.field())) {
    throw std::invalid_argument("SolveLeft: dimension mismatch (" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.cols()) + " columns)");
  }
  const Fq& f = a.field();
  // Reduce [a | I]; the right half records T with T * a = rref(a).
  FqMatrix aug = HStack(a, FqMatrix::Identity(f, a.rows()));
  std::vector<size_t> pivots = EliminateInPlace(aug, a.cols());
  const FqMatrix reduced = aug.ColRange(0, a.cols());
  const FqMatrix transform = aug.ColRange(a.cols(), aug.cols());

  FqMatrix x(f, b.rows(), a.rows());
  std::vector<Residue> row(b.cols());
  for (size_t r = 0; r < b.rows(); ++r) {
    std::copy(b.Row(r).begin(), b.Row(r).end(), row.begin());
    // b_r = sum_i row[pivot_i] * reduced_i when b_r is in the row space.
    std::vector<Residue> coeffs(pivots.size());
    for (size_t i = 0; i < pivots.size(); ++i) coeffs[i] = row[pivots[i]];
    ReduceAgainst(reduced, pivots, row);
    if (std::any_of(row.begin(), row.end(), [](Residue v) { return v != 0; })) {
      return std::nullopt;
    }
    auto xrow = x.Row(r);
    for (size_t i = 0; i < pivots.size(); ++i) {
      if (coeffs[i] == 0) continue;
      auto trow = transform.Row(i);
      for (size_t c = 0; c < xrow.size(); ++c) {
        xrow[c] = f.Add(xrow[c], f.Mul(coeffs[i], trow[c]));
      }
    }
  }
  return x;
}

uint64_t GaussianBinomial(uint32_t ambient, uint32_t dim, uint32_t q) {
  if (dim > ambient) return 0;
  // prod_{i<dim} (q^(ambient-i) - 1) / (q^(i+1) - 1), evaluated with the
  // recurrence [n,k] = [n-1,k-1] + q^k [n-1,k] to stay in integers.
  std::vector<unsigned __int128> row(dim + 1, 0);
  row[0] = 1;
  for (uint32_t n = 1; n <= ambient; ++n) {
    for (uint32_t k = std::min(n, dim); k >= 1; --k) {
      unsigned __int128 qk = 1;
      for (uint32_t i = 0; i < k; ++i) qk *= q;
      row[k] = row[k - 1] + qk * row[k];
      if (row[k] > UINT64_MAX) throw std::overflow_error("Gaussian binomial overflow");
    }
  }
  return static_cast<uint64_t>(row[dim]);
}

std::vector<FqMatrix> EnumerateRowspaces(size_t ambient, size_t dim,
                                         const Fq& field, uint64_t budget) {
  if (dim > ambient || ambient > 16) {
    throw std::invalid_argument("EnumerateRowspaces requires dim <= ambient <= 16");
  }
  const uint32_t q = field.modulus();
  const uint64_t count = GaussianBinomial(static_cast<uint32_t>(ambient),
                                          static_cast<uint32_t>(dim), q);
  if (count > budget) {
    throw BudgetExceeded("subspace enumeration needs " + std::to_string(count) +
                             " representatives, budget " + std::to_string(budget),
                         count);
  }
  std::vector<FqMatrix> out;
  out.reserve(count);

  // Walk pivot sets in lexicographic order; fill the free slots of each
  // pivot pattern with every assignment.
  std::vector<size_t> piv(dim);
  for (size_t i = 0; i < dim; ++i) piv[i] = i;
  while (true) {
    std::vector<std::pair<size_t, size_t>> free_slots;
    for (size_t r = 0; r < dim; ++r) {
      for (size_t c = piv[r] + 1; c < ambient; ++c) {
        if (!std::binary_search(piv.begin(), piv.end(), c)) free_slots.emplace_back(r, c);
      }
    }
    std::vector<Residue> digits(free_slots.size(), 0);
    while (true) {
      FqMatrix m(field, dim, ambient);
      for (size_t r = 0; r < dim; ++r) m(r, piv[r]) = 1;
      for (size_t s = 0; s < free_slots.size(); ++s) {
        m(free_slots[s].first, free_slots[s].second) = digits[s];
      }
      out.push_back(std::move(m));
      size_t s = 0;
      while (s < digits.size() && ++digits[s] == q) digits[s++] = 0;
      if (s == digits.size()) break;
    }
    // Next combination.
    if (dim == 0) break;
    size_t i = dim;
    while (i > 0 && piv[i - 1] == ambient - dim + (i - 1)) --i;
    if (i == 0) break;
    ++piv[i - 1];
    for (size_t j = i; j < dim; ++j) piv[j] = piv[j - 1] + 1;
  }
  std::sort(out.begin(), out.end(), [](const FqMatrix& a, const FqMatrix& b) {
    return std::lexicographical_compare(a.data().begin(), a.data().end(),
                                        b.data().begin(), b.data().end());
  });
  return out;
}

nlohmann::json MatrixToJson(const FqMatrix& m) {
  return nlohmann::json{{"p", m.field().modulus()},
                        {"rows", m.rows()},
                        {"cols", m.cols()},
                        {"data", std::vector<Residue>(m.data().begin(), m.data().end())}};
}

FqMatrix MatrixFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw std::invalid_argument("matrix JSON needs p, rows, cols, data");
  }
  Fq f(j.at("p").get<uint32_t>());
  return FqMatrix::FromData(f, j.at("rows").get<size_t>(), j.at("cols").get<size_t>(),
                            j.at("data").get<std::vector<Residue>>());
}

}  // namespace lncw
