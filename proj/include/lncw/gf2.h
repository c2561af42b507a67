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

// Bit-packed row vectors over F_2 for ambient dimension <= 64. Bit c of a
// word is coordinate c.

#ifndef LNCW_GF2_H_
#define LNCW_GF2_H_

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "lncw/fflin.h"

namespace lncw {

// Echelon basis keyed by leading (highest) bit.
class Gf2Basis {
 public:
  // Normal form of v modulo the span: zero on every pivot bit. Linear in v.
  uint64_t Reduce(uint64_t v) const {
    while (uint64_t hit = v & mask_) {
      v ^= by_pivot_[63 - std::countl_zero(hit)];
    }
    return v;
  }
  bool Contains(uint64_t v) const { return Reduce(v) == 0; }

  // Returns false when v is already in the span.
  bool Insert(uint64_t v) {
    v = Reduce(v);
    if (v == 0) return false;
    const int lead = 63 - std::countl_zero(v);
    by_pivot_[lead] = v;
    mask_ |= uint64_t{1} << lead;
    vectors_[dim_++] = v;
    return true;
  }

  int dim() const { return dim_; }
  std::span<const uint64_t> vectors() const { return {vectors_.data(), size_t(dim_)}; }

 private:
  std::array<uint64_t, 64> by_pivot_{};
  std::array<uint64_t, 64> vectors_{};
  uint64_t mask_ = 0;
  int dim_ = 0;
};

// Packs each row of an F_2 matrix with at most 64 columns.
std::vector<uint64_t> PackRows(const FqMatrix& m);

}  // namespace lncw

#endif  // LNCW_GF2_H_
