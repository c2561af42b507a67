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

#include "lncw/gf2.h"

#include <stdexcept>

namespace lncw {

std::vector<uint64_t> PackRows(const FqMatrix& m) {
  if (m.field().modulus() != 2 || m.cols() > 64) {
    throw std::invalid_argument("PackRows needs an F_2 matrix with <= 64 columns");
  }
  std::vector<uint64_t> out(m.rows(), 0);
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c)) out[r] |= uint64_t{1} << c;
    }
  }
  return out;
}

}  // namespace lncw
