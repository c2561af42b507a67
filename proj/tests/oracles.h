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

// Independent reference computations used to cross-check the library. None
// of these share code paths with the routines they check.

#ifndef LNCW_TESTS_ORACLES_H_
#define LNCW_TESTS_ORACLES_H_

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lncw/fflin.h"
#include "lncw/lincode.h"
#include "lncw/netmodel.h"

namespace lncw::oracle {

using Vec = std::vector<Residue>;

// Rank via the size of the row span, found by enumerating all q^rows
// combinations. Requires q^rows <= 2^22.
int SpanRank(const FqMatrix& m);

// True iff every row of b lies in the enumerated span of a.
bool SpanContains(const FqMatrix& a, const FqMatrix& b);

// prod_{i<k} (q^(n-i) - 1) / (q^(k-i) - 1).
uint64_t GaussianBinomialFormula(int n, int k, int q);

// Number of distinct k-dimensional subspaces of F_q^n found by closing every
// k-tuple of vectors under linear combinations. Tiny inputs only.
uint64_t CountSubspacesBySpans(int n, int k, int q);

// Edmonds-Karp (BFS augmenting paths) max flow.
int64_t EdmondsKarp(int nodes, const std::vector<std::array<int64_t, 3>>& arcs, int s, int t);

// Cut value separating the sources named in `sources` from every terminal
// that demands one of them, unit edge capacities.
int64_t CutOracle(const NetworkGraph& g, const std::vector<std::string>& sources);

// Edge payloads obtained by pushing the stacked source vector `x` through the
// local matrices one edge at a time.
std::vector<Vec> Propagate(const NetworkGraph& g, const FractionalLinearCode& code, const Vec& x);

Vec MatVec(const FqMatrix& m, const Vec& x);

FqMatrix RandomMatrix(const Fq& field, size_t rows, size_t cols, std::mt19937_64& rng);

// Raw brute force on N(2,1) with (r, l) = (1, 1): every 1x2 bottleneck matrix
// (zero included), every relay scalar and every mixer projection per
// terminal. Returns the verdict per raw configuration, index = 8 bits of the
// four bottleneck rows in edge order, first edge most significant.
std::vector<bool> RawBruteForceM21(uint32_t p);

}  // namespace lncw::oracle

#endif  // LNCW_TESTS_ORACLES_H_
