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

// Generators for the generalized M-network N(m, n), its k-fold parallel
// composition, and their routing codes.
//
// Naming: sources "s_i_j" carry "X_i_j"; combiners "u_i"; middle nodes
// "v_j" (relays for j <= m, mixers above); terminals "t_<index>" with a
// 0-based canonical index. Nodes private to copy p of a parallel network are
// prefixed "c<p>.".

#ifndef LNCW_FAMILY_H_
#define LNCW_FAMILY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "lncw/fflin.h"
#include "lncw/lincode.h"
#include "lncw/netmodel.h"

namespace lncw {

inline constexpr uint64_t kDefaultTerminalBudget = 100'000;

struct MNetParams {
  int m = 2;
  int n = 1;
  int k = 1;
};

// Throws std::overflow_error past 2^64.
uint64_t Binomial(uint64_t n, uint64_t k);
// C(mn, n)^m; throws std::overflow_error past 2^64.
uint64_t TerminalCount(int m, int n);

std::string SourceName(int i, int j);
std::string MessageName(int i, int j);

// Throws std::invalid_argument on bad parameters and BudgetExceeded when the
// terminal count passes `terminal_budget`.
NetworkGraph BuildMNetwork(int m, int n, uint64_t terminal_budget = kDefaultTerminalBudget);
NetworkGraph BuildParallel(int m, int n, int k,
                           uint64_t terminal_budget = kDefaultTerminalBudget);

// Demand tuple of terminal `index`: for each set i, the sorted 1-based source
// indices j. Set 1 is the most significant mixed-radix digit; each digit
// ranks the n-subsets of {1..mn} lexicographically.
std::vector<std::vector<int>> TerminalDemands(int m, int n, uint64_t index);
uint64_t TerminalIndex(int m, int n, const std::vector<std::vector<int>>& demands);

// The (m, mn) routing code on an annotated N(m, n). Edge u_i -> v_i carries
// component 1 of X_i1..X_i(mn), edge u_i -> v_(m-1+p) carries component p,
// and each mixer hands a terminal the p-th components of its demands ordered
// by (set, demand rank).
FractionalLinearCode RoutingCode(const NetworkGraph& g, const Fq& field);

// Splits the (yk, ykn) routing code of N(yk, n) into k groups of yn
// consecutive edge slots, copy p carrying group p, with decoder columns
// remapped. Requires an annotated parallel network with m = y*k.
FractionalLinearCode ParallelRoutingCode(const NetworkGraph& parallel, int y,
                                         const Fq& field);

// Embeds a code of N(m, n) into copy `copy` of a parallel network on the same
// (m, n); every other copy carries zero.
FractionalLinearCode LiftToCopy(const NetworkGraph& base, const FractionalLinearCode& code,
                                const NetworkGraph& parallel, int copy);

}  // namespace lncw

#endif  // LNCW_FAMILY_H_
