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

// Rank functions induced by a linear code: each message and each edge
// variable becomes a subspace of the stacked source space, and g(A) is the
// dimension of the sum of the subspaces in A.

#ifndef LNCW_POLYMATROID_H_
#define LNCW_POLYMATROID_H_

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "lncw/fflin.h"
#include "lncw/lincode.h"
#include "lncw/netmodel.h"

namespace lncw {

struct SubspaceArrangement {
  Fq field{2};
  size_t ambient = 0;
  std::vector<std::string> labels;
  std::vector<FqMatrix> generators;  // member subspace = row space

  // Throws std::invalid_argument on a duplicate label or shape mismatch.
  int Add(const std::string& label, FqMatrix generator);
  // -1 when absent.
  int Find(const std::string& label) const;
  size_t size() const { return labels.size(); }
};

// Memoized rank of sums of members. Each query is split into groups with
// pairwise disjoint column support; the rank is the sum over groups. Safe for
// concurrent use.
class RankOracle {
 public:
  explicit RankOracle(SubspaceArrangement arrangement);

  const SubspaceArrangement& arrangement() const { return arr_; }
  size_t size() const { return arr_.size(); }

  // Duplicates are ignored. Throws std::out_of_range on a bad index.
  int Rank(const std::vector<int>& members) const;
  // Throws std::invalid_argument naming an unknown label.
  int Rank(const std::vector<std::string>& labels) const;
  std::vector<int> Resolve(const std::vector<std::string>& labels) const;

  // Groups of `members` with pairwise disjoint supports; zero members are
  // dropped.
  std::vector<std::vector<int>> Components(const std::vector<int>& members) const;

 private:
  struct KeyHash {
    size_t operator()(const std::vector<int>& k) const;
  };
  int RankOfGroup(const std::vector<int>& sorted) const;

  SubspaceArrangement arr_;
  std::vector<std::vector<int>> support_;  // member -> nonzero columns
  mutable std::mutex mu_;
  mutable std::unordered_map<std::vector<int>, int, KeyHash> memo_;
};

enum class GroundScope {
  kFamily,    // messages and bottleneck edges (all edges if unannotated)
  kAllEdges,  // messages and every edge
};

struct InducedArrangement {
  SubspaceArrangement arrangement;
  std::map<std::string, int> ground_map;  // label -> member
  std::vector<int> x_members;             // in source order
  std::vector<int> y_members;             // per edge id; -1 when outside the scope
  std::vector<int> Ground() const;
};

std::string EdgeLabel(const NetworkGraph& g, int edge);

// Throws std::invalid_argument unless `code` verifies on `g`.
InducedArrangement InduceArrangement(const NetworkGraph& g, const FractionalLinearCode& code,
                                     GroundScope scope = GroundScope::kFamily);

struct AxiomOptions {
  bool exhaustive = true;
  uint64_t samples = 10'000;
  uint64_t seed = 1;
};

struct AxiomReport {
  bool pass = true;
  std::string mode;            // "exhaustive" or "sampled"
  std::string failed_axiom;    // "normalized", "monotone", "submodular"
  std::vector<std::string> a;  // counterexample
  std::vector<std::string> b;
  uint64_t checks = 0;
  uint64_t seed = 0;
  std::vector<size_t> component_sizes;  // exhaustive runs
};

inline constexpr size_t kMaxExhaustiveGround = 12;

// Rank table over a ground of at most 64 labels, subsets as bit masks.
// Exhaustive mode requires at most 12 labels (std::invalid_argument).
AxiomReport CheckRankAxioms(const std::vector<std::string>& labels,
                            const std::function<int(uint64_t)>& rank, const AxiomOptions& opts);

// Over the members in `ground`. Exhaustive mode enumerates the ground
// directly when it has at most 12 members, and otherwise each group of
// members with disjoint support separately (the rank is additive across
// groups, so the axioms hold globally iff they hold on each group); every
// group must then have at most 12 members.
AxiomReport CheckRankAxioms(const RankOracle& oracle, const std::vector<int>& ground,
                            const AxiomOptions& opts);

struct DpmOptions {
  uint64_t mixed_samples = 200;
  uint64_t seed = 1;
};

struct DpmReport {
  bool one_to_one = true;     // (1)
  bool ranks = true;          // (2)
  bool membership = true;     // (3)
  bool node_closure = true;   // (4)
  std::vector<std::string> failures;
  uint64_t x_subsets_checked = 0;
  uint64_t mixed_subsets_checked = 0;
  std::string mixed_sampling;
  uint64_t seed = 0;
  uint64_t nodes_checked = 0;
  bool ok() const { return one_to_one && ranks && membership && node_closure; }
};

// `ia` must cover every edge (GroundScope::kAllEdges). Condition (4) at a
// source includes its message among the inputs and at a terminal includes its
// demands among the outputs.
DpmReport CheckDpmConditions(const NetworkGraph& g, const InducedArrangement& ia,
                             CodeDims dims, const DpmOptions& opts = {});

struct NwayResult {
  int64_t lhs = 0;  // sum_i g(A u B_i)
  int64_t rhs = 0;  // g(A u B_1 u ... u B_n) + (n - 1) g(A)
  bool holds() const { return lhs >= rhs; }
};

NwayResult NwaySubmodularity(const RankOracle& oracle, const std::vector<std::string>& a,
                             const std::vector<std::vector<std::string>>& bs);

struct ClaimsOptions {
  uint64_t enumeration_limit = 10'000;      // tuples, partitions
  uint64_t subset_tuple_limit = 1u << 20;   // arbitrary-subset tuples
  uint64_t samples = 2'000;
  uint64_t seed = 1;
};

struct ClaimCheck {
  std::string name;
  std::string statement;
  bool pass = true;
  bool sampled = false;
  uint64_t instances = 0;
  // Slack of the tightest instance, in units of 1/m.
  int64_t tightest_slack = 0;
  std::vector<std::string> extremal;
  std::string failure;
};

struct ClaimsReport {
  int m = 0;
  int n = 0;
  int d = 0;
  std::string note;
  std::vector<ClaimCheck> claims;
  std::vector<int> fin_values;  // distinct observed g(Y_ii, X_ij)
  Rational fin_expected;        // (nm + m - 1) d / m
  bool fin_exact = false;
  bool divisible = false;       // m | d
  bool ok() const;
};

// Requires an annotated N(m, n) and a code with dims (d, n*d) that verifies.
ClaimsReport CheckClaims(const NetworkGraph& g, const FractionalLinearCode& code,
                         const ClaimsOptions& opts = {});

nlohmann::json AxiomReportToJson(const AxiomReport& r);
nlohmann::json DpmReportToJson(const DpmReport& r);
nlohmann::json ClaimsReportToJson(const ClaimsReport& r);

}  // namespace lncw

#endif  // LNCW_POLYMATROID_H_
