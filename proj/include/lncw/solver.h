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

// Exhaustive feasibility search for (r, l) codes on N(m, n).
//
// Only the m^2 bottleneck payloads are enumerated, each up to row space.
// Source edges carry whole messages, relays forward their single input, and
// mixer outputs are chosen per terminal by DecodableAtTerminal.

#ifndef LNCW_SOLVER_H_
#define LNCW_SOLVER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lncw/fflin.h"
#include "lncw/lincode.h"
#include "lncw/netmodel.h"

namespace lncw {

inline constexpr uint64_t kDefaultSearchBudget = 1'000'000'000;

enum class SearchMode { kExhaustive, kRouting };
enum class SearchOutcome { kFeasible, kInfeasible, kBudgetExhausted };

std::string ToString(SearchMode mode);
std::string ToString(SearchOutcome outcome);
// Throws std::invalid_argument on unknown names.
SearchMode ParseSearchMode(const std::string& name);

struct SearchOptions {
  SearchMode mode = SearchMode::kExhaustive;
  bool claims_prune = false;
  uint64_t budget = kDefaultSearchBudget;
  int threads = 1;
  // Use the bit-packed F_2 kernel when it applies. Off forces the generic
  // kernel; results are identical either way.
  bool packed = true;
};

struct SearchReport {
  std::string network_id;
  CodeDims dims;
  uint32_t p = 2;
  SearchMode mode = SearchMode::kExhaustive;
  bool claims_prune = false;
  SearchOutcome outcome = SearchOutcome::kBudgetExhausted;
  uint64_t configs_examined = 0;
  uint64_t space_size = 0;  // 0 when it does not fit in 64 bits
  std::vector<uint64_t> options_per_edge;
  std::vector<std::string> reductions;
  std::string note;
  std::optional<std::vector<size_t>> witness_config;
  std::optional<FractionalLinearCode> witness;
  double wall_time_seconds = 0;  // not serialized; see the run manifest
};

// Quotiented configuration space: one option list per bottleneck edge, in
// edge-id order. Options are full-row-rank generators in the coordinates of
// the edge's source set (width r*m*n), RREF and lexicographic within a
// dimension, larger dimensions first.
class SearchSpace {
 public:
  // Throws std::invalid_argument unless g is an annotated N(m, n) and l >= r;
  // BudgetExceeded when a per-edge option list passes `enumeration_budget`.
  SearchSpace(const NetworkGraph& g, CodeDims dims, const Fq& field, SearchMode mode,
              bool claims_prune, uint64_t enumeration_budget = kDefaultEnumerationBudget);

  const NetworkGraph& network() const { return *g_; }
  const Fq& field() const { return field_; }
  CodeDims dims() const { return dims_; }
  int m() const { return m_; }

  const std::vector<int>& bottleneck_edges() const { return edges_; }
  const std::vector<FqMatrix>& options(size_t position) const { return options_.at(position); }
  // Product of the option counts; nullopt past 2^64.
  std::optional<uint64_t> size() const;

  // Mixed radix, first bottleneck edge most significant.
  std::vector<size_t> Decode(uint64_t index) const;
  uint64_t Encode(const std::vector<size_t>& choice) const;

  // Payload generator of bottleneck position `position` under `choice`, in
  // global source coordinates.
  FqMatrix GlobalPayload(size_t position, size_t option) const;

  // True iff every terminal can decode for this configuration.
  bool CheckConfig(const std::vector<size_t>& choice) const;

  // Set index (1-based) and head v-index of each bottleneck position.
  int set_of(size_t position) const { return sets_.at(position); }
  int head_of(size_t position) const { return heads_.at(position); }

 private:
  const NetworkGraph* g_;
  Fq field_;
  CodeDims dims_;
  int m_ = 0;
  int n_ = 0;
  std::vector<int> edges_;
  std::vector<int> sets_;
  std::vector<int> heads_;
  std::vector<std::vector<FqMatrix>> options_;
  std::vector<int> block_offset_;  // per set, 1-based
  int block_width_ = 0;
  int ambient_ = 0;
};

// True iff there are subspaces U_j of C_j with dim U_j <= l such that the
// row space of `demand` lies in sum(B_i) + sum(U_j). Each argument is a
// generator matrix; all share one field and column count (std::invalid_argument
// otherwise).
bool DecodableAtTerminal(const std::vector<FqMatrix>& relayed,
                         const std::vector<FqMatrix>& mixer_inputs, const FqMatrix& demand,
                         int l);

// Witness-grade variant: the chosen U_j (each with at most l rows, rows inside
// the row space of C_j), or nullopt.
std::optional<std::vector<FqMatrix>> MixerSpans(const std::vector<FqMatrix>& relayed,
                                                const std::vector<FqMatrix>& mixer_inputs,
                                                const FqMatrix& demand, int l);

// Builds and re-verifies the full code for a feasible configuration. Throws
// std::logic_error if the configuration does not yield a verified code.
FractionalLinearCode BuildWitness(const SearchSpace& space, const std::vector<size_t>& choice);

SearchReport SearchFamily(const NetworkGraph& g, CodeDims dims, const Fq& field,
                          const SearchOptions& options);

// Deterministic: carries no timing.
nlohmann::json SearchReportToJson(const NetworkGraph& g, const SearchReport& report);

}  // namespace lncw

#endif  // LNCW_SOLVER_H_
