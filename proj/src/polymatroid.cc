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

#include "lncw/polymatroid.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lncw/family.h"

namespace lncw {

namespace {

std::vector<std::string> LabelsOf(const SubspaceArrangement& arr, const std::vector<int>& members) {
  std::vector<std::string> out;
  for (int v : members) out.push_back(arr.labels.at(v));
  return out;
}

std::vector<int> MaskMembers(const std::vector<int>& ground, uint64_t mask) {
  std::vector<int> out;
  for (size_t b = 0; b < ground.size(); ++b) {
    if (mask >> b & 1) out.push_back(ground[b]);
  }
  return out;
}

std::vector<std::string> MaskLabels(const std::vector<std::string>& labels, uint64_t mask) {
  std::vector<std::string> out;
  for (size_t b = 0; b < labels.size(); ++b) {
    if (mask >> b & 1) out.push_back(labels[b]);
  }
  return out;
}

// Exhaustive check of a rank table over at most 12 labels.
AxiomReport ExhaustiveAxioms(const std::vector<std::string>& labels,
                             const std::function<int(uint64_t)>& rank) {
  AxiomReport rep;
  rep.mode = "exhaustive";
  const size_t g = labels.size();
  if (g > kMaxExhaustiveGround) {
    throw std::invalid_argument("exhaustive axiom check needs a ground of at most 12 labels, got " +
                                std::to_string(g));
  }
  const uint64_t full = uint64_t{1} << g;
  std::vector<int> table(full);
  for (uint64_t s = 0; s < full; ++s) table[s] = rank(s);
  auto fail = [&](const char* axiom, uint64_t a, uint64_t b) {
    rep.pass = false;
    rep.failed_axiom = axiom;
    rep.a = MaskLabels(labels, a);
    rep.b = MaskLabels(labels, b);
    return rep;
  };
  ++rep.checks;
  if (table[0] != 0) return fail("normalized", 0, 0);
  for (uint64_t a = 0; a < full; ++a) {
    for (size_t x = 0; x < g; ++x) {
      const uint64_t b = a | (uint64_t{1} << x);
      if (b == a) continue;
      ++rep.checks;
      if (table[a] > table[b]) return fail("monotone", a, b);
    }
  }
  for (uint64_t a = 0; a < full; ++a) {
    for (uint64_t b = a + 1; b < full; ++b) {
      ++rep.checks;
      if (table[a] + table[b] < table[a | b] + table[a & b]) return fail("submodular", a, b);
    }
  }
  return rep;
}

AxiomReport SampledAxioms(size_t ground, const std::function<int(const std::vector<int>&)>& rank,
                          const std::function<std::vector<std::string>(const std::vector<int>&)>& name,
                          const AxiomOptions& opts) {
  AxiomReport rep;
  rep.mode = "sampled";
  rep.seed = opts.seed;
  std::mt19937_64 rng(opts.seed);
  auto fail = [&](const char* axiom, const std::vector<int>& a, const std::vector<int>& b) {
    rep.pass = false;
    rep.failed_axiom = axiom;
    rep.a = name(a);
    rep.b = name(b);
    return rep;
  };
  ++rep.checks;
  if (rank({}) != 0) return fail("normalized", {}, {});
  for (uint64_t s = 0; s < opts.samples; ++s) {
    std::vector<int> a, b, uni, inter;
    for (size_t x = 0; x < ground; ++x) {
      const uint64_t bits = rng();
      const bool in_a = bits & 1;
      const bool in_b = bits & 2;
      if (in_a) a.push_back(static_cast<int>(x));
      if (in_b) b.push_back(static_cast<int>(x));
      if (in_a || in_b) uni.push_back(static_cast<int>(x));
      if (in_a && in_b) inter.push_back(static_cast<int>(x));
    }
    const int ra = rank(a), rb = rank(b), ru = rank(uni), ri = rank(inter);
    rep.checks += 2;
    if (ra > ru) return fail("monotone", a, uni);
    if (ra + rb < ru + ri) return fail("submodular", a, b);
  }
  return rep;
}

std::vector<std::vector<int>> Subsets(int universe, int size) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(size);
  std::iota(pick.begin(), pick.end(), 1);
  if (size > universe) return out;
  for (;;) {
    out.push_back(pick);
    int a = size - 1;
    while (a >= 0 && pick[a] == universe - size + a + 1) --a;
    if (a < 0) break;
    ++pick[a];
    for (int b = a + 1; b < size; ++b) pick[b] = pick[b - 1] + 1;
  }
  return out;
}

std::string Join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// Tracks the tightest instance of one claim.
class ClaimTracker {
 public:
  ClaimTracker(std::string name, std::string statement) {
    check_.name = std::move(name);
    check_.statement = std::move(statement);
  }
  // `slack` in units of 1/m; negative means violated.
  void Record(int64_t slack, const std::function<std::vector<std::string>()>& describe) {
    ++check_.instances;
    if (!seen_ || slack < check_.tightest_slack) {
      seen_ = true;
      check_.tightest_slack = slack;
      check_.extremal = describe();
    }
    if (slack < 0 && check_.pass) {
      check_.pass = false;
      check_.failure = "violated at " + Join(describe(), ", ");
    }
  }
  void Fail(const std::string& why) {
    check_.pass = false;
    if (check_.failure.empty()) check_.failure = why;
  }
  ClaimCheck& check() { return check_; }

 private:
  ClaimCheck check_;
  bool seen_ = false;
};

}  // namespace

int SubspaceArrangement::Add(const std::string& label, FqMatrix generator) {
  if (Find(label) >= 0) throw std::invalid_argument("duplicate arrangement label " + label);
  if (labels.empty() && ambient == 0) {
    field = generator.field();
    ambient = generator.cols();
  }
  if (generator.cols() != ambient || !(generator.field() == field)) {
    throw std::invalid_argument("member " + label + " does not match the arrangement ambient");
  }
  labels.push_back(label);
  generators.push_back(std::move(generator));
  return static_cast<int>(labels.size()) - 1;
}

int SubspaceArrangement::Find(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

size_t RankOracle::KeyHash::operator()(const std::vector<int>& k) const {
  uint64_t h = 1469598103934665603ull;
  for (int v : k) {
    h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return static_cast<size_t>(h);
}

RankOracle::RankOracle(SubspaceArrangement arrangement) : arr_(std::move(arrangement)) {
  for (const FqMatrix& g : arr_.generators) {
    std::vector<int> cols;
    for (size_t c = 0; c < g.cols(); ++c) {
      for (size_t r = 0; r < g.rows(); ++r) {
        if (g(r, c)) {
          cols.push_back(static_cast<int>(c));
          break;
        }
      }
    }
    support_.push_back(std::move(cols));
  }
}

std::vector<std::vector<int>> RankOracle::Components(const std::vector<int>& members) const {
  std::vector<int> parent(arr_.ambient);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int v : members) {
    const auto& cols = support_.at(v);
    for (size_t c = 1; c < cols.size(); ++c) {
      const int a = find(cols[0]);
      const int b = find(cols[c]);
      if (a != b) parent[b] = a;
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int v : members) {
    if (support_[v].empty()) continue;
    groups[find(support_[v][0])].push_back(v);
  }
  std::vector<std::vector<int>> out;
  for (auto& [root, g] : groups) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    out.push_back(std::move(g));
  }
  return out;
}

int RankOracle::RankOfGroup(const std::vector<int>& sorted) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(sorted);
    if (it != memo_.end()) return it->second;
  }
  FqMatrix stacked(arr_.field, 0, arr_.ambient);
  for (int v : sorted) stacked.AppendRows(arr_.generators[v]);
  const int r = static_cast<int>(lncw::Rank(stacked));
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(sorted, r);
  return r;
}

int RankOracle::Rank(const std::vector<int>& members) const {
  for (int v : members) {
    if (v < 0 || static_cast<size_t>(v) >= arr_.size()) {
      throw std::out_of_range("member index " + std::to_string(v));
    }
  }
  int total = 0;
  for (const auto& group : Components(members)) total += RankOfGroup(group);
  return total;
}

std::vector<int> RankOracle::Resolve(const std::vector<std::string>& labels) const {
  std::vector<int> out;
  for (const auto& l : labels) {
    const int v = arr_.Find(l);
    if (v < 0) throw std::invalid_argument("unknown label " + l);
    out.push_back(v);
  }
  return out;
}

int RankOracle::Rank(const std::vector<std::string>& labels) const { return Rank(Resolve(labels)); }

std::vector<int> InducedArrangement::Ground() const {
  std::vector<int> out = x_members;
  for (int v : y_members) {
    if (v >= 0) out.push_back(v);
  }
  return out;
}

std::string EdgeLabel(const NetworkGraph& g, int edge) {
  const Edge& e = g.edge(edge);
  return "Y[" + g.node_name(e.tail) + "->" + g.node_name(e.head) + "]";
}

InducedArrangement InduceArrangement(const NetworkGraph& g, const FractionalLinearCode& code,
                                     GroundScope scope) {
  const GlobalCodingMap maps = GlobalMaps(g, code);
  if (!VerifySolution(g, code, maps).ok()) {
    throw std::invalid_argument("induced arrangement needs a code that verifies");
  }
  InducedArrangement ia;
  const int r = code.dims.r;
  const size_t width = maps.layout.width();
  ia.arrangement.field = code.field;
  ia.arrangement.ambient = width;
  for (size_t s = 0; s < g.sources().size(); ++s) {
    FqMatrix gen(code.field, r, width);
    for (int c = 0; c < r; ++c) gen(c, maps.layout.offset(static_cast<int>(s)) + c) = 1;
    const int v = ia.arrangement.Add(g.sources()[s].message, std::move(gen));
    ia.x_members.push_back(v);
    ia.ground_map[g.sources()[s].message] = v;
  }
  const bool family = scope == GroundScope::kFamily && g.annotations.has_value();
  ia.y_members.assign(g.num_edges(), -1);
  for (size_t e = 0; e < g.num_edges(); ++e) {
    if (family) {
      const EdgeRole role = g.annotations->edge_tags[e].role;
      if (role != EdgeRole::kBottleneckDirect && role != EdgeRole::kBottleneckCross) continue;
    }
    const std::string label = EdgeLabel(g, static_cast<int>(e));
    const int v = ia.arrangement.Add(label, maps.edge_maps[e]);
    ia.y_members[e] = v;
    ia.ground_map[label] = v;
  }
  return ia;
}

AxiomReport CheckRankAxioms(const std::vector<std::string>& labels,
                            const std::function<int(uint64_t)>& rank, const AxiomOptions& opts) {
  if (labels.size() > 64) throw std::invalid_argument("rank tables support at most 64 labels");
  if (opts.exhaustive) {
    AxiomReport rep = ExhaustiveAxioms(labels, rank);
    rep.component_sizes = {labels.size()};
    return rep;
  }
  auto to_mask = [](const std::vector<int>& s) {
    uint64_t mask = 0;
    for (int x : s) mask |= uint64_t{1} << x;
    return mask;
  };
  return SampledAxioms(
      labels.size(), [&](const std::vector<int>& s) { return rank(to_mask(s)); },
      [&](const std::vector<int>& s) { return MaskLabels(labels, to_mask(s)); }, opts);
}

AxiomReport CheckRankAxioms(const RankOracle& oracle, const std::vector<int>& ground,
                            const AxiomOptions& opts) {
  const SubspaceArrangement& arr = oracle.arrangement();
  if (!opts.exhaustive) {
    return SampledAxioms(
        ground.size(),
        [&](const std::vector<int>& s) {
          std::vector<int> members;
          for (int x : s) members.push_back(ground[x]);
          return oracle.Rank(members);
        },
        [&](const std::vector<int>& s) {
          std::vector<int> members;
          for (int x : s) members.push_back(ground[x]);
          return LabelsOf(arr, members);
        },
        opts);
  }
  std::vector<std::vector<int>> parts;
  if (ground.size() <= kMaxExhaustiveGround) {
    parts.push_back(ground);
  } else {
    parts = oracle.Components(ground);
    for (int v : ground) {
      if (oracle.Components({v}).empty()) parts.push_back({v});
    }
  }
  AxiomReport total;
  total.mode = "exhaustive";
  for (const auto& part : parts) {
    if (part.size() > kMaxExhaustiveGround) {
      throw std::invalid_argument("separable part of " + std::to_string(part.size()) +
                                  " members exceeds the exhaustive limit of 12");
    }
    AxiomReport rep = ExhaustiveAxioms(LabelsOf(arr, part), [&](uint64_t mask) {
      return oracle.Rank(MaskMembers(part, mask));
    });
    total.checks += rep.checks;
    total.component_sizes.push_back(part.size());
    if (!rep.pass) {
      rep.checks = total.checks;
      rep.component_sizes = total.component_sizes;
      return rep;
    }
  }
  return total;
}

DpmReport CheckDpmConditions(const NetworkGraph& g, const InducedArrangement& ia, CodeDims dims,
                             const DpmOptions& opts) {
  for (int v : ia.y_members) {
    if (v < 0) throw std::invalid_argument("condition check needs every edge in the arrangement");
  }
  DpmReport rep;
  rep.seed = opts.seed;
  const RankOracle oracle(ia.arrangement);
  const SubspaceArrangement& arr = ia.arrangement;
  const int r = dims.r;

  std::vector<FqMatrix> x_bases;
  for (int v : ia.x_members) x_bases.push_back(RowBasis(arr.generators[v]));
  for (size_t a = 0; a < x_bases.size() && rep.one_to_one; ++a) {
    for (size_t b = a + 1; b < x_bases.size(); ++b) {
      if (x_bases[a] == x_bases[b]) {
        rep.one_to_one = false;
        rep.failures.push_back("(1) " + arr.labels[ia.x_members[a]] + " and " +
                               arr.labels[ia.x_members[b]] + " share a subspace");
        break;
      }
    }
  }

  for (int v : ia.x_members) {
    if (oracle.Rank(std::vector<int>{v}) != r) {
      rep.ranks = false;
      rep.failures.push_back("(2) rank of " + arr.labels[v] + " is not " + std::to_string(r));
    }
  }
  for (int v : ia.y_members) {
    if (oracle.Rank(std::vector<int>{v}) > dims.l) {
      rep.ranks = false;
      rep.failures.push_back("(2) rank of " + arr.labels[v] + " exceeds " + std::to_string(dims.l));
    }
  }

  const size_t nx = ia.x_members.size();
  if (nx > 24) throw std::invalid_argument("too many messages for exhaustive membership check");
  for (uint64_t mask = 0; mask < (uint64_t{1} << nx); ++mask) {
    const std::vector<int> a = MaskMembers(ia.x_members, mask);
    ++rep.x_subsets_checked;
    if (oracle.Rank(a) < r * static_cast<int>(a.size())) {
      if (rep.membership) rep.failures.push_back("(3) " + Join(LabelsOf(arr, a), ","));
      rep.membership = false;
    }
  }
  const std::vector<int> ground = ia.Ground();
  const size_t cap = std::min<size_t>(ground.size(), 64);
  rep.mixed_sampling = "subset size uniform in [1, " + std::to_string(cap) +
                       "], members uniform without replacement over all " +
                       std::to_string(ground.size()) + " variables";
  std::mt19937_64 rng(opts.seed);
  std::vector<bool> is_x(arr.size(), false);
  for (int v : ia.x_members) is_x[v] = true;
  for (uint64_t s = 0; s < opts.mixed_samples && cap > 0; ++s) {
    const size_t size = 1 + rng() % cap;
    std::vector<int> pool = ground;
    std::vector<int> a;
    for (size_t k = 0; k < size; ++k) {
      const size_t pick = k + rng() % (pool.size() - k);
      std::swap(pool[k], pool[pick]);
      a.push_back(pool[k]);
    }
    const int xs = static_cast<int>(std::count_if(a.begin(), a.end(), [&](int v) { return is_x[v]; }));
    ++rep.mixed_subsets_checked;
    if (oracle.Rank(a) < r * xs) {
      if (rep.membership) rep.failures.push_back("(3) sampled " + Join(LabelsOf(arr, a), ","));
      rep.membership = false;
    }
  }

  for (size_t v = 0; v < g.num_nodes(); ++v) {
    const int node = static_cast<int>(v);
    std::vector<int> in, out;
    for (int e : g.in_edges(node)) in.push_back(ia.y_members[e]);
    for (int e : g.out_edges(node)) out.push_back(ia.y_members[e]);
    const int s = g.SourceSlotOfNode(node);
    if (s >= 0) in.push_back(ia.x_members[s]);
    const int t = g.TerminalSlotOfNode(node);
    if (t >= 0) {
      for (int slot : g.DemandSlots(t)) out.push_back(ia.x_members[slot]);
    }
    std::vector<int> both = in;
    both.insert(both.end(), out.begin(), out.end());
    ++rep.nodes_checked;
    if (oracle.Rank(in) != oracle.Rank(both)) {
      rep.node_closure = false;
      rep.failures.push_back("(4) at node " + g.node_name(node));
    }
  }
  return rep;
}

NwayResult NwaySubmodularity(const RankOracle& oracle, const std::vector<std::string>& a,
                             const std::vector<std::vector<std::string>>& bs) {
  NwayResult res;
  const std::vector<int> base = oracle.Resolve(a);
  std::vector<int> all = base;
  for (const auto& b : bs) {
    std::vector<int> ab = base;
    for (int v : oracle.Resolve(b)) {
      ab.push_back(v);
      all.push_back(v);
    }
    res.lhs += oracle.Rank(ab);
  }
  const int64_t n = static_cast<int64_t>(bs.size());
  res.rhs = oracle.Rank(all) + (n - 1) * oracle.Rank(base);
  return res;
}

bool ClaimsReport::ok() const {
  return fin_exact && divisible &&
         std::all_of(claims.begin(), claims.end(), [](const ClaimCheck& c) { return c.pass; });
}

ClaimsReport CheckClaims(const NetworkGraph& g, const FractionalLinearCode& code,
                         const ClaimsOptions& opts) {
  if (!g.annotations || g.annotations->family != "m_network") {
    throw std::invalid_argument("claims need an annotated m_network instance");
  }
  const int m = g.annotations->m;
  const int n = g.annotations->n;
  const int d = code.dims.r;
  if (code.dims.l != n * d) {
    throw std::invalid_argument("claims need dims (d, n*d); got (" + std::to_string(d) + ", " +
                                std::to_string(code.dims.l) + ")");
  }
  const InducedArrangement ia = InduceArrangement(g, code, GroundScope::kFamily);
  const RankOracle oracle(ia.arrangement);
  const SubspaceArrangement& arr = ia.arrangement;
  const int mn = m * n;
  const int64_t nd = static_cast<int64_t>(n) * d;

  // y_[i][j]: bottleneck member u_i -> v_j; x_[i][j]: message member.
  std::vector<std::vector<int>> y(m + 1, std::vector<int>(2 * m, -1));
  std::vector<std::vector<int>> x(m + 1, std::vector<int>(mn + 1, -1));
  for (size_t e = 0; e < g.num_edges(); ++e) {
    const EdgeTag& t = g.annotations->edge_tags[e];
    if (ia.y_members[e] >= 0) y[t.i][t.j] = ia.y_members[e];
  }
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= mn; ++j) x[i][j] = ia.ground_map.at(MessageName(i, j));
  }
  auto with_y = [&](int i, const std::vector<int>& js) {
    std::vector<int> s{y[i][i]};
    for (int j : js) s.push_back(x[i][j]);
    return s;
  };
  auto describe = [&](const std::vector<int>& members) { return Join(LabelsOf(arr, members), "+"); };

  ClaimsReport rep;
  rep.m = m;
  rep.n = n;
  rep.d = d;
  rep.note = "final-identity index range taken as 1 <= j <= mn";
  std::mt19937_64 rng(opts.seed);

  // C1: additivity across sets for arbitrary subsets Q_i.
  {
    ClaimTracker c1("C1", "sum_i g(Y_ii, X_Qi) = g(Y_11, X_Q1, ..., Y_mm, X_Qm)");
    std::vector<std::vector<int>> per_set(m + 1, std::vector<int>(uint64_t{1} << mn));
    for (int i = 1; i <= m; ++i) {
      for (uint64_t q = 0; q < (uint64_t{1} << mn); ++q) {
        std::vector<int> js;
        for (int j = 1; j <= mn; ++j) {
          if (q >> (j - 1) & 1) js.push_back(j);
        }
        per_set[i][q] = oracle.Rank(with_y(i, js));
      }
    }
    const int bits = m * mn;
    const bool full = bits < 63 && (uint64_t{1} << bits) <= opts.subset_tuple_limit;
    const uint64_t count = full ? (uint64_t{1} << bits) : opts.samples;
    c1.check().sampled = !full;
    const uint64_t set_mask = (uint64_t{1} << mn) - 1;
    for (uint64_t it = 0; it < count; ++it) {
      const uint64_t tuple = full ? it : (rng() & ((bits >= 64) ? ~uint64_t{0} : ((uint64_t{1} << bits) - 1)));
      int64_t lhs = 0;
      std::vector<int> all;
      for (int i = 1; i <= m; ++i) {
        const uint64_t q = tuple >> ((i - 1) * mn) & set_mask;
        lhs += per_set[i][q];
        std::vector<int> js;
        for (int j = 1; j <= mn; ++j) {
          if (q >> (j - 1) & 1) js.push_back(j);
        }
        for (int v : with_y(i, js)) all.push_back(v);
      }
      const int64_t rhs = oracle.Rank(all);
      c1.Record(-m * std::abs(lhs - rhs), [&] { return std::vector<std::string>{describe(all)}; });
    }
    rep.claims.push_back(c1.check());
  }

  const std::vector<std::vector<int>> n_subsets = Subsets(mn, n);
  const uint64_t radix = n_subsets.size();

  // C2: sum over sets of g(Y_ii, X_Pi) with |P_i| = n.
  {
    ClaimTracker c2("C2", "sum_i g(Y_ii, X_Pi) <= (2m-1)nd for n-subsets P_i");
    std::vector<std::vector<int>> per_set(m + 1, std::vector<int>(radix));
    for (int i = 1; i <= m; ++i) {
      for (uint64_t s = 0; s < radix; ++s) per_set[i][s] = oracle.Rank(with_y(i, n_subsets[s]));
    }
    uint64_t total = 1;
    bool overflow = false;
    for (int i = 0; i < m; ++i) {
      if (total > opts.enumeration_limit) overflow = true;
      total *= radix;
    }
    const bool full = !overflow && total <= opts.enumeration_limit;
    c2.check().sampled = !full;
    const uint64_t count = full ? total : opts.samples;
    const int64_t bound = (2 * m - 1) * nd;
    for (uint64_t it = 0; it < count; ++it) {
      std::vector<uint64_t> digits(m + 1);
      uint64_t idx = it;
      for (int i = m; i >= 1; --i) {
        digits[i] = full ? idx % radix : rng() % radix;
        idx /= radix;
      }
      int64_t sum = 0;
      for (int i = 1; i <= m; ++i) sum += per_set[i][digits[i]];
      c2.Record(m * (bound - sum), [&] {
        std::vector<std::string> parts;
        for (int i = 1; i <= m; ++i) parts.push_back(describe(with_y(i, n_subsets[digits[i]])));
        return parts;
      });
    }
    rep.claims.push_back(c2.check());
  }

  // C3: ordered partitions of each set into m blocks of n.
  {
    ClaimTracker c3("C3", "sum_j g(Y_ii, X_Uij) >= (2m-1)nd over partitions; g(Y_ii) = g(Y_ij) = nd");
    for (int i = 1; i <= m; ++i) {
      for (int j = 1; j < 2 * m; ++j) {
        if (j != i && j <= m) continue;
        const int got = oracle.Rank(std::vector<int>{y[i][j]});
        if (got != nd) {
          c3.Fail("g(" + arr.labels[y[i][j]] + ") = " + std::to_string(got) + ", expected " +
                  std::to_string(nd));
        }
      }
    }
    // (mn)! / (n!)^m ordered partitions.
    uint64_t partitions = 1;
    bool overflow = false;
    for (int b = 0; b < m && !overflow; ++b) {
      const uint64_t c = Binomial(mn - b * n, n);
      if (partitions > opts.enumeration_limit) overflow = true;
      partitions *= c;
    }
    const bool full = !overflow && partitions <= opts.enumeration_limit;
    c3.check().sampled = !full;
    const int64_t bound = (2 * m - 1) * nd;
    for (int i = 1; i <= m; ++i) {
      auto score = [&](const std::vector<std::vector<int>>& blocks) {
        int64_t sum = 0;
        for (const auto& blk : blocks) sum += oracle.Rank(with_y(i, blk));
        c3.Record(m * (sum - bound), [&] {
          std::vector<std::string> parts;
          for (const auto& blk : blocks) parts.push_back(describe(with_y(i, blk)));
          return parts;
        });
      };
      if (full) {
        std::vector<std::vector<int>> blocks;
        std::vector<bool> used(mn + 1, false);
        std::function<void()> rec = [&] {
          if (static_cast<int>(blocks.size()) == m) {
            score(blocks);
            return;
          }
          std::vector<int> free;
          for (int j = 1; j <= mn; ++j) {
            if (!used[j]) free.push_back(j);
          }
          for (const auto& pick : Subsets(static_cast<int>(free.size()), n)) {
            std::vector<int> blk;
            for (int p : pick) blk.push_back(free[p - 1]);
            for (int j : blk) used[j] = true;
            blocks.push_back(blk);
            rec();
            blocks.pop_back();
            for (int j : blk) used[j] = false;
          }
        };
        rec();
      } else {
        std::vector<int> perm(mn);
        std::iota(perm.begin(), perm.end(), 1);
        for (uint64_t s = 0; s < opts.samples; ++s) {
          std::shuffle(perm.begin(), perm.end(), rng);
          std::vector<std::vector<int>> blocks(m);
          for (int b = 0; b < m; ++b) {
            blocks[b].assign(perm.begin() + b * n, perm.begin() + (b + 1) * n);
            std::sort(blocks[b].begin(), blocks[b].end());
          }
          score(blocks);
        }
      }
    }
    rep.claims.push_back(c3.check());
  }

  // C4 and C5: bounds on g(Y_ii, X_V) for |V| = y <= n; C4 is y = n.
  {
    ClaimTracker c4("C4", "g(Y_ii, X_R) <= (2m-1)nd/m for n-subsets R");
    ClaimTracker c5("C5", "g(Y_ii, X_V) <= (nm+ym-y)d/m for y-subsets V, 1 <= y <= n");
    for (int i = 1; i <= m; ++i) {
      for (const auto& r : n_subsets) {
        const auto s = with_y(i, r);
        c4.Record((2 * m - 1) * nd - m * static_cast<int64_t>(oracle.Rank(s)),
                  [&] { return std::vector<std::string>{describe(s)}; });
      }
      for (int yy = 1; yy <= n; ++yy) {
        for (const auto& v : Subsets(mn, yy)) {
          const auto s = with_y(i, v);
          const int64_t bound = static_cast<int64_t>(n * m + yy * m - yy) * d;
          c5.Record(bound - m * static_cast<int64_t>(oracle.Rank(s)),
                    [&] { return std::vector<std::string>{describe(s)}; });
        }
      }
    }
    rep.claims.push_back(c4.check());
    rep.claims.push_back(c5.check());
  }

  // FIN: g(Y_ii, X_ij) = (nm+m-1)d/m exactly.
  {
    ClaimTracker fin("FIN", "g(Y_ii, X_ij) = (nm+m-1)d/m");
    const int64_t target = static_cast<int64_t>(n * m + m - 1) * d;
    rep.fin_expected = Rational{target, m}.Reduced();
    rep.fin_exact = true;
    for (int i = 1; i <= m; ++i) {
      for (int j = 1; j <= mn; ++j) {
        const auto s = with_y(i, {j});
        const int v = oracle.Rank(s);
        if (std::find(rep.fin_values.begin(), rep.fin_values.end(), v) == rep.fin_values.end()) {
          rep.fin_values.push_back(v);
        }
        const int64_t gap = target - m * static_cast<int64_t>(v);
        if (gap != 0) rep.fin_exact = false;
        fin.Record(-std::abs(gap), [&] { return std::vector<std::string>{describe(s)}; });
      }
    }
    std::sort(rep.fin_values.begin(), rep.fin_values.end());
    rep.claims.push_back(fin.check());
  }
  rep.divisible = d % m == 0;
  return rep;
}

nlohmann::json AxiomReportToJson(const AxiomReport& r) {
  nlohmann::json j;
  j["pass"] = r.pass;
  j["mode"] = r.mode;
  j["checks"] = r.checks;
  if (r.mode == "sampled") j["seed"] = r.seed;
  if (!r.component_sizes.empty()) j["component_sizes"] = r.component_sizes;
  if (!r.pass) {
    j["failed_axiom"] = r.failed_axiom;
    j["counterexample"] = {{"A", r.a}, {"B", r.b}};
  }
  return j;
}

nlohmann::json DpmReportToJson(const DpmReport& r) {
  nlohmann::json j;
  j["pass"] = r.ok();
  j["conditions"] = {{"1_one_to_one", r.one_to_one},
                     {"2_ranks", r.ranks},
                     {"3_membership", r.membership},
                     {"4_node_closure", r.node_closure}};
  j["x_subsets_checked"] = r.x_subsets_checked;
  j["mixed_subsets_checked"] = r.mixed_subsets_checked;
  j["mixed_sampling"] = r.mixed_sampling;
  j["seed"] = r.seed;
  j["nodes_checked"] = r.nodes_checked;
  j["failures"] = r.failures;
  return j;
}

nlohmann::json ClaimsReportToJson(const ClaimsReport& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["note"] = r.note;
  j["m"] = r.m;
  j["n"] = r.n;
  j["d"] = r.d;
  j["pass"] = r.ok();
  j["claims"] = nlohmann::json::array();
  for (const ClaimCheck& c : r.claims) {
    nlohmann::json cj = {{"name", c.name},
                         {"statement", c.statement},
                         {"pass", c.pass},
                         {"sampled", c.sampled},
                         {"instances", c.instances},
                         {"tightest_slack_over_m", c.tightest_slack},
                         {"extremal", c.extremal}};
    if (!c.failure.empty()) cj["failure"] = c.failure;
    j["claims"].push_back(std::move(cj));
  }
  j["fin_values"] = r.fin_values;
  j["fin_expected"] = r.fin_expected.ToString();
  j["fin_exact"] = r.fin_exact;
  j["divisible"] = r.divisible;
  return j;
}

}  // namespace lncw
