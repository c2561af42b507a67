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

#include "lncw/solver.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "lncw/family.h"
#include "lncw/gf2.h"

namespace lncw {

namespace {

// Echelon basis over a general prime field, kept fully reduced so a single
// pass over the rows reduces any vector.
class FpBasis {
 public:
  using Vec = std::vector<Residue>;

  FpBasis(const Fq& field, size_t n) : field_(field), n_(n) {}

  Vec Reduce(Vec v) const {
    for (size_t k = 0; k < rows_.size(); ++k) {
      const Residue c = v[pivots_[k]];
      if (c == 0) continue;
      const Residue neg = field_.Neg(c);
      for (size_t x = 0; x < n_; ++x) {
        if (rows_[k][x]) v[x] = field_.Add(v[x], field_.Mul(neg, rows_[k][x]));
      }
    }
    return v;
  }

  bool Contains(const Vec& v) const { return IsZero(Reduce(v)); }

  bool Insert(Vec v) {
    v = Reduce(std::move(v));
    size_t piv = 0;
    while (piv < n_ && v[piv] == 0) ++piv;
    if (piv == n_) return false;
    const Residue inv = field_.Inv(v[piv]);
    for (Residue& x : v) x = field_.Mul(x, inv);
    for (Vec& row : rows_) {
      const Residue c = row[piv];
      if (c == 0) continue;
      const Residue neg = field_.Neg(c);
      for (size_t x = 0; x < n_; ++x) {
        if (v[x]) row[x] = field_.Add(row[x], field_.Mul(neg, v[x]));
      }
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }

  int dim() const { return static_cast<int>(rows_.size()); }

  static bool IsZero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
  }

 private:
  Fq field_;
  size_t n_;
  std::vector<Vec> rows_;
  std::vector<size_t> pivots_;
};

struct PackedOps {
  using Vec = uint64_t;
  using Basis = Gf2Basis;

  Basis Empty() const { return Basis(); }
  static bool IsZero(Vec v) { return v == 0; }
  Vec Row(const FqMatrix& m, size_t r) const {
    Vec v = 0;
    for (size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c)) v |= uint64_t{1} << c;
    }
    return v;
  }
  Vec Combine(const FqMatrix& coef, size_t row, const std::vector<Vec>& vecs) const {
    Vec v = 0;
    for (size_t k = 0; k < vecs.size(); ++k) {
      if (coef(row, k)) v ^= vecs[k];
    }
    return v;
  }
};

struct FpOps {
  using Vec = FpBasis::Vec;
  using Basis = FpBasis;

  Fq field;
  size_t n;

  Basis Empty() const { return Basis(field, n); }
  static bool IsZero(const Vec& v) { return FpBasis::IsZero(v); }
  Vec Row(const FqMatrix& m, size_t r) const {
    auto row = m.Row(r);
    return Vec(row.begin(), row.end());
  }
  Vec Combine(const FqMatrix& coef, size_t row, const std::vector<Vec>& vecs) const {
    Vec v(n, 0);
    for (size_t k = 0; k < vecs.size(); ++k) {
      const Residue a = coef(row, k);
      if (a == 0) continue;
      for (size_t x = 0; x < n; ++x) v[x] = field.Add(v[x], field.Mul(a, vecs[k][x]));
    }
    return v;
  }
};

// Coefficient subspaces: all d-dimensional subspaces of F^c with d = min(l, c).
class CoefTable {
 public:
  CoefTable(const Fq& field, int l, int max_c) : l_(l) {
    for (int c = 0; c <= std::min(max_c, 16); ++c) {
      const int d = std::min(l, c);
      table_.push_back(d < c ? EnumerateRowspaces(c, d, field) : std::vector<FqMatrix>{});
    }
  }
  int l() const { return l_; }
  const std::vector<FqMatrix>& Get(int c) const {
    if (c >= static_cast<int>(table_.size())) {
      throw BudgetExceeded("mixer input dimension " + std::to_string(c) + " too large to enumerate",
                           std::numeric_limits<uint64_t>::max());
    }
    return table_[c];
  }

 private:
  int l_;
  std::vector<std::vector<FqMatrix>> table_;
};

// Decides coverage in the quotient by the relayed span B. `demand` holds the
// B-reduced demanded rows (possibly dependent), `mixers` an independent
// B-reduced spanning set of each C_j, and `all_mixers` the basis of their sum.
template <class Ops>
class QuotientDecider {
 public:
  using Vec = typename Ops::Vec;
  using Basis = typename Ops::Basis;

  QuotientDecider(const Ops& ops, const CoefTable& table) : ops_(ops), table_(table) {}

  bool Decide(const std::vector<Vec>& demand, const std::vector<std::vector<Vec>>& mixers,
              const Basis& all_mixers) const {
    Basis span = ops_.Empty();
    for (const Vec& d : demand) span.Insert(d);
    if (span.dim() == 0) return true;
    if (mixers.empty()) return false;
    for (const Vec& d : demand) {
      if (!all_mixers.Contains(d)) return false;
    }
    if (span.dim() > static_cast<int>(mixers.size()) * table_.l()) return false;
    return Rec(0, ops_.Empty(), demand, mixers);
  }

 private:
  bool Rec(size_t h, const Basis& w, const std::vector<Vec>& demand,
           const std::vector<std::vector<Vec>>& mixers) const {
    if (std::all_of(demand.begin(), demand.end(), [&](const Vec& d) { return w.Contains(d); })) {
      return true;
    }
    const auto& inputs = mixers[h];
    if (h + 1 == mixers.size()) {
      Basis image = ops_.Empty();
      for (const Vec& v : inputs) image.Insert(w.Reduce(v));
      Basis need = ops_.Empty();
      for (const Vec& d : demand) {
        Vec r = w.Reduce(d);
        if (!image.Contains(r)) return false;
        need.Insert(std::move(r));
      }
      return need.dim() <= table_.l();
    }
    const int c = static_cast<int>(inputs.size());
    if (std::min(table_.l(), c) == c) {
      Basis next = w;
      for (const Vec& v : inputs) next.Insert(v);
      return Rec(h + 1, next, demand, mixers);
    }
    for (const FqMatrix& coef : table_.Get(c)) {
      Basis next = w;
      for (size_t row = 0; row < coef.rows(); ++row) next.Insert(ops_.Combine(coef, row, inputs));
      if (Rec(h + 1, next, demand, mixers)) return true;
    }
    return false;
  }

  const Ops& ops_;
  const CoefTable& table_;
};

template <class Ops>
bool DecideFromMatrices(const Ops& ops, const CoefTable& table,
                        const std::vector<FqMatrix>& relayed,
                        const std::vector<FqMatrix>& mixer_inputs, const FqMatrix& demand) {
  using Vec = typename Ops::Vec;
  typename Ops::Basis b = ops.Empty();
  for (const FqMatrix& m : relayed) {
    for (size_t r = 0; r < m.rows(); ++r) b.Insert(ops.Row(m, r));
  }
  std::vector<std::vector<Vec>> mixers;
  typename Ops::Basis all = ops.Empty();
  for (const FqMatrix& m : mixer_inputs) {
    typename Ops::Basis local = ops.Empty();
    std::vector<Vec> vecs;
    for (size_t r = 0; r < m.rows(); ++r) {
      Vec v = b.Reduce(ops.Row(m, r));
      if (local.Insert(v)) {
        all.Insert(v);
        vecs.push_back(std::move(v));
      }
    }
    mixers.push_back(std::move(vecs));
  }
  std::vector<Vec> d;
  for (size_t r = 0; r < demand.rows(); ++r) {
    Vec v = b.Reduce(ops.Row(demand, r));
    if (!Ops::IsZero(v)) d.push_back(std::move(v));
  }
  return QuotientDecider<Ops>(ops, table).Decide(d, mixers, all);
}

void CheckConformable(const std::vector<FqMatrix>& relayed,
                      const std::vector<FqMatrix>& mixer_inputs, const FqMatrix& demand,
                      int l) {
  if (l < 0) throw std::invalid_argument("l must be nonnegative");
  auto check = [&](const FqMatrix& m) {
    if (m.cols() != demand.cols() || !(m.field() == demand.field())) {
      throw std::invalid_argument("ambient mismatch: " + std::to_string(m.cols()) + " vs " +
                                  std::to_string(demand.cols()) + " columns");
    }
  };
  for (const auto& m : relayed) check(m);
  for (const auto& m : mixer_inputs) check(m);
}

// Per-configuration evaluator over precomputed option rows.
template <class Ops>
class ConfigEvaluator {
 public:
  using Vec = typename Ops::Vec;

  ConfigEvaluator(const SearchSpace& space, Ops ops)
      : ops_(std::move(ops)),
        table_(space.field(), space.dims().l,
               space.m() > 2 ? std::min<int>(space.m() * space.dims().l,
                                             space.GlobalPayload(0, 0).cols())
                             : 0),
        decider_(ops_, table_) {
    const NetworkGraph& g = space.network();
    const int m = space.m();
    const size_t positions = space.bottleneck_edges().size();
    rows_.resize(positions);
    for (size_t p = 0; p < positions; ++p) {
      for (size_t o = 0; o < space.options(p).size(); ++o) {
        const FqMatrix payload = space.GlobalPayload(p, o);
        std::vector<Vec> rows;
        for (size_t r = 0; r < payload.rows(); ++r) rows.push_back(ops_.Row(payload, r));
        rows_[p].push_back(std::move(rows));
      }
      if (space.head_of(p) <= m) {
        relays_.push_back(p);
      }
    }
    mixers_.resize(m - 1);
    for (size_t p = 0; p < positions; ++p) {
      if (space.head_of(p) > m) mixers_[space.head_of(p) - m - 1].push_back(p);
    }
    const MessageLayout layout = MakeLayout(g, space.dims().r);
    for (size_t t = 0; t < g.terminals().size(); ++t) {
      const FqMatrix sel = DemandSelection(g, layout, space.field(), static_cast<int>(t));
      std::vector<Vec> rows;
      for (size_t r = 0; r < sel.rows(); ++r) rows.push_back(ops_.Row(sel, r));
      demands_.push_back(std::move(rows));
    }
  }

  bool Check(const std::vector<size_t>& choice) const {
    typename Ops::Basis b = ops_.Empty();
    for (size_t p : relays_) {
      for (const Vec& v : rows_[p][choice[p]]) b.Insert(v);
    }
    std::vector<std::vector<Vec>> mixers(mixers_.size());
    typename Ops::Basis all = ops_.Empty();
    for (size_t h = 0; h < mixers_.size(); ++h) {
      typename Ops::Basis local = ops_.Empty();
      for (size_t p : mixers_[h]) {
        for (const Vec& row : rows_[p][choice[p]]) {
          Vec v = b.Reduce(row);
          if (local.Insert(v)) {
            all.Insert(v);
            mixers[h].push_back(std::move(v));
          }
        }
      }
    }
    std::vector<Vec> d;
    for (const auto& demand : demands_) {
      d.clear();
      for (const Vec& row : demand) {
        Vec v = b.Reduce(row);
        if (!Ops::IsZero(v)) d.push_back(std::move(v));
      }
      if (!decider_.Decide(d, mixers, all)) return false;
    }
    return true;
  }

 private:
  Ops ops_;
  CoefTable table_;
  QuotientDecider<Ops> decider_;
  std::vector<std::vector<std::vector<Vec>>> rows_;  // position -> option -> rows
  std::vector<size_t> relays_;
  std::vector<std::vector<size_t>> mixers_;  // mixer -> positions
  std::vector<std::vector<Vec>> demands_;
};

// Smallest feasible index in [0, size), or size when none. Every index below
// the returned one is checked.
template <class Eval>
uint64_t ParallelScan(const Eval& eval, const SearchSpace& space, uint64_t size, int threads) {
  constexpr uint64_t kChunk = 4096;
  std::atomic<uint64_t> next{0};
  std::atomic<uint64_t> best{size};
  std::vector<size_t> radix;
  for (size_t p = 0; p < space.bottleneck_edges().size(); ++p) {
    radix.push_back(space.options(p).size());
  }
  auto worker = [&] {
    for (;;) {
      const uint64_t start = next.fetch_add(kChunk);
      if (start >= size || start >= best.load()) return;
      const uint64_t end = std::min(size, start + kChunk);
      std::vector<size_t> choice = space.Decode(start);
      for (uint64_t x = start; x < end; ++x) {
        if (x >= best.load(std::memory_order_relaxed)) break;
        if (eval.Check(choice)) {
          uint64_t cur = best.load();
          while (x < cur && !best.compare_exchange_weak(cur, x)) {
          }
          break;
        }
        for (size_t p = radix.size(); p-- > 0;) {
          if (++choice[p] < radix[p]) break;
          choice[p] = 0;
        }
      }
    }
  };
  const int workers = std::max(1, threads);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return best.load();
}

bool UsePacked(const SearchSpace& space, bool allowed) {
  return allowed && space.field().modulus() == 2 && space.GlobalPayload(0, 0).cols() <= 64;
}

std::vector<FqMatrix> RoutingOptions(const Fq& field, int width, int l) {
  const int d = std::min(l, width);
  std::vector<FqMatrix> out;
  std::vector<int> pick(d);
  for (int a = 0; a < d; ++a) pick[a] = a;
  for (;;) {
    FqMatrix sel(field, d, width);
    for (int a = 0; a < d; ++a) sel(a, pick[a]) = 1;
    out.push_back(std::move(sel));
    int a = d - 1;
    while (a >= 0 && pick[a] == width - d + a) --a;
    if (a < 0) break;
    ++pick[a];
    for (int b = a + 1; b < d; ++b) pick[b] = pick[b - 1] + 1;
  }
  return out;
}

FqMatrix PadRows(const FqMatrix& m, size_t rows) {
  FqMatrix out(m.field(), rows, m.cols());
  out.SetBlock(0, 0, m);
  return out;
}

std::string NetworkId(const NetworkGraph& g) {
  if (!g.annotations) return "unannotated";
  const FamilyAnnotations& a = *g.annotations;
  std::string id = a.family + "(m=" + std::to_string(a.m) + ",n=" + std::to_string(a.n);
  if (a.family == "parallel") id += ",k=" + std::to_string(a.k);
  return id + ")";
}

}  // namespace

std::string ToString(SearchMode mode) {
  return mode == SearchMode::kExhaustive ? "exhaustive" : "routing";
}

std::string ToString(SearchOutcome outcome) {
  switch (outcome) {
    case SearchOutcome::kFeasible:
      return "feasible";
    case SearchOutcome::kInfeasible:
      return "infeasible";
    case SearchOutcome::kBudgetExhausted:
      return "budget-exhausted";
  }
  return "unknown";
}

SearchMode ParseSearchMode(const std::string& name) {
  if (name == "exhaustive") return SearchMode::kExhaustive;
  if (name == "routing") return SearchMode::kRouting;
  throw std::invalid_argument("unknown search mode " + name);
}

SearchSpace::SearchSpace(const NetworkGraph& g, CodeDims dims, const Fq& field, SearchMode mode,
                         bool claims_prune, uint64_t enumeration_budget)
    : g_(&g), field_(field), dims_(dims) {
  if (!g.annotations || g.annotations->family != "m_network") {
    throw std::invalid_argument("search needs an annotated m_network instance");
  }
  if (dims.r < 1 || dims.l < dims.r) {
    throw std::invalid_argument("search needs 1 <= r <= l (got r=" + std::to_string(dims.r) +
                                ", l=" + std::to_string(dims.l) + ")");
  }
  const FamilyAnnotations& ann = *g.annotations;
  m_ = ann.m;
  n_ = ann.n;
  const MessageLayout layout = MakeLayout(g, dims.r);
  ambient_ = layout.width();
  block_width_ = dims.r * m_ * n_;
  block_offset_.assign(m_ + 1, 0);
  for (int i = 1; i <= m_; ++i) {
    block_offset_[i] = layout.offset(g.SourceSlotOfMessage(MessageName(i, 1)));
    for (int j = 1; j <= m_ * n_; ++j) {
      if (layout.offset(g.SourceSlotOfMessage(MessageName(i, j))) !=
          block_offset_[i] + (j - 1) * dims.r) {
        throw std::invalid_argument("sources of set " + std::to_string(i) + " are not contiguous");
      }
    }
  }

  std::vector<FqMatrix> opts;
  if (mode == SearchMode::kRouting) {
    opts = RoutingOptions(field, block_width_, dims.l);
  } else {
    const int top = std::min(dims.l, block_width_);
    const int bottom = claims_prune ? top : 1;
    for (int d = top; d >= bottom; --d) {
      auto level = EnumerateRowspaces(block_width_, d, field, enumeration_budget);
      if (opts.size() + level.size() > enumeration_budget) {
        throw BudgetExceeded("per-edge option list exceeds budget", opts.size() + level.size());
      }
      for (auto& m : level) opts.push_back(std::move(m));
    }
  }
  for (size_t e = 0; e < g.num_edges(); ++e) {
    const EdgeTag& tag = ann.edge_tags[e];
    if (tag.role != EdgeRole::kBottleneckDirect && tag.role != EdgeRole::kBottleneckCross) continue;
    edges_.push_back(static_cast<int>(e));
    sets_.push_back(tag.i);
    heads_.push_back(tag.j);
    options_.push_back(opts);
  }
  if (edges_.size() != static_cast<size_t>(m_) * m_) {
    throw std::invalid_argument("network does not have m^2 bottleneck edges");
  }
}

std::optional<uint64_t> SearchSpace::size() const {
  uint64_t total = 1;
  for (const auto& o : options_) {
    if (o.empty()) return 0;
    if (total > std::numeric_limits<uint64_t>::max() / o.size()) return std::nullopt;
    total *= o.size();
  }
  return total;
}

std::vector<size_t> SearchSpace::Decode(uint64_t index) const {
  std::vector<size_t> choice(options_.size());
  for (size_t p = options_.size(); p-- > 0;) {
    choice[p] = index % options_[p].size();
    index /= options_[p].size();
  }
  if (index != 0) throw std::out_of_range("configuration index outside the space");
  return choice;
}

uint64_t SearchSpace::Encode(const std::vector<size_t>& choice) const {
  if (choice.size() != options_.size()) throw std::invalid_argument("choice length mismatch");
  uint64_t index = 0;
  for (size_t p = 0; p < options_.size(); ++p) {
    if (choice[p] >= options_[p].size()) throw std::out_of_range("option index out of range");
    index = index * options_[p].size() + choice[p];
  }
  return index;
}

FqMatrix SearchSpace::GlobalPayload(size_t position, size_t option) const {
  const FqMatrix& local = options_.at(position).at(option);
  FqMatrix out(field_, local.rows(), ambient_);
  out.SetBlock(0, block_offset_[sets_[position]], local);
  return out;
}

bool SearchSpace::CheckConfig(const std::vector<size_t>& choice) const {
  if (choice.size() != options_.size()) throw std::invalid_argument("choice length mismatch");
  if (UsePacked(*this, true)) return ConfigEvaluator<PackedOps>(*this, PackedOps{}).Check(choice);
  return ConfigEvaluator<FpOps>(*this, FpOps{field_, static_cast<size_t>(ambient_)}).Check(choice);
}

bool DecodableAtTerminal(const std::vector<FqMatrix>& relayed,
                         const std::vector<FqMatrix>& mixer_inputs, const FqMatrix& demand,
                         int l) {
  CheckConformable(relayed, mixer_inputs, demand, l);
  int max_c = 0;
  for (size_t h = 0; h + 1 < mixer_inputs.size(); ++h) {
    max_c = std::max<int>(max_c, mixer_inputs[h].rows());
  }
  max_c = std::min<int>(max_c, demand.cols());
  const CoefTable table(demand.field(), l, max_c);
  return DecideFromMatrices(FpOps{demand.field(), demand.cols()}, table, relayed, mixer_inputs,
                            demand);
}

std::optional<std::vector<FqMatrix>> MixerSpans(const std::vector<FqMatrix>& relayed,
                                                const std::vector<FqMatrix>& mixer_inputs,
                                                const FqMatrix& demand, int l) {
  CheckConformable(relayed, mixer_inputs, demand, l);
  const Fq f = demand.field();
  const size_t width = demand.cols();
  FqMatrix base(f, 0, width);
  for (const auto& m : relayed) base.AppendRows(m);
  if (mixer_inputs.empty()) {
    if (RowspaceContains(base, demand)) return std::vector<FqMatrix>{};
    return std::nullopt;
  }
  std::vector<FqMatrix> bases;
  for (const auto& m : mixer_inputs) bases.push_back(RowBasis(m));

  std::vector<FqMatrix> chosen;
  std::function<bool(const FqMatrix&)> rec = [&](const FqMatrix& z) -> bool {
    const size_t h = chosen.size();
    const FqMatrix& c = bases[h];
    if (h + 1 == bases.size()) {
      FqMatrix u(f, 0, width);
      FqMatrix zc = VStack(z, c);
      for (size_t r = 0; r < demand.rows(); ++r) {
        const FqMatrix d = demand.RowRange(r, r + 1);
        if (RowspaceContains(VStack(z, u), d)) continue;
        auto x = SolveLeft(zc, d);
        if (!x) return false;
        const FqMatrix part = x->ColRange(z.rows(), zc.rows()) * c;
        u.AppendRows(part);
      }
      if (static_cast<int>(u.rows()) > l) return false;
      chosen.push_back(std::move(u));
      return true;
    }
    const size_t dim = c.rows();
    const size_t d = std::min<size_t>(l, dim);
    std::vector<FqMatrix> coefs = d < dim ? EnumerateRowspaces(dim, d, f)
                                          : std::vector<FqMatrix>{FqMatrix::Identity(f, dim)};
    for (const FqMatrix& coef : coefs) {
      FqMatrix u = coef * c;
      chosen.push_back(u);
      if (rec(VStack(z, u))) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!rec(base)) return std::nullopt;
  return chosen;
}

FractionalLinearCode BuildWitness(const SearchSpace& space, const std::vector<size_t>& choice) {
  const NetworkGraph& g = space.network();
  const FamilyAnnotations& ann = *g.annotations;
  const Fq& f = space.field();
  const int r = space.dims().r;
  const int l = space.dims().l;
  const int m = space.m();

  FractionalLinearCode code;
  code.field = f;
  code.dims = space.dims();

  std::map<int, size_t> position_of;
  std::map<int, FqMatrix> payload;  // bottleneck edge -> l x W
  for (size_t p = 0; p < space.bottleneck_edges().size(); ++p) {
    const int e = space.bottleneck_edges()[p];
    position_of[e] = p;
    payload[e] = PadRows(space.GlobalPayload(p, choice.at(p)), l);
  }

  for (size_t e = 0; e < g.num_edges(); ++e) {
    const int edge = static_cast<int>(e);
    const EdgeTag& tag = ann.edge_tags[e];
    if (tag.role == EdgeRole::kSourceEdge) {
      FqMatrix a(f, l, r);
      for (int c = 0; c < r; ++c) a(c, c) = 1;
      code.source_edges.emplace(edge, std::move(a));
    } else if (tag.role == EdgeRole::kBottleneckDirect || tag.role == EdgeRole::kBottleneckCross) {
      const FqMatrix& local = space.options(position_of[edge])[choice[position_of[edge]]];
      auto& row = code.transfers[edge];
      for (int in : g.in_edges(g.edge(edge).tail)) {
        const int j = ann.edge_tags[in].j;
        FqMatrix t(f, l, l);
        t.SetBlock(0, 0, local.ColRange((j - 1) * r, j * r));
        row.emplace(in, std::move(t));
      }
    }
  }

  const MessageLayout layout = MakeLayout(g, r);
  for (size_t slot = 0; slot < g.terminals().size(); ++slot) {
    const int t = g.terminals()[slot].node;
    std::vector<FqMatrix> relayed;
    std::vector<int> mixer_nodes;
    std::vector<FqMatrix> mixer_inputs;
    for (int e : g.in_edges(t)) {
      const int v = g.edge(e).tail;
      const auto& ins = g.in_edges(v);
      if (ann.node_tags[v].i <= m) {
        relayed.push_back(payload.at(ins.front()));
        code.transfers[e].emplace(ins.front(), FqMatrix::Identity(f, l));
      } else {
        FqMatrix stacked(f, 0, layout.width());
        for (int in : ins) stacked.AppendRows(payload.at(in));
        mixer_nodes.push_back(e);
        mixer_inputs.push_back(std::move(stacked));
      }
    }
    const FqMatrix demand = DemandSelection(g, layout, f, static_cast<int>(slot));
    auto spans = MixerSpans(relayed, mixer_inputs, demand, l);
    if (!spans) {
      throw std::logic_error("configuration not decodable at " + g.node_name(t));
    }
    for (size_t h = 0; h < mixer_nodes.size(); ++h) {
      const int e = mixer_nodes[h];
      auto gmat = SolveLeft(mixer_inputs[h], PadRows((*spans)[h], l));
      if (!gmat) throw std::logic_error("mixer span outside its inputs");
      const auto& ins = g.in_edges(g.edge(e).tail);
      for (size_t q = 0; q < ins.size(); ++q) {
        code.transfers[e].emplace(ins[q], gmat->ColRange(q * l, (q + 1) * l));
      }
    }
  }

  DecoderSearch decoders = FindDecoders(g, code);
  if (!decoders.ok()) {
    throw std::logic_error("witness has no decoder at " + g.node_name(*decoders.first_failure));
  }
  code.decoders = std::move(decoders.decoders);
  if (!VerifySolution(g, code).ok()) throw std::logic_error("witness fails verification");
  return code;
}

SearchReport SearchFamily(const NetworkGraph& g, CodeDims dims, const Fq& field,
                          const SearchOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SearchReport report;
  report.network_id = NetworkId(g);
  report.dims = dims;
  report.p = field.modulus();
  report.mode = options.mode;
  report.claims_prune = options.claims_prune && options.mode == SearchMode::kExhaustive;
  report.reductions = {
      "source edges carry whole messages (l >= r)",
      "relays forward their single input unchanged",
      "mixer outputs chosen per terminal, existentially",
      options.mode == SearchMode::kRouting
          ? "bottleneck payloads restricted to l distinct coordinates of their source set"
          : "bottleneck payloads enumerated up to row space, zero subspace excluded",
  };
  if (report.claims_prune) report.reductions.push_back("bottleneck payloads of full rank only");

  auto finish = [&] {
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  std::optional<SearchSpace> space;
  try {
    space.emplace(g, dims, field, options.mode, report.claims_prune);
  } catch (const BudgetExceeded& e) {
    report.outcome = SearchOutcome::kBudgetExhausted;
    report.note = e.what();
    return finish();
  }
  for (size_t p = 0; p < space->bottleneck_edges().size(); ++p) {
    report.options_per_edge.push_back(space->options(p).size());
  }
  const std::optional<uint64_t> size = space->size();
  report.space_size = size.value_or(0);
  if (!size || *size > options.budget) {
    report.outcome = SearchOutcome::kBudgetExhausted;
    report.note = "configuration space exceeds budget " + std::to_string(options.budget);
    return finish();
  }

  uint64_t best = 0;
  try {
    if (UsePacked(*space, options.packed)) {
      ConfigEvaluator<PackedOps> eval(*space, PackedOps{});
      best = ParallelScan(eval, *space, *size, options.threads);
    } else {
      ConfigEvaluator<FpOps> eval(*space, FpOps{field, static_cast<size_t>(MakeLayout(g, dims.r).width())});
      best = ParallelScan(eval, *space, *size, options.threads);
    }
  } catch (const BudgetExceeded& e) {
    report.outcome = SearchOutcome::kBudgetExhausted;
    report.note = e.what();
    return finish();
  }

  if (best < *size) {
    report.outcome = SearchOutcome::kFeasible;
    report.configs_examined = best + 1;
    report.witness_config = space->Decode(best);
    report.witness = BuildWitness(*space, *report.witness_config);
  } else {
    report.outcome = SearchOutcome::kInfeasible;
    report.configs_examined = *size;
  }
  return finish();
}

nlohmann::json SearchReportToJson(const NetworkGraph& g, const SearchReport& report) {
  nlohmann::json j;
  j["schema"] = 1;
  j["network"] = report.network_id;
  j["r"] = report.dims.r;
  j["l"] = report.dims.l;
  j["p"] = report.p;
  j["mode"] = ToString(report.mode);
  j["claims_prune"] = report.claims_prune;
  j["outcome"] = ToString(report.outcome);
  j["configs_examined"] = report.configs_examined;
  j["space_size"] = report.space_size;
  j["options_per_edge"] = report.options_per_edge;
  j["reductions"] = report.reductions;
  if (!report.note.empty()) j["note"] = report.note;
  j["witness_config"] = report.witness_config ? nlohmann::json(*report.witness_config) : nlohmann::json();
  j["witness"] = report.witness ? CodeToJson(g, *report.witness) : nlohmann::json();
  return j;
}

}  // namespace lncw
