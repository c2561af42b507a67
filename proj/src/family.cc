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

#include "lncw/family.h"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

namespace lncw {

namespace {

using EdgeKey = std::tuple<int, int, int>;  // role, i, j

EdgeKey KeyOf(const EdgeTag& t) { return {static_cast<int>(t.role), t.i, t.j}; }

uint64_t CheckedMul(uint64_t a, uint64_t b) {
  if (a != 0 && b > std::numeric_limits<uint64_t>::max() / a) {
    throw std::overflow_error("count exceeds 2^64");
  }
  return a * b;
}

void CheckParams(int m, int n, int k) {
  if (m < 2 || n < 1 || k < 1) {
    throw std::invalid_argument("need m >= 2, n >= 1, k >= 1 (got m=" + std::to_string(m) +
                                ", n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
}

// Index of the n-subset `s` (sorted, 1-based) of {1..universe} in lex order.
uint64_t RankSubset(int universe, const std::vector<int>& s) {
  const int n = static_cast<int>(s.size());
  uint64_t rank = 0;
  int prev = 0;
  for (int a = 0; a < n; ++a) {
    for (int x = prev + 1; x < s[a]; ++x) rank += Binomial(universe - x, n - a - 1);
    prev = s[a];
  }
  return rank;
}

std::vector<int> UnrankSubset(int universe, int n, uint64_t rank) {
  std::vector<int> out;
  int x = 1;
  for (int a = 0; a < n; ++a) {
    for (;; ++x) {
      const uint64_t c = Binomial(universe - x, n - a - 1);
      if (rank < c) break;
      rank -= c;
    }
    out.push_back(x++);
  }
  return out;
}

NetworkGraph BuildFamily(int m, int n, int k, bool parallel, uint64_t terminal_budget) {
  CheckParams(m, n, k);
  uint64_t terminals = 0;
  try {
    terminals = TerminalCount(m, n);
  } catch (const std::overflow_error&) {
    throw BudgetExceeded("terminal count overflows 2^64", std::numeric_limits<uint64_t>::max());
  }
  if (terminals > terminal_budget) {
    throw BudgetExceeded("network needs " + std::to_string(terminals) +
                             " terminals, budget is " + std::to_string(terminal_budget),
                         terminals);
  }
  const int mn = m * n;
  const int copies = parallel ? k : 1;
  auto prefix = [&](int p) { return parallel ? "c" + std::to_string(p) + "." : std::string(); };

  NetworkGraph g;
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= mn; ++j) g.AddSource(g.AddNode(SourceName(i, j)), MessageName(i, j));
  }
  // u[p][i], v[p][j], 1-based.
  std::vector<std::vector<int>> u(copies + 1, std::vector<int>(m + 1));
  std::vector<std::vector<int>> v(copies + 1, std::vector<int>(2 * m));
  for (int p = 1; p <= copies; ++p) {
    for (int i = 1; i <= m; ++i) u[p][i] = g.AddNode(prefix(p) + "u_" + std::to_string(i));
    for (int j = 1; j < 2 * m; ++j) v[p][j] = g.AddNode(prefix(p) + "v_" + std::to_string(j));
  }
  const int first_terminal = static_cast<int>(g.num_nodes());
  for (uint64_t t = 0; t < terminals; ++t) g.AddNode("t_" + std::to_string(t));

  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= mn; ++j) {
      const int s = g.FindNode(SourceName(i, j));
      for (int p = 1; p <= copies; ++p) g.AddEdge(s, u[p][i]);
    }
  }
  for (int p = 1; p <= copies; ++p) {
    for (int i = 1; i <= m; ++i) {
      g.AddEdge(u[p][i], v[p][i]);
      for (int j = m + 1; j < 2 * m; ++j) g.AddEdge(u[p][i], v[p][j]);
    }
  }
  for (uint64_t t = 0; t < terminals; ++t) {
    const int node = first_terminal + static_cast<int>(t);
    for (int p = 1; p <= copies; ++p) {
      for (int j = 1; j < 2 * m; ++j) g.AddEdge(v[p][j], node);
    }
    std::vector<std::string> demands;
    const auto tuple = TerminalDemands(m, n, t);
    for (int i = 1; i <= m; ++i) {
      for (int j : tuple[i - 1]) demands.push_back(MessageName(i, j));
    }
    g.AddTerminal(node, std::move(demands));
  }

  FamilyAnnotations ann;
  ann.family = parallel ? "parallel" : "m_network";
  ann.m = m;
  ann.n = n;
  ann.k = parallel ? k : 1;
  DeriveFamilyTags(g, ann);
  g.annotations = std::move(ann);
  return g;
}

const FamilyAnnotations& RequireFamily(const NetworkGraph& g, const std::string& family) {
  if (!g.annotations || g.annotations->family != family) {
    throw std::invalid_argument("expected an annotated " + family + " network");
  }
  return *g.annotations;
}

std::map<EdgeKey, int> EdgeIndex(const FamilyAnnotations& ann) {
  std::map<EdgeKey, int> out;
  for (size_t e = 0; e < ann.edge_tags.size(); ++e) out[KeyOf(ann.edge_tags[e])] = static_cast<int>(e);
  return out;
}

FqMatrix Block(const FqMatrix& m, size_t r0, size_t r1, size_t c0, size_t c1) {
  return m.RowRange(r0, r1).ColRange(c0, c1);
}

// Position of the in-edge from middle node v_h within a base terminal's
// in-edge list.
size_t MiddlePosition(const NetworkGraph& base, int terminal, int h) {
  const auto& ins = base.in_edges(terminal);
  for (size_t b = 0; b < ins.size(); ++b) {
    if (base.annotations->edge_tags[ins[b]].i == h) return b;
  }
  throw std::logic_error("terminal lacks an edge from v_" + std::to_string(h));
}

}  // namespace

uint64_t Binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<uint64_t>::max()) throw std::overflow_error("binomial exceeds 2^64");
  }
  return static_cast<uint64_t>(acc);
}

uint64_t TerminalCount(int m, int n) {
  const uint64_t base = Binomial(static_cast<uint64_t>(m) * n, n);
  uint64_t out = 1;
  for (int i = 0; i < m; ++i) out = CheckedMul(out, base);
  return out;
}

std::string SourceName(int i, int j) { return "s_" + std::to_string(i) + "_" + std::to_string(j); }
std::string MessageName(int i, int j) { return "X_" + std::to_string(i) + "_" + std::to_string(j); }

NetworkGraph BuildMNetwork(int m, int n, uint64_t terminal_budget) {
  return BuildFamily(m, n, 1, false, terminal_budget);
}

NetworkGraph BuildParallel(int m, int n, int k, uint64_t terminal_budget) {
  return BuildFamily(m, n, k, true, terminal_budget);
}

std::vector<std::vector<int>> TerminalDemands(int m, int n, uint64_t index) {
  CheckParams(m, n, 1);
  const uint64_t total = TerminalCount(m, n);
  if (index >= total) {
    throw std::out_of_range("terminal index " + std::to_string(index) + " outside [0, " +
                            std::to_string(total) + ")");
  }
  const uint64_t radix = Binomial(static_cast<uint64_t>(m) * n, n);
  std::vector<std::vector<int>> out(m);
  for (int i = m - 1; i >= 0; --i) {
    out[i] = UnrankSubset(m * n, n, index % radix);
    index /= radix;
  }
  return out;
}

uint64_t TerminalIndex(int m, int n, const std::vector<std::vector<int>>& demands) {
  CheckParams(m, n, 1);
  if (static_cast<int>(demands.size()) != m) throw std::invalid_argument("need one demand set per source set");
  const uint64_t radix = Binomial(static_cast<uint64_t>(m) * n, n);
  uint64_t index = 0;
  for (const auto& set : demands) {
    if (static_cast<int>(set.size()) != n) throw std::invalid_argument("demand set size must be n");
    for (size_t a = 0; a < set.size(); ++a) {
      if (set[a] < 1 || set[a] > m * n || (a > 0 && set[a] <= set[a - 1])) {
        throw std::invalid_argument("demand set must be increasing within 1..mn");
      }
    }
    index = index * radix + RankSubset(m * n, set);
  }
  return index;
}

FractionalLinearCode RoutingCode(const NetworkGraph& g, const Fq& field) {
  const FamilyAnnotations& ann = RequireFamily(g, "m_network");
  const int m = ann.m;
  const int n = ann.n;
  const int r = m;
  const int l = m * n;

  FractionalLinearCode code;
  code.field = field;
  code.dims = {r, l};
  for (size_t e = 0; e < g.num_edges(); ++e) {
    const EdgeTag& tag = ann.edge_tags[e];
    const int tail = g.edge(static_cast<int>(e)).tail;
    if (tag.role == EdgeRole::kSourceEdge) {
      FqMatrix a(field, l, r);
      for (int c = 0; c < r; ++c) a(c, c) = 1;
      code.source_edges.emplace(static_cast<int>(e), std::move(a));
      continue;
    }
    auto& row = code.transfers[static_cast<int>(e)];
    switch (tag.role) {
      case EdgeRole::kBottleneckDirect:
      case EdgeRole::kBottleneckCross: {
        const int component = tag.j == tag.i ? 0 : tag.j - m;
        for (int in : g.in_edges(tail)) {
          FqMatrix a(field, l, l);
          a(ann.edge_tags[in].j - 1, component) = 1;
          row.emplace(in, std::move(a));
        }
        break;
      }
      case EdgeRole::kTerminalEdge: {
        const int h = tag.i;
        if (h <= m) {
          row.emplace(g.in_edges(tail).front(), FqMatrix::Identity(field, l));
          break;
        }
        const auto demands = TerminalDemands(m, n, tag.j);
        for (int in : g.in_edges(tail)) {
          const int i = ann.edge_tags[in].i;
          FqMatrix a(field, l, l);
          for (int d = 0; d < n; ++d) a((i - 1) * n + d, demands[i - 1][d] - 1) = 1;
          row.emplace(in, std::move(a));
        }
        break;
      }
      default:
        throw std::invalid_argument("edge " + std::to_string(e) + " has no family role");
    }
  }

  for (const TerminalEntry& t : g.terminals()) {
    const int index = ann.node_tags[t.node].terminal;
    const auto demands = TerminalDemands(m, n, index);
    const size_t cols = g.in_edges(t.node).size() * l;
    FqMatrix dec(field, static_cast<size_t>(r) * m * n, cols);
    size_t d = 0;
    for (int i = 1; i <= m; ++i) {
      for (int a = 0; a < n; ++a, ++d) {
        const int j = demands[i - 1][a];
        if (t.demands.at(d) != MessageName(i, j)) {
          throw std::invalid_argument("terminal " + g.node_name(t.node) +
                                      " does not carry the canonical demands");
        }
        for (int c = 0; c < r; ++c) {
          const int h = c == 0 ? i : m + c;
          const size_t slot = c == 0 ? j - 1 : (i - 1) * n + a;
          dec(d * r + c, MiddlePosition(g, t.node, h) * l + slot) = 1;
        }
      }
    }
    code.decoders.emplace(t.node, std::move(dec));
  }
  return code;
}

FractionalLinearCode ParallelRoutingCode(const NetworkGraph& parallel, int y, const Fq& field) {
  const FamilyAnnotations& ann = RequireFamily(parallel, "parallel");
  const int k = ann.k;
  if (y < 1 || ann.m != y * k) {
    throw std::invalid_argument("parallel routing needs m = y*k (m=" + std::to_string(ann.m) +
                                ", y=" + std::to_string(y) + ", k=" + std::to_string(k) + ")");
  }
  const NetworkGraph base =
      BuildMNetwork(ann.m, ann.n, std::numeric_limits<uint64_t>::max());
  const FractionalLinearCode full = RoutingCode(base, field);
  const std::map<EdgeKey, int> base_edge = EdgeIndex(*base.annotations);
  const int l = y * ann.n;

  FractionalLinearCode code;
  code.field = field;
  code.dims = {full.dims.r, l};
  for (size_t e = 0; e < parallel.num_edges(); ++e) {
    const EdgeTag& tag = ann.edge_tags[e];
    const int be = base_edge.at(KeyOf(tag));
    const size_t lo = static_cast<size_t>(tag.copy - 1) * l;
    if (tag.role == EdgeRole::kSourceEdge) {
      code.source_edges.emplace(static_cast<int>(e), full.source_edges.at(be).RowRange(lo, lo + l));
      continue;
    }
    auto& row = code.transfers[static_cast<int>(e)];
    for (int in : parallel.in_edges(parallel.edge(static_cast<int>(e)).tail)) {
      const int bin = base_edge.at(KeyOf(ann.edge_tags[in]));
      row.emplace(in, Block(full.transfers.at(be).at(bin), lo, lo + l, lo, lo + l));
    }
  }
  const int base_l = full.dims.l;
  for (const TerminalEntry& t : parallel.terminals()) {
    const int bnode = base.FindNode(parallel.node_name(t.node));
    const FqMatrix& bdec = full.decoders.at(bnode);
    const auto& ins = parallel.in_edges(t.node);
    FqMatrix dec(field, bdec.rows(), ins.size() * l);
    for (size_t q = 0; q < ins.size(); ++q) {
      const EdgeTag& tag = ann.edge_tags[ins[q]];
      const size_t src = MiddlePosition(base, bnode, tag.i) * base_l + (tag.copy - 1) * l;
      dec.SetBlock(0, q * l, bdec.ColRange(src, src + l));
    }
    code.decoders.emplace(t.node, std::move(dec));
  }
  return code;
}

FractionalLinearCode LiftToCopy(const NetworkGraph& base, const FractionalLinearCode& code,
                                const NetworkGraph& parallel, int copy) {
  const FamilyAnnotations& bann = RequireFamily(base, "m_network");
  const FamilyAnnotations& ann = RequireFamily(parallel, "parallel");
  if (bann.m != ann.m || bann.n != ann.n) throw std::invalid_argument("(m, n) mismatch");
  if (copy < 1 || copy > ann.k) throw std::invalid_argument("copy out of range");
  const std::map<EdgeKey, int> base_edge = EdgeIndex(bann);
  const Fq& f = code.field;
  const int r = code.dims.r;
  const int l = code.dims.l;

  FractionalLinearCode out;
  out.field = f;
  out.dims = code.dims;
  for (size_t e = 0; e < parallel.num_edges(); ++e) {
    const EdgeTag& tag = ann.edge_tags[e];
    const int be = base_edge.at(KeyOf(tag));
    const bool live = tag.copy == copy;
    if (tag.role == EdgeRole::kSourceEdge) {
      out.source_edges.emplace(static_cast<int>(e),
                               live ? code.source_edges.at(be) : FqMatrix(f, l, r));
      continue;
    }
    auto& row = out.transfers[static_cast<int>(e)];
    for (int in : parallel.in_edges(parallel.edge(static_cast<int>(e)).tail)) {
      const int bin = base_edge.at(KeyOf(ann.edge_tags[in]));
      row.emplace(in, live ? code.transfers.at(be).at(bin) : FqMatrix(f, l, l));
    }
  }
  for (const TerminalEntry& t : parallel.terminals()) {
    const int bnode = base.FindNode(parallel.node_name(t.node));
    const FqMatrix& bdec = code.decoders.at(bnode);
    const auto& ins = parallel.in_edges(t.node);
    FqMatrix dec(f, bdec.rows(), ins.size() * l);
    for (size_t q = 0; q < ins.size(); ++q) {
      const EdgeTag& tag = ann.edge_tags[ins[q]];
      if (tag.copy != copy) continue;
      const size_t src = MiddlePosition(base, bnode, tag.i) * l;
      dec.SetBlock(0, q * l, bdec.ColRange(src, src + l));
    }
    out.decoders.emplace(t.node, std::move(dec));
  }
  return out;
}

}  // namespace lncw
