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

#include "oracles.h"

#include <array>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace lncw::oracle {

namespace {

std::set<Vec> Span(const std::vector<Vec>& rows, uint32_t p, size_t cols) {
  uint64_t combos = 1;
  for (size_t i = 0; i < rows.size(); ++i) {
    combos *= p;
    if (combos > (uint64_t{1} << 22)) throw std::invalid_argument("span too large for oracle");
  }
  std::set<Vec> out;
  std::vector<uint32_t> coef(rows.size(), 0);
  for (uint64_t c = 0; c < combos; ++c) {
    uint64_t idx = c;
    for (auto& k : coef) {
      k = idx % p;
      idx /= p;
    }
    Vec v(cols, 0);
    for (size_t r = 0; r < rows.size(); ++r) {
      for (size_t j = 0; j < cols; ++j) v[j] = (v[j] + coef[r] * rows[r][j]) % p;
    }
    out.insert(std::move(v));
  }
  return out;
}

std::vector<Vec> RowsOf(const FqMatrix& m) {
  std::vector<Vec> out;
  for (size_t r = 0; r < m.rows(); ++r) {
    Vec v(m.cols());
    for (size_t c = 0; c < m.cols(); ++c) v[c] = m(r, c);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

int SpanRank(const FqMatrix& m) {
  const uint32_t p = m.field().modulus();
  size_t size = Span(RowsOf(m), p, m.cols()).size();
  int rank = 0;
  while (size > 1) {
    size /= p;
    ++rank;
  }
  return rank;
}

bool SpanContains(const FqMatrix& a, const FqMatrix& b) {
  const auto span = Span(RowsOf(a), a.field().modulus(), a.cols());
  for (const auto& row : RowsOf(b)) {
    if (!span.count(row)) return false;
  }
  return true;
}

uint64_t GaussianBinomialFormula(int n, int k, int q) {
  if (k < 0 || k > n) return 0;
  auto pw = [&](int e) {
    uint64_t v = 1;
    for (int i = 0; i < e; ++i) v *= q;
    return v;
  };
  // Accumulate numerator and denominator separately; exact for small inputs.
  unsigned __int128 num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= pw(n - i) - 1;
    den *= pw(k - i) - 1;
  }
  return static_cast<uint64_t>(num / den);
}

uint64_t CountSubspacesBySpans(int n, int k, int q) {
  uint64_t vectors = 1;
  for (int i = 0; i < n; ++i) vectors *= q;
  uint64_t tuples = 1;
  for (int i = 0; i < k; ++i) tuples *= vectors;
  uint64_t full = 1;
  for (int i = 0; i < k; ++i) full *= q;
  std::set<std::set<Vec>> spaces;
  for (uint64_t t = 0; t < tuples; ++t) {
    std::vector<Vec> rows(k, Vec(n));
    uint64_t idx = t;
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < n; ++c) {
        rows[r][c] = idx % q;
        idx /= q;
      }
    }
    auto span = Span(rows, q, n);
    if (span.size() == full) spaces.insert(std::move(span));
  }
  return spaces.size();
}

int64_t EdmondsKarp(int nodes, const std::vector<std::array<int64_t, 3>>& arcs, int s, int t) {
  // Arc 2a is forward, 2a+1 its residual twin.
  std::vector<int> to(2 * arcs.size()), next(2 * arcs.size()), first(nodes, -1);
  std::vector<int64_t> cap(2 * arcs.size());
  for (size_t a = 0; a < arcs.size(); ++a) {
    const int u = static_cast<int>(arcs[a][0]), v = static_cast<int>(arcs[a][1]);
    to[2 * a] = v;
    cap[2 * a] = arcs[a][2];
    next[2 * a] = first[u];
    first[u] = static_cast<int>(2 * a);
    to[2 * a + 1] = u;
    cap[2 * a + 1] = 0;
    next[2 * a + 1] = first[v];
    first[v] = static_cast<int>(2 * a + 1);
  }
  int64_t flow = 0;
  std::vector<int> prev_arc(nodes);
  for (;;) {
    std::fill(prev_arc.begin(), prev_arc.end(), -1);
    std::vector<char> seen(nodes, 0);
    seen[s] = 1;
    std::deque<int> queue{s};
    while (!queue.empty() && !seen[t]) {
      const int u = queue.front();
      queue.pop_front();
      for (int a = first[u]; a >= 0; a = next[a]) {
        if (cap[a] > 0 && !seen[to[a]]) {
          seen[to[a]] = 1;
          prev_arc[to[a]] = a;
          queue.push_back(to[a]);
        }
      }
    }
    if (!seen[t]) return flow;
    int64_t push = std::numeric_limits<int64_t>::max();
    for (int v = t; v != s; v = to[prev_arc[v] ^ 1]) push = std::min(push, cap[prev_arc[v]]);
    for (int v = t; v != s; v = to[prev_arc[v] ^ 1]) {
      cap[prev_arc[v]] -= push;
      cap[prev_arc[v] ^ 1] += push;
    }
    flow += push;
  }
}

int64_t CutOracle(const NetworkGraph& g, const std::vector<std::string>& sources) {
  const int n = static_cast<int>(g.num_nodes());
  const int ss = n, tt = n + 1;
  const int64_t inf = int64_t{1} << 40;
  std::vector<std::array<int64_t, 3>> arcs;
  for (const Edge& e : g.edges()) arcs.push_back({e.tail, e.head, 1});
  std::set<std::string> messages;
  for (const auto& name : sources) {
    const int v = g.FindNode(name);
    arcs.push_back({ss, v, inf});
    for (const auto& s : g.sources()) {
      if (s.node == v) messages.insert(s.message);
    }
  }
  for (const auto& t : g.terminals()) {
    for (const auto& d : t.demands) {
      if (messages.count(d)) {
        arcs.push_back({t.node, tt, inf});
        break;
      }
    }
  }
  return EdmondsKarp(n + 2, arcs, ss, tt);
}

Vec MatVec(const FqMatrix& m, const Vec& x) {
  const uint32_t p = m.field().modulus();
  Vec out(m.rows(), 0);
  for (size_t r = 0; r < m.rows(); ++r) {
    uint64_t acc = 0;
    for (size_t c = 0; c < m.cols(); ++c) acc = (acc + uint64_t{m(r, c)} * x[c]) % p;
    out[r] = static_cast<Residue>(acc);
  }
  return out;
}

std::vector<Vec> Propagate(const NetworkGraph& g, const FractionalLinearCode& code, const Vec& x) {
  const uint32_t p = code.field.modulus();
  const int r = code.dims.r;
  const int l = code.dims.l;
  std::map<std::string, int> slot;
  for (size_t s = 0; s < g.sources().size(); ++s) slot[g.sources()[s].message] = static_cast<int>(s);
  std::vector<Vec> y(g.num_edges());
  std::vector<bool> done(g.num_edges(), false);
  size_t remaining = g.num_edges();
  while (remaining > 0) {
    bool progress = false;
    for (size_t e = 0; e < g.num_edges(); ++e) {
      if (done[e]) continue;
      const int tail = g.edge(static_cast<int>(e)).tail;
      bool ready = true;
      for (int in : g.in_edges(tail)) ready = ready && done[in];
      if (!ready) continue;
      Vec out(l, 0);
      auto src = code.source_edges.find(static_cast<int>(e));
      if (src != code.source_edges.end()) {
        int s = -1;
        for (const auto& entry : g.sources()) {
          if (entry.node == tail) s = slot[entry.message];
        }
        Vec xs(x.begin() + s * r, x.begin() + (s + 1) * r);
        out = MatVec(src->second, xs);
      } else if (auto tr = code.transfers.find(static_cast<int>(e)); tr != code.transfers.end()) {
        for (const auto& [in, mat] : tr->second) {
          const Vec part = MatVec(mat, y[in]);
          for (int i = 0; i < l; ++i) out[i] = (out[i] + part[i]) % p;
        }
      }
      y[e] = std::move(out);
      done[e] = true;
      --remaining;
      progress = true;
    }
    if (!progress) throw std::runtime_error("propagation stalled");
  }
  return y;
}

FqMatrix RandomMatrix(const Fq& field, size_t rows, size_t cols, std::mt19937_64& rng) {
  FqMatrix m(field, rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) m(r, c) = static_cast<Residue>(rng() % field.modulus());
  }
  return m;
}

std::vector<bool> RawBruteForceM21(uint32_t p) {
  // Coordinates: x11, x12, x21, x22. Edges in order e11, e13, e22, e23.
  const Fq f(p);
  uint64_t configs = 1;
  for (int i = 0; i < 8; ++i) configs *= p;
  std::vector<bool> verdict(configs, false);
  for (uint64_t idx = 0; idx < configs; ++idx) {
    std::array<uint32_t, 8> d{};
    uint64_t rest = idx;
    for (int k = 7; k >= 0; --k) {
      d[k] = rest % p;
      rest /= p;
    }
    // Global rows over the four coordinates.
    const Vec y11 = {d[0], d[1], 0, 0};
    const Vec y13 = {d[2], d[3], 0, 0};
    const Vec y22 = {0, 0, d[4], d[5]};
    const Vec y23 = {0, 0, d[6], d[7]};
    bool all = true;
    for (int a = 0; a < 2 && all; ++a) {
      for (int b = 0; b < 2 && all; ++b) {
        FqMatrix demand(f, 2, 4);
        demand(0, a) = 1;
        demand(1, 2 + b) = 1;
        bool ok = false;
        for (uint32_t c1 = 0; c1 < p && !ok; ++c1) {
          for (uint32_t c2 = 0; c2 < p && !ok; ++c2) {
            for (uint32_t al = 0; al < p && !ok; ++al) {
              for (uint32_t be = 0; be < p && !ok; ++be) {
                FqMatrix recv(f, 3, 4);
                for (int c = 0; c < 4; ++c) {
                  recv(0, c) = (c1 * y11[c]) % p;
                  recv(1, c) = (c2 * y22[c]) % p;
                  recv(2, c) = (al * y13[c] + be * y23[c]) % p;
                }
                ok = SpanContains(recv, demand);
              }
            }
          }
        }
        all = ok;
      }
    }
    verdict[idx] = all;
  }
  return verdict;
}

}  // namespace lncw::oracle
