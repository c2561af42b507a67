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

#include "lncw/lincode.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "lncw/family.h"

namespace lncw {

namespace {

std::string EdgeLabel(const NetworkGraph& g, int e) {
  return "edge " + std::to_string(e) + " (" + g.node_name(g.edge(e).tail) + "->" +
         g.node_name(g.edge(e).head) + ")";
}

void CheckShape(const NetworkGraph& g, int e, const FqMatrix& m, size_t rows, size_t cols,
                const Fq& field, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols || !(m.field() == field)) {
    throw std::invalid_argument(EdgeLabel(g, e) + ": " + what + " has shape " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                " over F" + std::to_string(m.field().modulus()) +
                                ", expected " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
}

}  // namespace

GlobalCodingMap GlobalMaps(const NetworkGraph& g, const FractionalLinearCode& code) {
  const int r = code.dims.r;
  const int l = code.dims.l;
  const Fq& f = code.field;
  GlobalCodingMap out;
  out.layout = MakeLayout(g, r);
  const size_t width = out.layout.width();
  out.edge_maps.assign(g.num_edges(), FqMatrix(f, l, width));

  for (int v : TopoOrder(g)) {
    const int slot = g.SourceSlotOfNode(v);
    for (int e : g.out_edges(v)) {
      FqMatrix& me = out.edge_maps[e];
      if (slot >= 0) {
        auto it = code.source_edges.find(e);
        if (it == code.source_edges.end()) {
          throw std::invalid_argument(EdgeLabel(g, e) + ": missing source-edge matrix");
        }
        CheckShape(g, e, it->second, l, r, f, "source-edge matrix");
        me.SetBlock(0, out.layout.offset(slot), it->second);
      } else {
        auto it = code.transfers.find(e);
        const auto& ins = g.in_edges(v);
        if (it == code.transfers.end()) {
          if (!ins.empty()) {
            throw std::invalid_argument(EdgeLabel(g, e) + ": missing transfer matrices");
          }
          continue;
        }
        if (it->second.size() != ins.size()) {
          throw std::invalid_argument(EdgeLabel(g, e) + ": expected " +
                                      std::to_string(ins.size()) + " transfer matrices, got " +
                                      std::to_string(it->second.size()));
        }
        for (int in : ins) {
          auto jt = it->second.find(in);
          if (jt == it->second.end()) {
            throw std::invalid_argument(EdgeLabel(g, e) + ": missing transfer from edge " +
                                        std::to_string(in));
          }
          CheckShape(g, e, jt->second, l, l, f, "transfer matrix");
          if (jt->second.IsZero()) continue;
          me = me + jt->second * out.edge_maps[in];
        }
      }
    }
  }
  return out;
}

FqMatrix DemandSelection(const NetworkGraph& g, const MessageLayout& layout, const Fq& field,
                         int terminal_slot) {
  const std::vector<int> slots = g.DemandSlots(terminal_slot);
  const int r = layout.r;
  FqMatrix sel(field, r * slots.size(), layout.width());
  for (size_t d = 0; d < slots.size(); ++d) {
    for (int c = 0; c < r; ++c) sel(d * r + c, layout.offset(slots[d]) + c) = 1;
  }
  return sel;
}

FqMatrix StackedInput(const NetworkGraph& g, const GlobalCodingMap& maps, int terminal_node) {
  const auto& ins = g.in_edges(terminal_node);
  const size_t width = maps.layout.width();
  if (ins.empty()) {
    return FqMatrix(maps.edge_maps.empty() ? Fq(2) : maps.edge_maps.front().field(), 0, width);
  }
  FqMatrix stacked(maps.edge_maps[ins.front()].field(), 0, width);
  for (int e : ins) stacked.AppendRows(maps.edge_maps[e]);
  return stacked;
}

bool VerificationReport::ok() const {
  return std::all_of(terminals.begin(), terminals.end(),
                     [](const TerminalVerdict& v) { return v.pass; });
}

size_t VerificationReport::failures() const {
  return std::count_if(terminals.begin(), terminals.end(),
                       [](const TerminalVerdict& v) { return !v.pass; });
}

VerificationReport VerifySolution(const NetworkGraph& g, const FractionalLinearCode& code,
                                  int threads) {
  return VerifySolution(g, code, GlobalMaps(g, code), threads);
}

VerificationReport VerifySolution(const NetworkGraph& g, const FractionalLinearCode& code,
                                  const GlobalCodingMap& maps, int threads) {
  const auto& terms = g.terminals();
  VerificationReport report;
  report.terminals.resize(terms.size());
  auto check = [&](size_t slot) {
    TerminalVerdict& verdict = report.terminals[slot];
    verdict.terminal = terms[slot].node;
    auto it = code.decoders.find(terms[slot].node);
    if (it == code.decoders.end()) {
      verdict.reason = "missing decoder";
      return;
    }
    const FqMatrix stacked = StackedInput(g, maps, terms[slot].node);
    const FqMatrix want = DemandSelection(g, maps.layout, code.field, static_cast<int>(slot));
    const FqMatrix& dec = it->second;
    if (dec.rows() != want.rows() || dec.cols() != stacked.rows() ||
        !(dec.field() == code.field)) {
      verdict.reason = "decoder shape " + std::to_string(dec.rows()) + "x" +
                       std::to_string(dec.cols()) + ", expected " +
                       std::to_string(want.rows()) + "x" + std::to_string(stacked.rows());
      return;
    }
    if (dec * stacked == want) {
      verdict.pass = true;
    } else {
      verdict.reason = "decoded output differs from demanded messages";
    }
  };
  const size_t workers = std::max<size_t>(1, std::min<size_t>(threads, terms.size()));
  if (workers == 1) {
    for (size_t s = 0; s < terms.size(); ++s) check(s);
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (size_t s = w; s < terms.size(); s += workers) check(s);
      });
    }
    for (auto& t : pool) t.join();
  }
  return report;
}

std::optional<FqMatrix> FindDecoder(const NetworkGraph& g, const GlobalCodingMap& maps,
                                    int terminal_slot) {
  const int node = g.terminals().at(terminal_slot).node;
  const FqMatrix stacked = StackedInput(g, maps, node);
  const Fq field = stacked.field();
  return SolveLeft(stacked, DemandSelection(g, maps.layout, field, terminal_slot));
}

DecoderSearch FindDecoders(const NetworkGraph& g, const FractionalLinearCode& code) {
  const GlobalCodingMap maps = GlobalMaps(g, code);
  DecoderSearch out;
  for (size_t slot = 0; slot < g.terminals().size(); ++slot) {
    const int node = g.terminals()[slot].node;
    std::optional<FqMatrix> dec;
    if (g.in_edges(node).empty()) {
      // No inputs: decodable only when nothing is demanded.
      FqMatrix want = DemandSelection(g, maps.layout, code.field, static_cast<int>(slot));
      if (want.rows() == 0) dec = FqMatrix(code.field, 0, 0);
    } else {
      dec = FindDecoder(g, maps, static_cast<int>(slot));
    }
    if (!dec) {
      out.first_failure = node;
      out.decoders.clear();
      return out;
    }
    out.decoders.emplace(node, std::move(*dec));
  }
  return out;
}

SerialCode ReduceParallelCode(const NetworkGraph& parallel, const FractionalLinearCode& code) {
  if (!parallel.annotations || parallel.annotations->family != "parallel") {
    throw std::invalid_argument("reduction needs an annotated parallel network");
  }
  if (!VerifySolution(parallel, code).ok()) {
    throw std::invalid_argument("reduction is defined only for codes that verify");
  }
  const FamilyAnnotations& ann = *parallel.annotations;
  const int k = ann.k;
  const int l = code.dims.l;
  const Fq& f = code.field;

  SerialCode out{BuildMNetwork(ann.m, ann.n, std::numeric_limits<uint64_t>::max()), {}};
  const NetworkGraph& serial = out.network;
  const FamilyAnnotations& sann = *serial.annotations;

  // (role, i, j, copy) -> parallel edge id.
  std::map<std::tuple<int, int, int, int>, int> par_edge;
  for (size_t e = 0; e < parallel.num_edges(); ++e) {
    const EdgeTag& t = ann.edge_tags[e];
    par_edge[{static_cast<int>(t.role), t.i, t.j, t.copy}] = static_cast<int>(e);
  }
  auto copy_edge = [&](int serial_e, int p) {
    const EdgeTag& t = sann.edge_tags[serial_e];
    auto it = par_edge.find({static_cast<int>(t.role), t.i, t.j, p});
    if (it == par_edge.end()) {
      throw std::invalid_argument("parallel network lacks copy " + std::to_string(p) +
                                  " of serial edge " + std::to_string(serial_e));
    }
    return it->second;
  };

  FractionalLinearCode& sc = out.code;
  sc.field = f;
  sc.dims = {code.dims.r, k * l};
  for (size_t e = 0; e < serial.num_edges(); ++e) {
    const int se = static_cast<int>(e);
    const int tail = serial.edge(se).tail;
    if (serial.SourceSlotOfNode(tail) >= 0) {
      FqMatrix a(f, 0, code.dims.r);
      for (int p = 1; p <= k; ++p) a.AppendRows(code.source_edges.at(copy_edge(se, p)));
      sc.source_edges.emplace(se, std::move(a));
      continue;
    }
    auto& row = sc.transfers[se];
    for (int in : serial.in_edges(tail)) {
      FqMatrix block(f, k * l, k * l);
      for (int p = 1; p <= k; ++p) {
        block.SetBlock((p - 1) * l, (p - 1) * l,
                       code.transfers.at(copy_edge(se, p)).at(copy_edge(in, p)));
      }
      row.emplace(in, std::move(block));
    }
  }

  for (const TerminalEntry& t : serial.terminals()) {
    const int pnode = parallel.FindNode(serial.node_name(t.node));
    const FqMatrix& pdec = code.decoders.at(pnode);
    const auto& sins = serial.in_edges(t.node);
    const auto& pins = parallel.in_edges(pnode);
    FqMatrix sdec(f, pdec.rows(), sins.size() * k * l);
    for (size_t q = 0; q < pins.size(); ++q) {
      const EdgeTag& pt = ann.edge_tags[pins[q]];
      size_t pos = 0;
      while (pos < sins.size() && sann.edge_tags[sins[pos]].i != pt.i) ++pos;
      if (pos == sins.size()) throw std::logic_error("unmatched terminal in-edge");
      const size_t dst = pos * k * l + (pt.copy - 1) * l;
      sdec.SetBlock(0, dst, pdec.ColRange(q * l, (q + 1) * l));
    }
    sc.decoders.emplace(t.node, std::move(sdec));
  }
  return out;
}

nlohmann::json CodeToJson(const NetworkGraph& g, const FractionalLinearCode& code) {
  nlohmann::json j;
  j["schema"] = 1;
  j["p"] = code.field.modulus();
  j["r"] = code.dims.r;
  j["l"] = code.dims.l;
  j["source_edges"] = nlohmann::json::object();
  for (const auto& [e, m] : code.source_edges) j["source_edges"][std::to_string(e)] = MatrixToJson(m);
  j["transfers"] = nlohmann::json::object();
  for (const auto& [e, row] : code.transfers) {
    nlohmann::json inner = nlohmann::json::object();
    for (const auto& [in, m] : row) inner[std::to_string(in)] = MatrixToJson(m);
    j["transfers"][std::to_string(e)] = std::move(inner);
  }
  j["decoders"] = nlohmann::json::object();
  for (const auto& [t, m] : code.decoders) j["decoders"][g.node_name(t)] = MatrixToJson(m);
  return j;
}

FractionalLinearCode CodeFromJson(const NetworkGraph& g, const nlohmann::json& j) {
  for (const char* key : {"p", "r", "l"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("code JSON lacks ") + key);
  }
  FractionalLinearCode code;
  code.field = Fq(j.at("p").get<uint32_t>());
  code.dims = {j.at("r").get<int>(), j.at("l").get<int>()};
  if (code.dims.r < 1 || code.dims.l < 1) throw std::invalid_argument("r and l must be >= 1");
  auto edge_id = [&](const std::string& key) {
    size_t used = 0;
    const int e = std::stoi(key, &used);
    if (used != key.size() || e < 0 || e >= static_cast<int>(g.num_edges())) {
      throw std::invalid_argument("code references unknown edge " + key);
    }
    return e;
  };
  if (j.contains("source_edges")) {
    for (const auto& [key, m] : j.at("source_edges").items()) {
      code.source_edges.emplace(edge_id(key), MatrixFromJson(m));
    }
  }
  if (j.contains("transfers")) {
    for (const auto& [key, row] : j.at("transfers").items()) {
      auto& dst = code.transfers[edge_id(key)];
      for (const auto& [in, m] : row.items()) dst.emplace(edge_id(in), MatrixFromJson(m));
    }
  }
  if (j.contains("decoders")) {
    for (const auto& [name, m] : j.at("decoders").items()) {
      const int v = g.FindNode(name);
      if (v < 0) throw std::invalid_argument("decoder for unknown terminal " + name);
      code.decoders.emplace(v, MatrixFromJson(m));
    }
  }
  return code;
}

}  // namespace lncw
