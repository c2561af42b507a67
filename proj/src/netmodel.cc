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

#include "lncw/netmodel.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>


namespace lncw {

int NetworkGraph::AddNode(const std::string& name) {
  if (index_.contains(name)) throw std::invalid_argument("duplicate node id " + name);
  const int v = static_cast<int>(names_.size());
  names_.push_back(name);
  index_.emplace(name, v);
  in_.emplace_back();
  out_.emplace_back();
  return v;
}

int NetworkGraph::AddEdge(int tail, int head) {
  if (tail < 0 || head < 0 || tail >= static_cast<int>(num_nodes()) ||
      head >= static_cast<int>(num_nodes())) {
    throw std::invalid_argument("edge endpoint out of range");
  }
  const int e = static_cast<int>(edges_.size());
  edges_.push_back({tail, head});
  out_[tail].push_back(e);
  in_[head].push_back(e);
  return e;
}

void NetworkGraph::AddSource(int node, const std::string& message) {
  if (SourceSlotOfNode(node) >= 0) {
    throw std::invalid_argument("node " + node_name(node) + " already carries a message");
  }
  if (SourceSlotOfMessage(message) >= 0) {
    throw std::invalid_argument("message " + message + " carried by two sources");
  }
  message_node_.emplace(message, node);
  // Resolve demands registered before this source.
  for (size_t t = 0; t < terminals_.size(); ++t) {
    for (size_t d = 0; d < terminals_[t].demands.size(); ++d) {
      if (demand_nodes_[t][d] < 0 && terminals_[t].demands[d] == message) demand_nodes_[t][d] = node;
    }
  }
  SourceEntry entry{node, message};
  auto it = std::lower_bound(sources_.begin(), sources_.end(), node,
                             [](const SourceEntry& s, int v) { return s.node < v; });
  sources_.insert(it, std::move(entry));
}

void NetworkGraph::AddTerminal(int node, std::vector<std::string> demands) {
  if (TerminalSlotOfNode(node) >= 0) {
    throw std::invalid_argument("node " + node_name(node) + " is already a terminal");
  }
  std::vector<int> resolved;
  for (const std::string& msg : demands) {
    auto found = message_node_.find(msg);
    resolved.push_back(found == message_node_.end() ? -1 : found->second);
  }
  TerminalEntry entry{node, std::move(demands)};
  auto it = std::lower_bound(terminals_.begin(), terminals_.end(), node,
                             [](const TerminalEntry& t, int v) { return t.node < v; });
  demand_nodes_.insert(demand_nodes_.begin() + (it - terminals_.begin()), std::move(resolved));
  terminals_.insert(it, std::move(entry));
}

int NetworkGraph::FindNode(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int NetworkGraph::SourceSlotOfNode(int node) const {
  auto it = std::lower_bound(sources_.begin(), sources_.end(), node,
                             [](const SourceEntry& s, int v) { return s.node < v; });
  return (it != sources_.end() && it->node == node)
             ? static_cast<int>(it - sources_.begin())
             : -1;
}

int NetworkGraph::SourceSlotOfMessage(const std::string& message) const {
  auto it = message_node_.find(message);
  return it == message_node_.end() ? -1 : SourceSlotOfNode(it->second);
}

int NetworkGraph::TerminalSlotOfNode(int node) const {
  auto it = std::lower_bound(terminals_.begin(), terminals_.end(), node,
                             [](const TerminalEntry& t, int v) { return t.node < v; });
  return (it != terminals_.end() && it->node == node)
             ? static_cast<int>(it - terminals_.begin())
             : -1;
}

std::vector<int> NetworkGraph::DemandSlots(int terminal_slot) const {
  const std::vector<int>& nodes = demand_nodes_.at(terminal_slot);
  std::vector<int> out;
  for (size_t d = 0; d < nodes.size(); ++d) {
    if (nodes[d] < 0) {
      throw std::invalid_argument("unknown demanded message " + terminals_[terminal_slot].demands[d]);
    }
    out.push_back(SourceSlotOfNode(nodes[d]));
  }
  return out;
}

bool NetworkGraph::operator==(const NetworkGraph& other) const {
  return names_ == other.names_ && edges_ == other.edges_ && sources_ == other.sources_ &&
         terminals_ == other.terminals_ && annotations == other.annotations;
}

MessageLayout MakeLayout(const NetworkGraph& g, int r) {
  MessageLayout layout;
  layout.r = r;
  for (const SourceEntry& s : g.sources()) layout.messages.push_back(s.message);
  return layout;
}

ValidationReport ValidateNetwork(const NetworkGraph& g) {
  ValidationReport report;
  try {
    TopoOrder(g);
  } catch (const std::runtime_error& e) {
    report.violations.push_back(e.what());
  }
  std::set<std::string> demanded;
  for (const TerminalEntry& t : g.terminals()) {
    if (!g.out_edges(t.node).empty()) {
      report.violations.push_back("terminal has out-edge: " + g.node_name(t.node));
    }
    for (const std::string& msg : t.demands) {
      if (g.SourceSlotOfMessage(msg) < 0) {
        report.violations.push_back("terminal " + g.node_name(t.node) +
                                    " demands unknown message " + msg);
      }
      demanded.insert(msg);
    }
  }
  for (const SourceEntry& s : g.sources()) {
    if (!g.in_edges(s.node).empty()) {
      report.violations.push_back("source has in-edge: " + g.node_name(s.node));
    }
    if (!demanded.contains(s.message)) {
      report.warnings.push_back("undemanded source: " + g.node_name(s.node));
    }
  }
  return report;
}

std::vector<int> TopoOrder(const NetworkGraph& g) {
  const int n = static_cast<int>(g.num_nodes());
  std::vector<int> indegree(n, 0);
  for (const Edge& e : g.edges()) ++indegree[e.head];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int e : g.out_edges(v)) {
      if (--indegree[g.edge(e).head] == 0) ready.push(g.edge(e).head);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    // Every unprocessed node has an unprocessed predecessor; walking back
    // must revisit a node, and the edge closing that loop lies on a cycle.
    int v = 0;
    while (indegree[v] == 0) ++v;
    std::vector<int> seen_at(n, -1);
    int via = -1;
    for (int step = 0; seen_at[v] < 0; ++step) {
      seen_at[v] = step;
      for (int e : g.in_edges(v)) {
        if (indegree[g.edge(e).tail] > 0) {
          via = e;
          break;
        }
      }
      v = g.edge(via).tail;
    }
    throw std::runtime_error("cycle detected through edge " + g.node_name(g.edge(via).tail) +
                             "->" + g.node_name(g.edge(via).head));
  }
  return order;
}

Rational Rational::Reduced() const {
  int64_t g = std::gcd(num, den);
  if (g == 0) return *this;
  Rational r{num / g, den / g};
  if (r.den < 0) r = {-r.num, -r.den};
  return r;
}

std::string Rational::ToString() const {
  Rational r = Reduced();
  return r.den == 1 ? std::to_string(r.num)
                    : std::to_string(r.num) + "/" + std::to_string(r.den);
}

RateBound RateUpperBound(const NetworkGraph& g, const std::vector<std::string>& sources) {
  if (sources.empty()) throw std::invalid_argument("source set is empty");
  const int n = static_cast<int>(g.num_nodes());
  std::vector<char> in_set(n, 0);
  std::vector<int> set_nodes;
  for (const std::string& name : sources) {
    const int v = g.FindNode(name);
    if (v < 0 || g.SourceSlotOfNode(v) < 0) throw std::invalid_argument("unknown source " + name);
    if (!in_set[v]) set_nodes.push_back(v);
    in_set[v] = 1;
  }
  // Terminals attached to the super sink. A message demanded by several
  // terminals still counts once.
  std::vector<char> to_sink(n, 0);
  std::vector<char> served(n, 0);
  for (size_t t = 0; t < g.terminals().size(); ++t) {
    for (int src : g.DemandNodes(static_cast<int>(t))) {
      if (src >= 0 && in_set[src]) {
        to_sink[g.terminals()[t].node] = 1;
        served[src] = 1;
      }
    }
  }
  for (int v : set_nodes) {
    if (!served[v]) throw std::invalid_argument("source " + g.node_name(v) + " is demanded by no terminal");
  }

  // Unit-capacity augmenting paths on the network itself; super-source and
  // super-sink arcs are unbounded and stay implicit. The first terminal
  // reached ends a search.
  std::vector<char> flow(g.num_edges(), 0);
  std::vector<int> via(n);  // 0 unvisited, e+1 forward, -(e+1) backward
  constexpr int kRoot = std::numeric_limits<int>::max();
  std::vector<int> queue;
  int64_t value = 0;
  for (;;) {
    std::fill(via.begin(), via.end(), 0);
    queue.assign(set_nodes.begin(), set_nodes.end());
    for (int v : set_nodes) via[v] = kRoot;
    int found = -1;
    auto visit = [&](int w, int code) {
      via[w] = code;
      if (to_sink[w]) found = w;
      queue.push_back(w);
    };
    for (size_t qi = 0; qi < queue.size() && found < 0; ++qi) {
      const int v = queue[qi];
      for (int e : g.out_edges(v)) {
        const int w = g.edge(e).head;
        if (!flow[e] && via[w] == 0) visit(w, e + 1);
        if (found >= 0) break;
      }
      for (int e : g.in_edges(v)) {
        if (found >= 0) break;
        const int w = g.edge(e).tail;
        if (flow[e] && via[w] == 0) visit(w, -(e + 1));
      }
    }
    if (found < 0) break;
    for (int v = found; via[v] != kRoot;) {
      if (via[v] > 0) {
        const int e = via[v] - 1;
        flow[e] = 1;
        v = g.edge(e).tail;
      } else {
        const int e = -via[v] - 1;
        flow[e] = 0;
        v = g.edge(e).head;
      }
    }
    ++value;
  }
  return RateBound{value, static_cast<int64_t>(set_nodes.size())};
}

namespace {

// Parses "<prefix><int>_<int>..." style integer lists; returns false on any
// malformed token.
bool ParseInts(const std::string& s, std::vector<int>& out) {
  out.clear();
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find('_', pos);
    std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) return false;
    out.push_back(std::stoi(tok));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return !out.empty();
}

NodeTag ParseNodeName(const std::string& name, int m) {
  NodeTag tag;
  std::string rest = name;
  if (rest.size() > 1 && rest[0] == 'c') {
    const size_t dot = rest.find('.');
    if (dot == std::string::npos) return tag;
    std::vector<int> copy;
    if (!ParseInts(rest.substr(1, dot - 1), copy) || copy.size() != 1) return tag;
    tag.copy = copy[0];
    rest = rest.substr(dot + 1);
  }
  if (rest.size() < 3 || rest[1] != '_') return tag;
  std::vector<int> ints;
  if (!ParseInts(rest.substr(2), ints)) return tag;
  switch (rest[0]) {
    case 's':
      if (ints.size() == 2) tag = {NodeRole::kSource, ints[0], ints[1], -1, tag.copy};
      break;
    case 'u':
      if (ints.size() == 1) tag = {NodeRole::kCombiner, ints[0], 0, -1, tag.copy};
      break;
    case 'v':
      if (ints.size() == 1) {
        tag = {ints[0] <= m ? NodeRole::kRelay : NodeRole::kMixer, ints[0], 0, -1, tag.copy};
      }
      break;
    case 't':
      if (ints.size() == 1) tag = {NodeRole::kTerminal, 0, 0, ints[0], tag.copy};
      break;
    default:
      break;
  }
  return tag;
}

}  // namespace

void DeriveFamilyTags(const NetworkGraph& g, FamilyAnnotations& ann) {
  ann.node_tags.clear();
  ann.edge_tags.clear();
  for (size_t v = 0; v < g.num_nodes(); ++v) {
    ann.node_tags.push_back(ParseNodeName(g.node_name(static_cast<int>(v)), ann.m));
  }
  for (const Edge& e : g.edges()) {
    const NodeTag& a = ann.node_tags[e.tail];
    const NodeTag& b = ann.node_tags[e.head];
    EdgeTag tag;
    if (a.role == NodeRole::kSource && b.role == NodeRole::kCombiner) {
      tag = {EdgeRole::kSourceEdge, a.i, a.j, b.copy};
    } else if (a.role == NodeRole::kCombiner && b.role == NodeRole::kRelay) {
      tag = {EdgeRole::kBottleneckDirect, a.i, b.i, a.copy};
    } else if (a.role == NodeRole::kCombiner && b.role == NodeRole::kMixer) {
      tag = {EdgeRole::kBottleneckCross, a.i, b.i, a.copy};
    } else if ((a.role == NodeRole::kRelay || a.role == NodeRole::kMixer) &&
               b.role == NodeRole::kTerminal) {
      tag = {EdgeRole::kTerminalEdge, a.i, b.terminal, a.copy};
    }
    ann.edge_tags.push_back(tag);
  }
}

nlohmann::json NetworkToJson(const NetworkGraph& g) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (size_t v = 0; v < g.num_nodes(); ++v) j["nodes"].push_back(g.node_name(static_cast<int>(v)));
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges()) {
    j["edges"].push_back({g.node_name(e.tail), g.node_name(e.head)});
  }
  j["sources"] = nlohmann::json::object();
  for (const SourceEntry& s : g.sources()) j["sources"][g.node_name(s.node)] = s.message;
  j["terminals"] = nlohmann::json::object();
  for (const TerminalEntry& t : g.terminals()) j["terminals"][g.node_name(t.node)] = t.demands;
  j["annotations"] = nlohmann::json::object();
  if (g.annotations) {
    j["annotations"] = {{"family", g.annotations->family},
                        {"m", g.annotations->m},
                        {"n", g.annotations->n},
                        {"k", g.annotations->k}};
  }
  return j;
}

NetworkGraph NetworkFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges")) {
    throw std::invalid_argument("network JSON needs nodes and edges");
  }
  NetworkGraph g;
  for (const auto& name : j.at("nodes")) g.AddNode(name.get<std::string>());
  auto lookup = [&](const std::string& name) {
    const int v = g.FindNode(name);
    if (v < 0) throw std::invalid_argument("edge references unknown node " + name);
    return v;
  };
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edge must be [tail, head]");
    g.AddEdge(lookup(e[0].get<std::string>()), lookup(e[1].get<std::string>()));
  }
  if (j.contains("sources")) {
    for (const auto& [node, msg] : j.at("sources").items()) {
      g.AddSource(lookup(node), msg.get<std::string>());
    }
  }
  if (j.contains("terminals")) {
    for (const auto& [node, demands] : j.at("terminals").items()) {
      g.AddTerminal(lookup(node), demands.get<std::vector<std::string>>());
    }
  }
  if (j.contains("annotations") && j.at("annotations").contains("family")) {
    const auto& a = j.at("annotations");
    FamilyAnnotations ann;
    ann.family = a.at("family").get<std::string>();
    ann.m = a.at("m").get<int>();
    ann.n = a.at("n").get<int>();
    ann.k = a.value("k", 1);
    DeriveFamilyTags(g, ann);
    g.annotations = std::move(ann);
  }
  return g;
}

}  // namespace lncw
