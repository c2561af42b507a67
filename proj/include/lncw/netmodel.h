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

// Directed acyclic network model: unit-capacity edges, message-carrying
// sources, demanding terminals, and cut-based rate upper bounds.

#ifndef LNCW_NETMODEL_H_
#define LNCW_NETMODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace lncw {

struct Edge {
  int tail = 0;
  int head = 0;
  bool operator==(const Edge&) const = default;
};

enum class NodeRole { kOther, kSource, kCombiner, kRelay, kMixer, kTerminal };
enum class EdgeRole {
  kOther,
  kSourceEdge,
  kBottleneckDirect,  // u_i -> v_i
  kBottleneckCross,   // u_i -> v_j, m+1 <= j <= 2m-1
  kTerminalEdge,
};

// Role of a node in a family instance. Indices are 1-based as in the node
// names; `copy` is 0 for shared nodes and 1..k for nodes of a parallel copy.
struct NodeTag {
  NodeRole role = NodeRole::kOther;
  int i = 0;  // set index (source, combiner) or v-index (relay, mixer)
  int j = 0;  // source index within its set
  int terminal = -1;
  int copy = 0;
  bool operator==(const NodeTag&) const = default;
};

struct EdgeTag {
  EdgeRole role = EdgeRole::kOther;
  int i = 0;  // set index, or v-index for terminal edges
  int j = 0;  // source index, head v-index, or terminal index
  int copy = 0;
  bool operator==(const EdgeTag&) const = default;
};

// Family metadata. Per-node and per-edge tags are recomputed from the node
// names, so only the header fields travel in JSON.
struct FamilyAnnotations {
  std::string family;  // "m_network" or "parallel"
  int m = 0;
  int n = 0;
  int k = 1;
  std::vector<NodeTag> node_tags;
  std::vector<EdgeTag> edge_tags;
  bool operator==(const FamilyAnnotations&) const = default;
};

struct SourceEntry {
  int node = 0;
  std::string message;
  bool operator==(const SourceEntry&) const = default;
};

struct TerminalEntry {
  int node = 0;
  std::vector<std::string> demands;
  bool operator==(const TerminalEntry&) const = default;
};

class NetworkGraph {
 public:
  // Throws std::invalid_argument on duplicate names.
  int AddNode(const std::string& name);
  int AddEdge(int tail, int head);
  void AddSource(int node, const std::string& message);
  void AddTerminal(int node, std::vector<std::string> demands);

  size_t num_nodes() const { return names_.size(); }
  size_t num_edges() const { return edges_.size(); }
  const std::string& node_name(int v) const { return names_.at(v); }
  // -1 when absent.
  int FindNode(const std::string& name) const;

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }
  // Ascending edge id.
  const std::vector<int>& in_edges(int v) const { return in_.at(v); }
  const std::vector<int>& out_edges(int v) const { return out_.at(v); }

  // Sorted by node index; this order is the canonical message layout.
  const std::vector<SourceEntry>& sources() const { return sources_; }
  // Sorted by node index.
  const std::vector<TerminalEntry>& terminals() const { return terminals_; }

  // Position in sources(), or -1.
  int SourceSlotOfNode(int node) const;
  int SourceSlotOfMessage(const std::string& message) const;
  // Position in terminals(), or -1.
  int TerminalSlotOfNode(int node) const;
  // Positions in sources() of the terminal's demands, in demand order.
  // Throws std::invalid_argument on a message no source carries.
  std::vector<int> DemandSlots(int terminal_slot) const;
  // Source node of each demand, -1 for an unknown message.
  const std::vector<int>& DemandNodes(int terminal_slot) const {
    return demand_nodes_.at(terminal_slot);
  }

  std::optional<FamilyAnnotations> annotations;

  bool operator==(const NetworkGraph& other) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
  std::vector<SourceEntry> sources_;
  std::unordered_map<std::string, int> message_node_;
  std::vector<TerminalEntry> terminals_;
  std::vector<std::vector<int>> demand_nodes_;  // parallel to terminals_
};

// Block layout of the stacked source vector: message s occupies coordinates
// [r*s, r*s + r).
struct MessageLayout {
  std::vector<std::string> messages;
  int r = 1;
  int offset(int slot) const { return r * slot; }
  int width() const { return r * static_cast<int>(messages.size()); }
};

MessageLayout MakeLayout(const NetworkGraph& g, int r);

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

ValidationReport ValidateNetwork(const NetworkGraph& g);

// Kahn order, ties broken by smallest node index. Throws std::runtime_error
// naming an edge on a cycle.
std::vector<int> TopoOrder(const NetworkGraph& g);

struct Rational {
  int64_t num = 0;
  int64_t den = 1;
  Rational Reduced() const;
  bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
  std::string ToString() const;
};

struct RateBound {
  int64_t cut = 0;          // min cut value, unit edge capacities
  int64_t set_size = 0;     // |A|
  Rational bound() const { return Rational{cut, set_size}.Reduced(); }
};

// Upper bound c/|A| on r/l for any code serving the sources in A (node
// names). Throws std::invalid_argument for an empty/unknown set or a source
// no terminal demands.
RateBound RateUpperBound(const NetworkGraph& g, const std::vector<std::string>& sources);

// Family role tags recomputed from node names; fills node_tags/edge_tags.
void DeriveFamilyTags(const NetworkGraph& g, FamilyAnnotations& ann);

// {"nodes":[...], "edges":[[tail,head],...], "sources":{node: message},
//  "terminals":{node:[messages]}, "annotations":{...}}
nlohmann::json NetworkToJson(const NetworkGraph& g);
NetworkGraph NetworkFromJson(const nlohmann::json& j);

}  // namespace lncw

#endif  // LNCW_NETMODEL_H_
