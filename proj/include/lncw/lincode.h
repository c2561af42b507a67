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

// Fractional (r, l) linear network codes: each source emits r symbols, each
// edge carries l symbols per network use.

#ifndef LNCW_LINCODE_H_
#define LNCW_LINCODE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lncw/fflin.h"
#include "lncw/netmodel.h"

namespace lncw {

struct CodeDims {
  int r = 1;
  int l = 1;
  bool operator==(const CodeDims&) const = default;
};

// Local description of a code. Transfer matrices are stored explicitly for
// every (in-edge, out-edge) pair at a non-source node, zero ones included.
// Decoder columns follow the terminal's in-edges in ascending edge id.
struct FractionalLinearCode {
  Fq field{2};
  CodeDims dims;
  std::map<int, FqMatrix> source_edges;                // edge -> l x r
  std::map<int, std::map<int, FqMatrix>> transfers;    // edge -> in-edge -> l x l
  std::map<int, FqMatrix> decoders;                    // terminal node -> (r|D|) x (l|In|)

  bool operator==(const FractionalLinearCode&) const = default;
};

// Per-edge global maps M_e (l x r|S|) with Y_e = M_e * stacked sources.
struct GlobalCodingMap {
  MessageLayout layout;
  std::vector<FqMatrix> edge_maps;
};

// Throws std::invalid_argument naming the offending edge on any missing or
// misshapen local matrix.
GlobalCodingMap GlobalMaps(const NetworkGraph& g, const FractionalLinearCode& code);

// Rows selecting the demanded message blocks of terminal `terminal_slot`, in
// demand order.
FqMatrix DemandSelection(const NetworkGraph& g, const MessageLayout& layout,
                         const Fq& field, int terminal_slot);
// M_e for e in In(t), stacked in ascending edge id.
FqMatrix StackedInput(const NetworkGraph& g, const GlobalCodingMap& maps, int terminal_node);

struct TerminalVerdict {
  int terminal = 0;  // node index
  bool pass = false;
  std::string reason;
};

struct VerificationReport {
  std::vector<TerminalVerdict> terminals;
  bool ok() const;
  size_t failures() const;
};

VerificationReport VerifySolution(const NetworkGraph& g, const FractionalLinearCode& code,
                                  int threads = 1);
VerificationReport VerifySolution(const NetworkGraph& g, const FractionalLinearCode& code,
                                  const GlobalCodingMap& maps, int threads = 1);

// Decoder for one terminal, if its demanded rows lie in the span of its
// inputs.
std::optional<FqMatrix> FindDecoder(const NetworkGraph& g, const GlobalCodingMap& maps,
                                    int terminal_slot);

struct DecoderSearch {
  std::map<int, FqMatrix> decoders;   // present only when every terminal decodes
  std::optional<int> first_failure;   // terminal node index
  bool ok() const { return !first_failure.has_value(); }
};

DecoderSearch FindDecoders(const NetworkGraph& g, const FractionalLinearCode& code);

struct SerialCode {
  NetworkGraph network;
  FractionalLinearCode code;
};

// Maps an (r, l) solution on the k-copy parallel network to an (r, k*l)
// solution on the single network: each serial edge carries its k copy-edge
// payloads back to back and local matrices become block diagonal. Throws
// std::invalid_argument when the input code is not a solution.
SerialCode ReduceParallelCode(const NetworkGraph& parallel, const FractionalLinearCode& code);

// {"p", "r", "l", "source_edges": {edge: M}, "transfers": {edge: {in_edge: M}},
//  "decoders": {terminal: M}}; edges keyed by decimal id, terminals by name.
nlohmann::json CodeToJson(const NetworkGraph& g, const FractionalLinearCode& code);
FractionalLinearCode CodeFromJson(const NetworkGraph& g, const nlohmann::json& j);

}  // namespace lncw

#endif  // LNCW_LINCODE_H_
