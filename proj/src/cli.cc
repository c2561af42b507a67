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

#include "lncw/cli.h"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "lncw/family.h"
#include "lncw/lincode.h"
#include "lncw/polymatroid.h"
#include "lncw/solver.h"

namespace lncw {

namespace {

// I/O failures; reported with exit status 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FileRecord {
  std::string path;
  std::string sha256;
};

// State shared by all subcommands of one invocation.
struct Session {
  std::vector<std::string> argv;
  std::vector<FileRecord> inputs;
  std::vector<FileRecord> outputs;
  std::optional<uint64_t> seed;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::ostream* out = nullptr;
};

std::string ReadFile(Session& s, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string bytes = buf.str();
  s.inputs.push_back({path, Sha256Hex(bytes)});
  return bytes;
}

nlohmann::json ReadJson(Session& s, const std::string& path) {
  const std::string bytes = ReadFile(s, path);
  try {
    return nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void WriteFile(Session& s, const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << bytes;
  if (!f) throw IoError("write failed for " + path);
  s.outputs.push_back({path, Sha256Hex(bytes)});
}

void WriteManifest(Session& s, const std::string& primary) {
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - s.start).count();
  nlohmann::json m;
  m["schema"] = 1;
  m["tool_version"] = kToolVersion;
  m["command_line"] = s.argv;
  auto records = [](const std::vector<FileRecord>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : v) a.push_back({{"path", r.path}, {"sha256", r.sha256}});
    return a;
  };
  m["inputs"] = records(s.inputs);
  m["outputs"] = records(s.outputs);
  m["seed"] = s.seed ? nlohmann::json(*s.seed) : nlohmann::json(nullptr);
  m["wall_time_seconds"] = wall;
  std::ofstream f(primary + ".manifest.json");
  if (!f) throw IoError("cannot write manifest for " + primary);
  f << m.dump(2) << "\n";
}

// Text to -o (plus manifest) or stdout.
void Emit(Session& s, const std::string& text, const std::string& path) {
  if (path.empty()) {
    *s.out << text;
    return;
  }
  WriteFile(s, path, text);
  WriteManifest(s, path);
}

void EmitJson(Session& s, nlohmann::json j, const std::string& path) {
  if (j.is_object() && !j.contains("schema")) j["schema"] = 1;
  Emit(s, j.dump(2) + "\n", path);
}

NetworkGraph LoadNetwork(Session& s, const std::string& path) {
  return NetworkFromJson(ReadJson(s, path));
}

FractionalLinearCode LoadCode(Session& s, const NetworkGraph& g, const std::string& path) {
  return CodeFromJson(g, ReadJson(s, path));
}

nlohmann::json VerdictJson(const NetworkGraph& g, const TerminalVerdict& v) {
  nlohmann::json j = {{"terminal", g.node_name(v.terminal)}, {"pass", v.pass}};
  if (!v.pass) j["reason"] = v.reason;
  return j;
}

uint64_t DefaultSearchBudget() {
  const char* env = std::getenv("LNCW_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultSearchBudget;
  try {
    size_t used = 0;
    const uint64_t v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("LNCW_BUDGET is not an unsigned integer: ") + env);
  }
}

std::vector<std::string> SplitComma(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

std::string Quote(const std::string& name) { return "\"" + name + "\""; }

}  // namespace

std::string Sha256Hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

std::string ExportDot(const NetworkGraph& g) {
  std::ostringstream dot;
  dot << "digraph network {\n";
  const bool parallel = g.annotations && g.annotations->family == "parallel";
  auto node_line = [&](int v, const std::string& indent) {
    std::string shape = "ellipse";
    if (g.SourceSlotOfNode(v) >= 0) shape = "box";
    if (g.TerminalSlotOfNode(v) >= 0) shape = "doublecircle";
    dot << indent << Quote(g.node_name(v)) << " [shape=" << shape << "];\n";
  };
  std::map<int, std::vector<int>> clusters;
  for (size_t v = 0; v < g.num_nodes(); ++v) {
    const int copy = parallel ? g.annotations->node_tags[v].copy : 0;
    if (copy > 0) {
      clusters[copy].push_back(static_cast<int>(v));
    } else {
      node_line(static_cast<int>(v), "  ");
    }
  }
  for (const auto& [copy, nodes] : clusters) {
    dot << "  subgraph cluster_c" << copy << " {\n";
    dot << "    label=\"copy " << copy << "\";\n";
    for (int v : nodes) node_line(v, "    ");
    dot << "  }\n";
  }
  for (const Edge& e : g.edges()) {
    dot << "  " << Quote(g.node_name(e.tail)) << " -> " << Quote(g.node_name(e.head)) << ";\n";
  }
  dot << "}\n";
  return dot.str();
}

int RunCli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Session s;
  s.argv = argv;
  s.out = &out;

  CLI::App app{"Linear network coding workbench for generalized M-networks", "lncw"};
  app.require_subcommand(1);
  int status = kExitOk;
  std::string out_path;

  // build
  int b_m = 2, b_n = 1, b_k = 1;
  uint64_t b_budget = kDefaultTerminalBudget;
  auto* build = app.add_subcommand("build", "Build N(m, n) or its k-fold parallel composition");
  build->add_option("--m", b_m, "Number of source sets")->required();
  build->add_option("--n", b_n, "Demands per set")->required();
  build->add_option("--k", b_k, "Parallel copies (1 = plain network)");
  build->add_option("--terminal-budget", b_budget, "Maximum number of terminals");
  build->add_option("-o,--out", out_path, "Output path");
  build->callback([&] {
    const NetworkGraph g =
        b_k == 1 ? BuildMNetwork(b_m, b_n, b_budget) : BuildParallel(b_m, b_n, b_k, b_budget);
    EmitJson(s, NetworkToJson(g), out_path);
  });

  // routing
  int r_m = 2, r_n = 1, r_k = 1, r_y = 0;
  uint32_t r_q = 2;
  uint64_t r_budget = kDefaultTerminalBudget;
  auto* routing = app.add_subcommand("routing", "Emit the routing code of a family instance");
  routing->add_option("--m", r_m, "Number of source sets")->required();
  routing->add_option("--n", r_n, "Demands per set")->required();
  routing->add_option("--k", r_k, "Parallel copies");
  routing->add_option("--y", r_y, "Sets per copy group (m = y*k)");
  routing->add_option("--q", r_q, "Field size (prime)")->required();
  routing->add_option("--terminal-budget", r_budget, "Maximum number of terminals");
  routing->add_option("-o,--out", out_path, "Output path");
  routing->callback([&] {
    const Fq field(r_q);
    if (r_k == 1) {
      const NetworkGraph g = BuildMNetwork(r_m, r_n, r_budget);
      EmitJson(s, CodeToJson(g, RoutingCode(g, field)), out_path);
      return;
    }
    if (r_y <= 0) throw std::invalid_argument("--y is required with --k > 1");
    const NetworkGraph g = BuildParallel(r_m, r_n, r_k, r_budget);
    EmitJson(s, CodeToJson(g, ParallelRoutingCode(g, r_y, field)), out_path);
  });

  // verify
  std::string net_path, code_path, terminal;
  int threads = 1;
  auto* verify = app.add_subcommand("verify", "Check that a code solves a network");
  verify->add_option("--net", net_path, "Network JSON")->required();
  verify->add_option("--code", code_path, "Code JSON")->required();
  verify->add_option("--terminal", terminal, "Report only this terminal");
  verify->add_option("--threads", threads, "Worker threads");
  verify->add_option("-o,--out", out_path, "Output path");
  verify->callback([&] {
    const NetworkGraph g = LoadNetwork(s, net_path);
    const FractionalLinearCode code = LoadCode(s, g, code_path);
    const VerificationReport rep = VerifySolution(g, code, std::max(1, threads));
    nlohmann::json j;
    bool pass = rep.ok();
    if (!terminal.empty()) {
      const int node = g.FindNode(terminal);
      auto it = std::find_if(rep.terminals.begin(), rep.terminals.end(),
                             [&](const TerminalVerdict& v) { return v.terminal == node; });
      if (node < 0 || it == rep.terminals.end()) {
        throw std::invalid_argument("unknown terminal " + terminal);
      }
      pass = it->pass;
      j["terminal"] = VerdictJson(g, *it);
    } else {
      j["terminals_checked"] = rep.terminals.size();
      j["failures"] = rep.failures();
      nlohmann::json failed = nlohmann::json::array();
      for (const auto& v : rep.terminals) {
        if (!v.pass) failed.push_back(VerdictJson(g, v));
      }
      j["failed"] = std::move(failed);
    }
    j["pass"] = pass;
    EmitJson(s, j, out_path);
    status = pass ? kExitOk : kExitNegative;
  });

  // solve
  int s_r = 1, s_l = 1;
  uint32_t s_q = 2;
  std::string s_mode = "exhaustive";
  bool s_prune = false, s_generic = false;
  std::optional<uint64_t> s_budget;
  auto* solve = app.add_subcommand("solve", "Exhaustive feasibility search on N(m, n)");
  solve->add_option("--net", net_path, "Network JSON")->required();
  solve->add_option("--r", s_r, "Symbols per message")->required();
  solve->add_option("--l", s_l, "Symbols per edge")->required();
  solve->add_option("--q", s_q, "Field size (prime)")->required();
  solve->add_option("--mode", s_mode, "exhaustive or routing")
      ->check(CLI::IsMember({"exhaustive", "routing"}));
  solve->add_flag("--claims-prune", s_prune, "Restrict bottleneck payloads to full dimension");
  solve->add_option("--budget", s_budget, "Configuration budget (default: LNCW_BUDGET or 1e9)");
  solve->add_option("--threads", threads, "Worker threads");
  solve->add_flag("--generic-kernel", s_generic, "Disable the packed F_2 kernel");
  solve->add_option("-o,--out", out_path, "Output path");
  solve->callback([&] {
    const NetworkGraph g = LoadNetwork(s, net_path);
    SearchOptions opts;
    opts.mode = ParseSearchMode(s_mode);
    opts.claims_prune = s_prune;
    opts.budget = s_budget ? *s_budget : DefaultSearchBudget();
    opts.threads = std::max(1, threads);
    opts.packed = !s_generic;
    const SearchReport rep = SearchFamily(g, CodeDims{s_r, s_l}, Fq(s_q), opts);
    EmitJson(s, SearchReportToJson(g, rep), out_path);
    switch (rep.outcome) {
      case SearchOutcome::kFeasible: status = kExitOk; break;
      case SearchOutcome::kInfeasible: status = kExitNegative; break;
      case SearchOutcome::kBudgetExhausted: status = kExitError; break;
    }
  });

  // cutbound
  int c_set = 0;
  std::string c_sources;
  auto* cut = app.add_subcommand("cutbound", "Cut-based upper bound on r/l for a source set");
  cut->add_option("--net", net_path, "Network JSON")->required();
  auto* set_opt = cut->add_option("--set", c_set, "Family source set index i (sources s_i_*)");
  cut->add_option("--sources", c_sources, "Comma-separated source node names")->excludes(set_opt);
  cut->add_option("-o,--out", out_path, "Output path");
  cut->callback([&] {
    const NetworkGraph g = LoadNetwork(s, net_path);
    std::vector<std::string> names = SplitComma(c_sources);
    if (c_set > 0) {
      const std::string prefix = "s_" + std::to_string(c_set) + "_";
      for (const auto& src : g.sources()) {
        if (g.node_name(src.node).rfind(prefix, 0) == 0) names.push_back(g.node_name(src.node));
      }
    }
    const RateBound b = RateUpperBound(g, names);
    EmitJson(s,
             {{"sources", names},
              {"cut", b.cut},
              {"set_size", b.set_size},
              {"bound", b.bound().ToString()}},
             out_path);
  });

  // reduce
  std::string net_out;
  auto* reduce = app.add_subcommand("reduce", "Map a parallel-network solution to N(m, n)");
  reduce->add_option("--net", net_path, "Parallel network JSON")->required();
  reduce->add_option("--code", code_path, "Code JSON")->required();
  reduce->add_option("--net-out", net_out, "Also write the single network");
  reduce->add_option("-o,--out", out_path, "Output path");
  reduce->callback([&] {
    const NetworkGraph g = LoadNetwork(s, net_path);
    const FractionalLinearCode code = LoadCode(s, g, code_path);
    const VerificationReport rep = VerifySolution(g, code);
    if (!rep.ok()) {
      EmitJson(s, {{"pass", false}, {"reason", "input code does not verify"},
                   {"failures", rep.failures()}}, out_path);
      status = kExitNegative;
      return;
    }
    const SerialCode serial = ReduceParallelCode(g, code);
    if (!net_out.empty()) WriteFile(s, net_out, NetworkToJson(serial.network).dump(2) + "\n");
    EmitJson(s, CodeToJson(serial.network, serial.code), out_path);
  });

  // claims
  uint64_t seed = 1;
  auto* claims = app.add_subcommand("claims", "Evaluate the rank claims on a verified code");
  claims->add_option("--net", net_path, "Network JSON")->required();
  claims->add_option("--code", code_path, "Code JSON")->required();
  claims->add_option("--seed", seed, "Sampling seed");
  claims->add_option("-o,--out", out_path, "Output path");
  claims->callback([&] {
    const NetworkGraph g = LoadNetwork(s, net_path);
    const FractionalLinearCode code = LoadCode(s, g, code_path);
    if (!VerifySolution(g, code).ok()) {
      EmitJson(s, {{"pass", false}, {"reason", "code does not verify"}}, out_path);
      status = kExitNegative;
      return;
    }
    s.seed = seed;
    ClaimsOptions opts;
    opts.seed = seed;
    const ClaimsReport rep = CheckClaims(g, code, opts);
    EmitJson(s, ClaimsReportToJson(rep), out_path);
    status = rep.ok() ? kExitOk : kExitNegative;
  });

  // polycheck
  std::string p_mode = "exhaustive";
  uint64_t p_samples = 10'000, p_mixed = 200;
  auto* poly = app.add_subcommand("polycheck", "Rank axioms and polymatroid conditions of a code");
  poly->add_option("--net", net_path, "Network JSON")->required();
  poly->add_option("--code", code_path, "Code JSON")->required();
  poly->add_option("--mode", p_mode, "exhaustive or sampled")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  poly->add_option("--seed", seed, "Sampling seed");
  poly->add_option("--samples", p_samples, "Axiom samples in sampled mode");
  poly->add_option("--mixed-samples", p_mixed, "Sampled mixed subsets for condition (3)");
  poly->add_option("-o,--out", out_path, "Output path");
  poly->callback([&] {
    const NetworkGraph g = LoadNetwork(s, net_path);
    const FractionalLinearCode code = LoadCode(s, g, code_path);
    if (!VerifySolution(g, code).ok()) {
      EmitJson(s, {{"pass", false}, {"reason", "code does not verify"}}, out_path);
      status = kExitNegative;
      return;
    }
    s.seed = seed;
    const InducedArrangement fam = InduceArrangement(g, code, GroundScope::kFamily);
    const RankOracle oracle(fam.arrangement);
    AxiomOptions aopts;
    aopts.exhaustive = p_mode == "exhaustive";
    aopts.samples = p_samples;
    aopts.seed = seed;
    const AxiomReport axioms = CheckRankAxioms(oracle, fam.Ground(), aopts);
    const InducedArrangement all = InduceArrangement(g, code, GroundScope::kAllEdges);
    DpmOptions dopts;
    dopts.mixed_samples = p_mixed;
    dopts.seed = seed;
    const DpmReport dpm = CheckDpmConditions(g, all, code.dims, dopts);
    const bool pass = axioms.pass && dpm.ok();
    EmitJson(s, {{"pass", pass}, {"axioms", AxiomReportToJson(axioms)},
                 {"conditions", DpmReportToJson(dpm)}}, out_path);
    status = pass ? kExitOk : kExitNegative;
  });

  // export-dot
  auto* dot = app.add_subcommand("export-dot", "Render a network as Graphviz DOT");
  dot->add_option("--net", net_path, "Network JSON")->required();
  dot->add_option("-o,--out", out_path, "Output path");
  dot->callback([&] { Emit(s, ExportDot(LoadNetwork(s, net_path)), out_path); });

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << "\n";
    return kExitError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return status;
}

}  // namespace lncw
