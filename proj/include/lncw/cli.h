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

// Command-line front end. Exit status: 0 success, 1 negative result
// (verification failure, infeasible, claim failure), 2 usage, I/O, format
// error or exhausted search budget.

#ifndef LNCW_CLI_H_
#define LNCW_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lncw/netmodel.h"

namespace lncw {

inline constexpr const char* kToolVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitError = 2;

// Runs one subcommand. argv[0] is the program name.
int RunCli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

// Deterministic DOT rendering; parallel copies become clusters.
std::string ExportDot(const NetworkGraph& g);

std::string Sha256Hex(const std::string& bytes);

}  // namespace lncw

#endif  // LNCW_CLI_H_
