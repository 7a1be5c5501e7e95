// Copyright 2026 The MiniP4 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MINIP4_SMT_H_
#define MINIP4_SMT_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace minip4::smt {

struct SolverResult {
    enum class Status { Sat, Unsat, Unknown, Error };
    Status status = Status::Error;
    std::map<std::string, uint64_t> model;  // populated on Sat
    std::string error;
};

// Runs `cmd` (a shell command, e.g. "z3 -in") as an interactive SMT-LIB2
// process: sends the script, reads the check-sat answer, and on sat asks for
// the given names with (get-value ...). Kills the process on timeout.
SolverResult run_solver(const std::string& cmd, const std::string& script,
                        const std::vector<std::string>& value_names, int timeout_ms);

// Self-contained QF_BV solver for the SMT-LIB2 subset this project emits
// (declare-const / define-fun / assert / check-sat / get-value). Decides by
// enumeration up to `max_bits` total declared bits, answering `unknown`
// beyond that. Speaks the same interactive protocol as run_solver expects,
// so GAUNTLET_SOLVER can point at `minip4 smt-solve`.
int solve_stream(std::istream& in, std::ostream& out, int max_bits);

}  // namespace minip4::smt

#endif  // MINIP4_SMT_H_
