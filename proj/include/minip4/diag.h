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

#ifndef MINIP4_DIAG_H_
#define MINIP4_DIAG_H_

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace minip4 {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

enum class Severity { Error, Warning };

// One user-facing message, printable as file:line:col: severity: message.
struct Diagnostic {
    SourceLoc loc;
    Severity severity = Severity::Error;
    std::string code;  // e.g. "SyntaxError", "TypeError", "ShiftWidthError"
    std::string message;

    std::string render(const std::string& file) const {
        std::ostringstream os;
        os << file << ":" << loc.line << ":" << loc.col << ": "
           << (severity == Severity::Error ? "error" : "warning") << ": " << message;
        return os.str();
    }
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_error(const Diagnostics& ds) {
    for (const auto& d : ds)
        if (d.severity == Severity::Error) return true;
    return false;
}

// Violated internal invariant. Pass code throws this; the pipeline records it
// as a crash instead of unwinding the whole process.
class InternalError : public std::runtime_error {
  public:
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

// Always-on invariant check; must not depend on NDEBUG since fired assertions
// are themselves a result we report.
#define MINIP4_CHECK(cond, msg)                                                       \
    do {                                                                              \
        if (!(cond)) {                                                                \
            throw ::minip4::InternalError(std::string("assertion failed: ") + (msg)); \
        }                                                                             \
    } while (0)

}  // namespace minip4

#endif  // MINIP4_DIAG_H_
