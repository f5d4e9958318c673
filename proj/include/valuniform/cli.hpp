#pragma once

#include "valuniform/json_io.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace valuniform {

// Runs one problem (kind in {newton, krasner, monoid, fan, uniformize,
// invariants}) on its JSON payload. Throws valuniform::Error.
json execute(const std::string& kind, const json& payload);

// Re-checks a certificate emitted by `uniformize` or `fan refine`.
// Returns {"kind", "checks": {name: "passed"|"failed"}, "valid": bool}.
json verify_certificate_json(const json& certificate);

// {"error": {"kind", "code", "message"}} and the matching exit code.
json error_json(const std::exception& e);
int exit_code_for(const std::exception& e);

// Runs every *.json fixture of `dir`, comparing against meta.expected.
int run_corpus(const std::string& dir, unsigned jobs, std::ostream& out, std::ostream& err);

// Command-line entry point; JSON results go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace valuniform
