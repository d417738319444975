#pragma once

#include "hallbounds/types.hpp"

#include <json.hpp>

#include <string>

namespace hallbounds {

using Json = nlohmann::ordered_json;

struct CliOptions {
  double tol = kDefaultTol;
  int quad_order = 0;  // 0 = adaptive order doubling
};

// Each run_* consumes a parsed job payload and returns the report document.
// Schema problems throw InputError; poles/degeneracies propagate as typed
// errors from the math layer. See README for the payload schemas.
Json run_bounds(const Json& payload, const CliOptions& opt);
Json run_hs(const Json& payload, const CliOptions& opt);
Json run_laminate(const Json& payload, const CliOptions& opt);
Json run_counterexample(const Json& payload, const CliOptions& opt);
Json run_gamma_check(const Json& payload, const CliOptions& opt);

// SVG 1.1 document of the tangency-circle diagram (payload as run_hs).
std::string run_plot(const Json& payload, const CliOptions& opt);

// Deterministic serialization: insertion-ordered keys, floats printed with
// 17 significant digits, 2-space indent, trailing newline. Non-finite
// numbers are rejected (poles are typed errors, never NaN in a report).
std::string render_report(const Json& report);

// True when every BoundsVerdict in the report is satisfied (drives the
// 0-vs-1 exit code).
bool report_all_satisfied(const Json& report);

// Full dispatch: parse argv, read the job document, write report or SVG.
// Exit codes: 0 computed & all bounds satisfied, 1 some bound violated,
// 2 input error, 3 mathematical pole/degeneracy.
int run_cli(int argc, char** argv);

}  // namespace hallbounds
