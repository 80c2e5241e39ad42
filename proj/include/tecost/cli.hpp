#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tecost/channel.hpp"

namespace tecost::cli {

enum ExitCode { kOk = 0, kBadInput = 2, kSolverFailure = 3, kGramMismatch = 4 };

struct Flags {
    std::string method = "auto";  // auto | sdp | subgrad | closed
    double tol = 1e-8;
    std::size_t oracle = 0;  // 0 disables the fidelity oracle
    std::uint64_t seed = 0;
    bool json = false;
};

struct RunReport {
    std::size_t n = 0, d = 0;
    CVec canonical_traces;
    std::optional<double> angle, cos, lower, upper, fidelity_oracle;
    std::optional<double> lower_bound, heuristic_upper;  // bounds command
    std::optional<double> maxnorm;                       // dilate command
    std::string method;
    nlohmann::json residuals = nlohmann::json::object();
    double wall_time = 0.0;

    nlohmann::json to_json() const;
    std::string to_text() const;
};

RunReport cmd_cost(const KrausChannel& ch, const Flags& f);
RunReport cmd_fidelity(const KrausChannel& ch, const Flags& f);
RunReport cmd_bounds(const KrausChannel& ch, const Flags& f);
// Writes the extension unitary to out.
RunReport cmd_dilate(const KrausChannel& ch, const std::string& out, const Flags& f);

struct GenParams {
    std::size_t n = 2, d = 2, r = 1;
    double p = 0.0;
    std::uint64_t seed = 0;
};
KrausChannel cmd_gen(const std::string& family, const GenParams& gp);

// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace tecost::cli
