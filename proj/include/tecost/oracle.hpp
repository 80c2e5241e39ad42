#pragma once

#include <cstdint>

#include "tecost/channel.hpp"

namespace tecost {

struct OracleEstimate {
    double value = 0.0;
    CVec witness;  // v for the cost oracle, |Psi> for the fidelity oracle
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool refined = false;
};

struct OracleSettings {
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    bool refine = true;
    std::size_t refine_candidates = 5;
    int refine_steps = 200;
    double step_start = 0.1;
    double step_stop = 1e-7;
};

// Angle arccos(max(0, best sampled objective)).
OracleEstimate oracle_cost(const KrausChannel& ch, const OracleSettings& s = {});
OracleEstimate oracle_cost(const KrausChannel& ch, std::size_t samples, std::uint64_t seed);

// sqrt(max(0, Re <psi|rho'|psi>)).
double fidelity_pure_vs_state(const CVec& psi, const Matrix& rho_out);
// Tr sqrt(sqrt(rho) sigma sqrt(rho)), used to cross-check the pure-state shortcut.
double fidelity_general(const Matrix& rho, const Matrix& sigma);

// (K (x) I)(|Psi><Psi|) for |Psi> in C^{n*n}, system factor first.
Matrix apply_to_half(const KrausChannel& ch, const CVec& psi);

// Minimum sampled entanglement fidelity over pure |Psi> in C^{n*n}.
OracleEstimate oracle_fidelity(const KrausChannel& ch, const OracleSettings& s = {});
OracleEstimate oracle_fidelity(const KrausChannel& ch, std::size_t samples, std::uint64_t seed);

}  // namespace tecost
