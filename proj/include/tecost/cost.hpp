#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tecost/channel.hpp"
#include "tecost/sdp.hpp"

namespace tecost {

enum class Method { Supergradient, Sdp, ClosedForm, Oracle };
std::string method_name(Method m);

struct HermitianPencil {
    std::vector<Matrix> a;  // (K_j + K_j†)/2
    std::vector<Matrix> b;  // (K_j - K_j†)/(2i)
};

struct CostResult {
    double angle = 0.0;
    double cos_value = 0.0;
    CVec optimal_v;
    Method method = Method::Supergradient;
    double lower_bracket = 0.0;
    double upper_bracket = 0.0;
    int iterations = 0;
    // Both solver values when the facade ran both; NaN otherwise.
    double sdp_value = std::nan("");
    double supergradient_value = std::nan("");
};

struct SolverConfig {
    int max_iterations = 5000;
    int starts = 8;
    int stall_window = 200;
    double stall_improvement = 1e-12;
    double step0 = 0.5;
    // Dual polish after the ascent (see solve_supergradient).
    int polish_iterations = 20000;
    double polish_gap = 1e-11;
    std::uint64_t seed = 0;
    double agree_tol = 1e-5;
    double disagree_fail = 1e-4;
    SdpSettings sdp;
};

struct SolverDisagreement : std::runtime_error {
    SolverDisagreement(const std::string& what, double sdp, double sg)
        : std::runtime_error(what), sdp_value(sdp), supergradient_value(sg) {}
    double sdp_value, supergradient_value;
};

HermitianPencil hermitian_parts(const KrausChannel& ch);
Matrix combine(const KrausChannel& ch, const CVec& v);  // K_v = sum v_j K_j
double objective(const KrausChannel& ch, const CVec& v);
// v_j = a_j - i b_j.
CVec v_from_ab(const RealVec& ab);
RealVec ab_from_v(const CVec& v);
// lambda_min(sum a_j A_j + b_j B_j) and the supergradient (x†A_j x, x†B_j x).
double pencil_value(const HermitianPencil& p, const RealVec& ab, RealVec* supergrad = nullptr);

CostResult solve_supergradient(const KrausChannel& ch, const SolverConfig& cfg = {});
CostResult solve_sdp_cost(const KrausChannel& ch, const SolverConfig& cfg = {});
CostResult cost(const KrausChannel& ch, const SolverConfig& cfg = {});
CostResult cost_closed(const KrausChannel& ch);  // throws if no closed form applies

double lower_bound(const KrausChannel& ch);
std::optional<double> cost_alpha_identity(const KrausChannel& ch);
std::optional<double> cost_projector(const KrausChannel& ch);

struct PhaseResult {
    double theta;
    double value;
};
PhaseResult phase_optimize(const Matrix& k);
double heuristic_upper_bound(const KrausChannel& ch);

double fidelity_from_cost(const KrausChannel& ch, const SolverConfig& cfg = {});

// arccos with its argument clamped to [0, 1].
double clamped_acos(double c);

}  // namespace tecost
