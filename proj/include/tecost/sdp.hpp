#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tecost/channel.hpp"

namespace tecost {

// One linear matrix inequality H + sum_i x_i G_i >= 0.
struct LmiBlock {
    std::vector<Matrix> coeffs;  // G_1..G_m
    Matrix constant;             // H
    std::size_t side() const { return constant.rows(); }
    Matrix eval(const RealVec& x) const;
};

// minimize g.x subject to every block being PSD.
struct SdpProblem {
    std::size_t m = 0;
    RealVec g;
    std::vector<LmiBlock> blocks;
    std::size_t total_side() const;
};

struct SdpSettings {
    double t0 = 1.0;
    double mu = 10.0;
    double armijo = 0.01;
    double shrink = 0.5;
    double newton_tol = 1e-10;
    double gap_tol = 1e-9;
    int max_newton = 200;
};

struct SdpSolution {
    RealVec x;
    double objective = 0.0;  // g.x
    double gap_bound = 0.0;  // total side / t at exit
    int newton_steps = 0;
    int stages = 0;
};

struct BarrierFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Variables (a_1..a_d, b_1..b_d, lambda); block 1 is the 2d+1 ball gadget,
// block 2 is sum_j (a_j A_j + b_j B_j) - lambda I.
SdpProblem build_sdp(const KrausChannel& ch);
// a = b = 0, lambda = -1.
RealVec sdp_interior_start(const SdpProblem& prob);

SdpSolution solve_sdp(const SdpProblem& prob, const RealVec& x0, const SdpSettings& s = {});

}  // namespace tecost
