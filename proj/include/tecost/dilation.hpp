#pragma once

#include <stdexcept>

#include "tecost/channel.hpp"
#include "tecost/cost.hpp"

namespace tecost {

struct DilationResult {
    Matrix u;
    std::size_t ancilla_dim = 0;  // d'
    std::size_t system_dim = 0;   // n
    double maxnorm = 0.0;
    CVec realized_v;
};

struct GramMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// max_j |theta_j| over the eigenphases of U in (-pi, pi].
double unitary_max_norm(const Matrix& u);

// 2n x 2n unitary with top-left block K and bottom-left block sqrt(I - K†K)
// whose max-norm is arccos(lambda_min(K + K†)/2).
DilationResult choi_dilation(const Matrix& k);

// Unitary W on C^p with W m1 = m2, for p x n stacks with equal Gram matrices.
Matrix match_isometries(const Matrix& m1, const Matrix& m2, double tol = 1e-7);

DilationResult optimal_extension(const KrausChannel& ch, const CostResult& cr);

// Kraus operators read off the first block column of U (ancilla index major).
KrausChannel extension_channel(const Matrix& u, std::size_t n);

// Tr_B[U (|0><0| (x) rho) U†].
Matrix apply_extension(const Matrix& u, std::size_t n, const Matrix& rho);

}  // namespace tecost
