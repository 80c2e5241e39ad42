#include "tecost/sdp.hpp"

#include <cmath>
#include <sstream>

namespace tecost {

Matrix LmiBlock::eval(const RealVec& x) const {
    Matrix b = constant;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (x[i] != 0.0) b += x[i] * coeffs[i];
    return b;
}

std::size_t SdpProblem::total_side() const {
    std::size_t s = 0;
    for (const auto& b : blocks) s += b.side();
    return s;
}

SdpProblem build_sdp(const KrausChannel& ch) {
    const std::size_t d = ch.count(), n = ch.dim(), m = 2 * d + 1, side1 = 2 * d + 1;
    SdpProblem p;
    p.m = m;
    p.g.assign(m, 0.0);
    p.g[m - 1] = -1.0;

    LmiBlock ball;
    ball.constant = Matrix::identity(side1);
    for (std::size_t i = 0; i < 2 * d; ++i) {
        Matrix f(side1, side1);
        f(i, side1 - 1) = f(side1 - 1, i) = 1.0;
        ball.coeffs.push_back(f);
    }
    ball.coeffs.emplace_back(side1, side1);

    LmiBlock spec;
    spec.constant = Matrix(n, n);
    for (std::size_t j = 0; j < d; ++j) spec.coeffs.push_back(hermitian_part(ch.op(j)));
    for (std::size_t j = 0; j < d; ++j) {
        const Matrix& k = ch.op(j);
        spec.coeffs.push_back(cplx(0, -0.5) * (k - k.adjoint()));
    }
    spec.coeffs.push_back(-Matrix::identity(n));

    p.blocks = {std::move(ball), std::move(spec)};
    return p;
}

RealVec sdp_interior_start(const SdpProblem& prob) {
    RealVec x(prob.m, 0.0);
    x[prob.m - 1] = -1.0;
    return x;
}

namespace {

struct BarrierEval {
    bool feasible = false;
    double value = 0.0;  // -sum log det; the linear term is handled separately
};

BarrierEval barrier_value(const SdpProblem& p, const RealVec& x) {
    double v = 0.0;
    for (const auto& b : p.blocks) {
        const auto l = cholesky(b.eval(x));
        if (!l) return {};
        for (std::size_t k = 0; k < l->rows(); ++k) v -= 2.0 * std::log((*l)(k, k).real());
    }
    return {true, v};
}

// Re tr(X Y) for square X, Y.
double re_trace_product(const Matrix& x, const Matrix& y) {
    double s = 0.0;
    for (std::size_t a = 0; a < x.rows(); ++a)
        for (std::size_t b = 0; b < x.cols(); ++b) s += (x(a, b) * y(b, a)).real();
    return s;
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& prob, const RealVec& x0, const SdpSettings& s) {
    const std::size_t m = prob.m;
    if (x0.size() != m) throw std::invalid_argument("solve_sdp: start has wrong length");
    SdpSolution sol;
    sol.x = x0;
    if (!barrier_value(prob, x0).feasible) throw BarrierFailure("solve_sdp: start point is not strictly feasible");

    const double total = static_cast<double>(prob.total_side());
    double t = s.t0;
    while (true) {
        ++sol.stages;
        for (int it = 0;; ++it) {
            if (it >= s.max_newton) {
                std::ostringstream os;
                os << "solve_sdp: Newton did not converge at stage " << sol.stages << " (t = " << t << ")";
                throw BarrierFailure(os.str());
            }
            RealVec grad(m);
            std::vector<RealVec> hess(m, RealVec(m, 0.0));
            for (std::size_t i = 0; i < m; ++i) grad[i] = t * prob.g[i];
            for (const auto& b : prob.blocks) {
                const auto l = cholesky(b.eval(sol.x));
                if (!l) throw BarrierFailure("solve_sdp: iterate left the interior");
                const Matrix inv = inverse_from_cholesky(*l);
                std::vector<Matrix> y;
                for (std::size_t i = 0; i < m; ++i) y.push_back(inv * b.coeffs[i]);
                for (std::size_t i = 0; i < m; ++i) {
                    grad[i] -= y[i].trace().real();
                    for (std::size_t j = 0; j <= i; ++j) {
                        const double h = re_trace_product(y[i], y[j]);
                        hess[i][j] += h;
                        if (j != i) hess[j][i] += h;
                    }
                }
            }
            RealVec neg(m);
            for (std::size_t i = 0; i < m; ++i) neg[i] = -grad[i];
            const RealVec dx = solve_real(hess, neg);
            double slope = 0.0;
            for (std::size_t i = 0; i < m; ++i) slope += grad[i] * dx[i];
            if (-slope / 2.0 <= s.newton_tol) break;

            // Compare the change in barrier value directly; t * g.x is large
            // late in the run and would swamp the decrease otherwise.
            double gdx = 0.0;
            for (std::size_t i = 0; i < m; ++i) gdx += prob.g[i] * dx[i];
            const double f0 = barrier_value(prob, sol.x).value;
            double step = 1.0;
            RealVec trial(m);
            bool centered = false;
            for (int ls = 0;; ++ls) {
                for (std::size_t i = 0; i < m; ++i) trial[i] = sol.x[i] + step * dx[i];
                const BarrierEval e = barrier_value(prob, trial);
                if (e.feasible && t * step * gdx + (e.value - f0) <= s.armijo * step * slope) break;
                step *= s.shrink;
                if (ls >= 20 && -slope / 2.0 < 1e-6) {
                    centered = true;
                    break;
                }
                if (ls > 80) {
                    std::ostringstream os;
                    os << "solve_sdp: line search failed at stage " << sol.stages << ", Newton step " << it
                       << " (t = " << t << ", decrement " << -slope / 2.0 << ")";
                    throw BarrierFailure(os.str());
                }
            }
            // At large t the Armijo test sits at round-off once the decrement
            // is tiny and only short steps (or none) pass.
            if (centered) break;
            sol.x = trial;
            ++sol.newton_steps;
            if (step < 1e-2 && -slope / 2.0 < 1e-6) break;
        }
        if (total / t <= s.gap_tol) break;
        t *= s.mu;
    }
    sol.gap_bound = total / t;
    sol.objective = 0.0;
    for (std::size_t i = 0; i < m; ++i) sol.objective += prob.g[i] * sol.x[i];
    return sol;
}

}  // namespace tecost
