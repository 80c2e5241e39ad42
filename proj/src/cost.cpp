#include "tecost/cost.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tecost/rng.hpp"

namespace tecost {

std::string method_name(Method m) {
    switch (m) {
        case Method::Supergradient: return "supergradient";
        case Method::Sdp: return "sdp";
        case Method::ClosedForm: return "closed-form";
        case Method::Oracle: return "oracle";
    }
    return "unknown";
}

double clamped_acos(double c) { return std::acos(std::clamp(c, 0.0, 1.0)); }

HermitianPencil hermitian_parts(const KrausChannel& ch) {
    HermitianPencil p;
    for (const auto& k : ch.ops()) {
        p.a.push_back(hermitian_part(k));
        Matrix b = cplx(0, -0.5) * (k - k.adjoint());
        p.b.push_back(hermitian_part(b));
    }
    return p;
}

Matrix combine(const KrausChannel& ch, const CVec& v) {
    if (v.size() != ch.count()) throw std::invalid_argument("coefficient vector length != number of Kraus operators");
    Matrix kv(ch.dim(), ch.dim());
    for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != cplx(0)) kv += v[j] * ch.op(j);
    return kv;
}

double objective(const KrausChannel& ch, const CVec& v) {
    if (norm(v) > 1.0 + 1e-12) throw std::invalid_argument("objective: |v| exceeds 1");
    return lambda_min(hermitian_part(combine(ch, v)));
}

CVec v_from_ab(const RealVec& ab) {
    const std::size_t d = ab.size() / 2;
    CVec v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = cplx(ab[j], -ab[d + j]);
    return v;
}

RealVec ab_from_v(const CVec& v) {
    const std::size_t d = v.size();
    RealVec ab(2 * d);
    for (std::size_t j = 0; j < d; ++j) {
        ab[j] = v[j].real();
        ab[d + j] = -v[j].imag();
    }
    return ab;
}

double pencil_value(const HermitianPencil& p, const RealVec& ab, RealVec* supergrad) {
    const std::size_t d = p.a.size(), n = p.a.front().rows();
    Matrix s(n, n);
    for (std::size_t j = 0; j < d; ++j) {
        if (ab[j] != 0.0) s += ab[j] * p.a[j];
        if (ab[d + j] != 0.0) s += ab[d + j] * p.b[j];
    }
    const EigResult e = hermitian_eig(s);
    if (supergrad) {
        const CVec x = e.vectors.col(0);
        supergrad->assign(2 * d, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            (*supergrad)[j] = dot(x, p.a[j] * x).real();
            (*supergrad)[d + j] = dot(x, p.b[j] * x).real();
        }
    }
    return e.values.front();
}

double lower_bound(const KrausChannel& ch) {
    return clamped_acos(norm(kraus_traces(ch)) / static_cast<double>(ch.dim()));
}

namespace {

double norm2(const RealVec& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// Euclidean projection of a Hermitian matrix onto the density matrices.
Matrix project_density(const Matrix& r) {
    const EigResult e = hermitian_eig(hermitian_part(r));
    RealVec u = e.values;
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0, theta = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        css += u[k];
        const double th = (css - 1.0) / static_cast<double>(k + 1);
        if (u[k] - th > 0) theta = th;
    }
    RealVec w(e.values.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::max(0.0, e.values[k] - theta);
    return hermitian_part(e.vectors * Matrix::diag(w) * e.vectors.adjoint());
}

CVec traces_against(const KrausChannel& ch, const Matrix& rho) {
    CVec t(ch.count());
    for (std::size_t j = 0; j < ch.count(); ++j) t[j] = (rho * ch.op(j)).trace();
    return t;
}

struct Incumbent {
    double value = -std::numeric_limits<double>::infinity();
    RealVec ab;
};

// Projected supergradient ascent over the unit ball from one start.
Incumbent ascend(const HermitianPencil& p, RealVec z, const SolverConfig& cfg, int& iterations) {
    Incumbent best;
    int stall = 0;
    RealVec g;
    for (int t = 1; t <= cfg.max_iterations; ++t) {
        ++iterations;
        const double f = pencil_value(p, z, &g);
        if (f > best.value + cfg.stall_improvement) stall = 0;
        else if (++stall >= cfg.stall_window) break;
        if (f > best.value) best = {f, z};
        const double eta = cfg.step0 / std::sqrt(static_cast<double>(t));
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += eta * g[i];
        const double nz = norm2(z);
        if (nz > 1.0)
            for (double& zi : z) zi /= nz;
    }
    return best;
}

struct DualPolish {
    Incumbent primal;
    double dual = 0.0;  // certified upper bound on the maximum
    int iterations = 0;
};

// The maximum of lambda_min(Re K_v) over the ball equals the minimum over
// density matrices rho of |(tr rho K_j)_j|. Accelerated projected gradient on
// |tau(rho)|^2 gives dual upper bounds; v = conj(tau)/|tau| gives primal points.
DualPolish polish(const KrausChannel& ch, const HermitianPencil& p, Incumbent start, const SolverConfig& cfg) {
    DualPolish out;
    out.primal = std::move(start);
    RealVec zero(2 * ch.count(), 0.0);
    if (out.primal.value < 0.0) out.primal = {0.0, zero};

    const double lip = 2.0 * static_cast<double>(ch.dim());
    const std::size_t n = ch.dim();
    Matrix rho = Matrix::identity(n) * cplx(1.0 / static_cast<double>(n));
    {
        const RealVec& ab = out.primal.ab;
        Matrix s(n, n);
        for (std::size_t j = 0; j < ch.count(); ++j) s += ab[j] * p.a[j] + ab[ch.count() + j] * p.b[j];
        const CVec x = hermitian_eig(s).vectors.col(0);
        if (norm2(ab) > 0) rho = outer(x, x);
    }
    Matrix y = rho;
    double tk = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    out.dual = norm(traces_against(ch, rho));

    for (int it = 0; it < cfg.polish_iterations; ++it) {
        out.iterations = it + 1;
        if (out.dual - out.primal.value <= cfg.polish_gap) break;
        const CVec ty = traces_against(ch, y);
        Matrix grad(n, n);
        for (std::size_t j = 0; j < ch.count(); ++j) grad += std::conj(ty[j]) * ch.op(j);
        grad = grad + grad.adjoint();
        const Matrix next = project_density(y - grad * cplx(1.0 / lip));
        const CVec tau = traces_against(ch, next);
        const double nt = norm(tau);
        double tnext = (1.0 + std::sqrt(1.0 + 4.0 * tk * tk)) / 2.0;
        if (nt > prev) tnext = 1.0;  // restart momentum on increase
        y = next + (next - rho) * cplx((tk - 1.0) / tnext);
        if (nt > prev) y = next;
        rho = next;
        tk = tnext;
        prev = nt;
        out.dual = std::min(out.dual, nt);
        if (nt > 0) {
            CVec v = scaled(tau, 1.0 / nt);
            for (auto& z : v) z = std::conj(z);
            const RealVec ab = ab_from_v(v);
            const double f = pencil_value(p, ab);
            if (f > out.primal.value) out.primal = {f, ab};
        }
    }
    return out;
}

RealVec random_unit(std::size_t dim, std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    RealVec z(dim);
    for (double& zi : z) zi = rng.normal();
    const double nz = norm2(z);
    for (double& zi : z) zi /= nz;
    return z;
}

CVec clip_to_ball(CVec v) {
    const double nv = norm(v);
    if (nv > 1.0) v = scaled(v, 1.0 / nv);
    return v;
}

}  // namespace

CostResult solve_supergradient(const KrausChannel& ch, const SolverConfig& cfg) {
    if (cfg.max_iterations <= 0 || cfg.starts <= 0 || cfg.stall_window <= 0 || cfg.polish_iterations < 0)
        throw std::invalid_argument("solve_supergradient: iteration counts must be positive");
    const HermitianPencil p = hermitian_parts(ch);
    const std::size_t d = ch.count();

    std::vector<RealVec> starts;
    for (std::size_t j = 0; j < std::min<std::size_t>(d, 4) && starts.size() < static_cast<std::size_t>(cfg.starts);
         ++j) {
        RealVec e(2 * d, 0.0);
        e[j] = 1.0;
        starts.push_back(e);
    }
    for (std::uint64_t k = 0; starts.size() < static_cast<std::size_t>(cfg.starts); ++k)
        starts.push_back(random_unit(2 * d, cfg.seed, k));

    CostResult r;
    Incumbent best;
    for (const auto& z0 : starts) {
        const Incumbent run = ascend(p, z0, cfg, r.iterations);
        if (run.value > best.value) best = run;  // strict: ties keep the lowest start index
    }
    const DualPolish pol = polish(ch, p, best, cfg);
    r.iterations += pol.iterations;

    r.method = Method::Supergradient;
    r.optimal_v = clip_to_ball(v_from_ab(pol.primal.ab));
    r.cos_value = std::clamp(objective(ch, r.optimal_v), 0.0, 1.0);
    r.angle = clamped_acos(r.cos_value);
    r.lower_bracket = std::min(r.angle, std::max(lower_bound(ch), clamped_acos(pol.dual)));
    r.upper_bracket = r.angle;
    r.supergradient_value = r.cos_value;
    return r;
}

CostResult solve_sdp_cost(const KrausChannel& ch, const SolverConfig& cfg) {
    const SdpProblem prob = build_sdp(ch);
    const SdpSolution sol = solve_sdp(prob, sdp_interior_start(prob), cfg.sdp);
    RealVec ab(sol.x.begin(), sol.x.end() - 1);
    CostResult r;
    r.method = Method::Sdp;
    r.optimal_v = clip_to_ball(v_from_ab(ab));
    r.iterations = sol.newton_steps;
    const double lam = sol.x.back();
    r.cos_value = std::clamp(objective(ch, r.optimal_v), 0.0, 1.0);
    r.angle = clamped_acos(r.cos_value);
    const double certified = std::max(lam, r.cos_value) + sol.gap_bound;
    r.lower_bracket = std::min(r.angle, std::max(lower_bound(ch), clamped_acos(certified)));
    r.upper_bracket = r.angle;
    r.sdp_value = lam;
    return r;
}

namespace {

CVec trace_direction(const KrausChannel& ch) {
    CVec t = kraus_traces(ch);
    const double s = norm(t);
    if (s <= 1e-14) return CVec(ch.count(), 0.0);
    for (auto& z : t) z = std::conj(z) / s;
    return t;
}

}  // namespace

std::optional<double> cost_alpha_identity(const KrausChannel& ch) {
    const KrausChannel c = canonical_form(ch);
    const Matrix& k1 = c.op(0);
    const cplx alpha = k1.trace() / static_cast<double>(ch.dim());
    if (max_abs_diff(k1, alpha * Matrix::identity(ch.dim())) > 1e-9) return std::nullopt;
    return clamped_acos(std::abs(alpha));
}

std::optional<double> cost_projector(const KrausChannel& ch) {
    const std::size_t n = ch.dim();
    long rank = -1;
    for (const auto& k : ch.ops()) {
        if (max_abs(k) <= 1e-9) continue;  // a zero operator is a scaled projector of any rank
        const RealVec ev = hermitian_eig(hermitian_part(k.adjoint() * k)).values;
        const double top = ev.back();
        long r = 0;
        for (double e : ev) {
            if (std::abs(e - top) <= 1e-9) ++r;
            else if (std::abs(e) > 1e-9) return std::nullopt;
        }
        const cplx s = k.trace() / static_cast<double>(r);
        if (std::abs(s) <= 1e-9) return std::nullopt;
        const Matrix proj = k * (1.0 / s);
        if (max_abs_diff(proj * proj, proj) > 1e-9 || max_abs_diff(proj, proj.adjoint()) > 1e-9) return std::nullopt;
        if (rank >= 0 && r != rank) return std::nullopt;
        rank = r;
    }
    if (rank < 0) return std::nullopt;
    return clamped_acos(std::sqrt(static_cast<double>(rank) / static_cast<double>(n)));
}

CostResult cost_closed(const KrausChannel& ch) {
    std::optional<double> angle = cost_alpha_identity(ch);
    if (!angle) angle = cost_projector(ch);
    if (!angle) throw std::invalid_argument("no closed form applies: canonical K_1 is not a multiple of I and the "
                                            "operators are not equal-rank scaled projectors");
    CostResult r;
    r.method = Method::ClosedForm;
    // In both closed-form families the trace direction attains the optimum.
    r.optimal_v = trace_direction(ch);
    r.cos_value = std::cos(*angle);
    r.angle = *angle;
    r.lower_bracket = std::min(r.angle, lower_bound(ch));
    r.upper_bracket = r.angle;
    return r;
}

CostResult cost(const KrausChannel& ch, const SolverConfig& cfg) {
    if (cost_alpha_identity(ch) || cost_projector(ch)) return cost_closed(ch);
    const CostResult sg = solve_supergradient(ch, cfg);
    const CostResult sd = solve_sdp_cost(ch, cfg);
    const double gap = std::abs(sd.sdp_value - sg.cos_value);
    if (gap > cfg.disagree_fail && std::abs(sd.cos_value - sg.cos_value) > cfg.disagree_fail) {
        std::ostringstream os;
        os << "solvers disagree: sdp lambda = " << sd.sdp_value << ", supergradient = " << sg.cos_value;
        throw SolverDisagreement(os.str(), sd.sdp_value, sg.cos_value);
    }
    CostResult r = sd.cos_value > sg.cos_value ? sd : sg;
    r.lower_bracket = std::min(r.angle, std::max(sg.lower_bracket, sd.lower_bracket));
    r.iterations = sg.iterations + sd.iterations;
    r.sdp_value = sd.sdp_value;
    r.supergradient_value = sg.cos_value;
    return r;
}

PhaseResult phase_optimize(const Matrix& k) {
    if (!k.square()) throw std::invalid_argument("phase_optimize: square input required");
    const Matrix kd = k.adjoint();
    auto g = [&](double th) {
        const cplx e = std::polar(1.0, th);
        return lambda_min(hermitian_part(e * k + std::conj(e) * kd));
    };
    const int grid = 720;
    const double h = 2.0 * std::numbers::pi / grid;
    int kbest = 0;
    double vbest = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        const double v = g(i * h);
        if (v > vbest) vbest = v, kbest = i;
    }
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = (kbest - 1) * h, hi = (kbest + 1) * h;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1, x1 = x2, f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2, x2 = x1, f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = g(x1);
        }
    }
    double theta = kbest * h;
    const double mid = 0.5 * (lo + hi), fmid = g(mid);
    if (fmid > vbest) vbest = fmid, theta = mid;
    theta = std::fmod(theta, 2.0 * std::numbers::pi);
    if (theta < 0) theta += 2.0 * std::numbers::pi;
    return {theta, vbest};
}

double heuristic_upper_bound(const KrausChannel& ch) {
    // With sigma_+ the positive part, the best nonnegative unit c gives
    // sum c_j sigma_j = |sigma_+|.
    double s2 = 0;
    for (const auto& k : ch.ops()) {
        const double s = phase_optimize(k).value;
        if (s > 0) s2 += s * s;
    }
    return clamped_acos(std::sqrt(s2) / 2.0);
}

double fidelity_from_cost(const KrausChannel& ch, const SolverConfig& cfg) { return cost(ch, cfg).cos_value; }

}  // namespace tecost
