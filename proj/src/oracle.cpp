#include "tecost/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "tecost/cost.hpp"
#include "tecost/rng.hpp"

namespace tecost {

namespace {

constexpr std::uint64_t kCostStream = 0x636f7374ULL << 32;
constexpr std::uint64_t kFidelityStream = 0x6669646cULL << 32;

CVec sphere_sample(std::size_t dim, std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    CVec z(dim);
    for (auto& c : z) {
        const double re = rng.normal(), im = rng.normal();
        c = cplx(re, im);
    }
    return scaled(z, 1.0 / norm(z));
}

struct Candidate {
    double score;  // larger is better
    std::size_t index;
    CVec x;
};

// Keeps the k best by score; ties go to the lower sample index.
void offer(std::vector<Candidate>& best, std::size_t k, Candidate c) {
    auto worse = [](const Candidate& a, const Candidate& b) {
        return a.score < b.score || (a.score == b.score && a.index > b.index);
    };
    if (best.size() < k) {
        best.push_back(std::move(c));
    } else {
        auto w = std::min_element(best.begin(), best.end(),
                                  [&](const Candidate& a, const Candidate& b) { return worse(a, b); });
        if (!worse(*w, c)) return;
        *w = std::move(c);
    }
}

using Score = std::function<double(const CVec&, double)>;  // (x, tau); tau = 0 is the exact score

// Maximize f on the unit sphere by perturbing (or zeroing) one real coordinate
// at a time, halving the step when nothing improves. Each tau in taus is one pass; a
// smoothed score lets the search follow ridges where the exact one has kinks.
void refine(const Score& f, CVec& x, const std::vector<double>& taus, const OracleSettings& s) {
    const std::size_t m = 2 * x.size();
    for (double tau : taus) {
        double fx = f(x, tau);
        double h = s.step_start;
        for (int step = 0; step < s.refine_steps && h >= s.step_stop; ++step) {
            CVec best_y;
            double best_f = fx;
            auto consider = [&](CVec y) {
                const double ny = norm(y);
                if (ny == 0) return;
                y = scaled(y, 1.0 / ny);
                const double fy = f(y, tau);
                if (fy > best_f) best_f = fy, best_y = std::move(y);
            };
            for (std::size_t i = 0; i < m; ++i) {
                for (double sg : {1.0, -1.0}) {
                    CVec y = x;
                    y[i / 2] += i % 2 == 0 ? cplx(sg * h) : cplx(0, sg * h);
                    consider(std::move(y));
                }
                // Zeroing a coordinate lands exactly on sparse optima.
                CVec y = x;
                y[i / 2] = i % 2 == 0 ? cplx(0, y[i / 2].imag()) : cplx(y[i / 2].real(), 0);
                if (y[i / 2] != x[i / 2]) consider(std::move(y));
            }
            if (best_y.empty()) {
                h *= 0.5;
            } else {
                x = std::move(best_y);
                fx = best_f;
            }
        }
    }
}

struct SearchResult {
    double score;
    CVec x;
};

SearchResult search(const Score& score, std::size_t dim, std::uint64_t stream_base, const OracleSettings& s,
                    const std::vector<double>& taus) {
    if (s.samples < 1) throw std::invalid_argument("oracle: samples must be >= 1");
    std::vector<Candidate> top;
    const std::size_t keep = s.refine ? std::max<std::size_t>(1, s.refine_candidates) : 1;
    for (std::size_t i = 0; i < s.samples; ++i) {
        CVec x = sphere_sample(dim, s.seed, stream_base + i);
        const double f = score(x, 0.0);
        offer(top, keep, {f, i, std::move(x)});
    }
    std::sort(top.begin(), top.end(), [](const Candidate& a, const Candidate& b) {
        return a.score > b.score || (a.score == b.score && a.index < b.index);
    });
    SearchResult best{top.front().score, top.front().x};
    if (s.refine) {
        for (auto& c : top) {
            refine(score, c.x, taus, s);
            const double f = score(c.x, 0.0);
            if (f > best.score) best = {f, c.x};
        }
    }
    return best;
}

double overlap_fidelity(const KrausChannel& ch, const CVec& psi) {
    // <Psi|rho'|Psi> = sum_j |<Psi|(K_j (x) I)|Psi>|^2.
    const std::size_t n = ch.dim();
    double s = 0;
    for (const auto& k : ch.ops()) {
        cplx t = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const cplx kab = k(a, b);
                if (kab == cplx(0)) continue;
                for (std::size_t c = 0; c < n; ++c) t += std::conj(psi[a * n + c]) * kab * psi[b * n + c];
            }
        s += std::norm(t);
    }
    return std::sqrt(std::max(0.0, s));
}

}  // namespace

OracleEstimate oracle_cost(const KrausChannel& ch, const OracleSettings& s) {
    const HermitianPencil p = hermitian_parts(ch);
    const std::size_t n = ch.dim(), d = ch.count();
    // Soft minimum lambda_min - tau log sum exp(-(lambda_i - lambda_min)/tau).
    auto score = [&](const CVec& v, double tau) {
        const RealVec ab = ab_from_v(v);
        Matrix h(n, n);
        for (std::size_t j = 0; j < d; ++j) h += p.a[j] * cplx(ab[j]) + p.b[j] * cplx(ab[d + j]);
        const RealVec lam = hermitian_eig(h).values;
        if (tau == 0.0) return lam.front();
        double z = 0;
        for (double l : lam) z += std::exp(-(l - lam.front()) / tau);
        return lam.front() - tau * std::log(z);
    };
    const SearchResult r = search(score, d, kCostStream, s, {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8});
    return {clamped_acos(r.score), r.x, s.samples, s.seed, s.refine};
}

OracleEstimate oracle_cost(const KrausChannel& ch, std::size_t samples, std::uint64_t seed) {
    OracleSettings s;
    s.samples = samples;
    s.seed = seed;
    return oracle_cost(ch, s);
}

double fidelity_pure_vs_state(const CVec& psi, const Matrix& rho_out) {
    if (rho_out.rows() != psi.size() || !rho_out.square())
        throw std::invalid_argument("fidelity_pure_vs_state: dimension mismatch");
    return std::sqrt(std::max(0.0, dot(psi, rho_out * psi).real()));
}

double fidelity_general(const Matrix& rho, const Matrix& sigma) {
    const Matrix r = psd_sqrt(hermitian_part(rho));
    const EigResult e = hermitian_eig(hermitian_part(r * sigma * r));
    double f = 0;
    for (double v : e.values) f += std::sqrt(std::max(0.0, v));
    return f;
}

Matrix apply_to_half(const KrausChannel& ch, const CVec& psi) {
    const std::size_t n = ch.dim();
    if (psi.size() != n * n) throw std::invalid_argument("apply_to_half: |Psi> must have n*n entries");
    Matrix out(n * n, n * n);
    const Matrix id = Matrix::identity(n);
    for (const auto& k : ch.ops()) {
        const CVec phi = kron(k, id) * psi;
        out += outer(phi, phi);
    }
    return out;
}

OracleEstimate oracle_fidelity(const KrausChannel& ch, const OracleSettings& s) {
    const std::size_t n = ch.dim();
    auto score = [&](const CVec& psi, double) { return -overlap_fidelity(ch, psi); };
    const SearchResult r = search(score, n * n, kFidelityStream, s, {0.0});
    return {std::clamp(-r.score, 0.0, 1.0), r.x, s.samples, s.seed, s.refine};
}

OracleEstimate oracle_fidelity(const KrausChannel& ch, std::size_t samples, std::uint64_t seed) {
    OracleSettings s;
    s.samples = samples;
    s.seed = seed;
    return oracle_fidelity(ch, s);
}

}  // namespace tecost
