#include "tecost/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tecost/rng.hpp"

namespace tecost {

std::string channel_defect(std::size_t dim, const std::vector<Matrix>& ops, double tol) {
    if (dim == 0) return "dimension must be at least 1";
    if (ops.empty()) return "at least one Kraus operator is required";
    Matrix sum(dim, dim);
    for (std::size_t j = 0; j < ops.size(); ++j) {
        if (ops[j].rows() != dim || ops[j].cols() != dim) {
            std::ostringstream os;
            os << "Kraus operator " << j << " is " << ops[j].rows() << "x" << ops[j].cols() << ", expected " << dim
               << "x" << dim;
            return os.str();
        }
        if (!all_finite(ops[j])) return "Kraus operator " + std::to_string(j) + " has non-finite entries";
        sum += ops[j].adjoint() * ops[j];
    }
    const double dev = max_abs_diff(sum, Matrix::identity(dim));
    if (dev > tol) {
        std::ostringstream os;
        os << "trace preservation fails: max |sum K_j^dag K_j - I| = " << dev << " > " << tol;
        return os.str();
    }
    return {};
}

bool validate(std::size_t dim, const std::vector<Matrix>& ops, double tol) {
    return channel_defect(dim, ops, tol).empty();
}

bool validate(const KrausChannel& ch, double tol) { return validate(ch.dim(), ch.ops(), tol); }

KrausChannel::KrausChannel(std::size_t dim, std::vector<Matrix> ops) : dim_(dim), ops_(std::move(ops)) {
    const std::string why = channel_defect(dim_, ops_, kChannelTol);
    if (!why.empty()) throw std::invalid_argument("invalid channel: " + why);
}

KrausChannel::KrausChannel(std::vector<Matrix> ops)
    : KrausChannel(ops.empty() ? 0 : ops.front().rows(), std::move(ops)) {}

Matrix apply(const KrausChannel& ch, const Matrix& rho) {
    if (rho.rows() != ch.dim() || rho.cols() != ch.dim()) throw std::invalid_argument("apply: dimension mismatch");
    Matrix out(ch.dim(), ch.dim());
    for (const auto& k : ch.ops()) out += k * rho * k.adjoint();
    return out;
}

Matrix choi(const KrausChannel& ch) {
    // Sum over j of |w_j><w_j| with w_j = sum_a |a> (x) K_j|a>.
    const std::size_t n = ch.dim();
    Matrix c(n * n, n * n);
    for (const auto& k : ch.ops()) {
        CVec w(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t i = 0; i < n; ++i) w[a * n + i] = k(i, a);
        c += outer(w, w);
    }
    return c;
}

KrausChannel kraus_transform(const KrausChannel& ch, const Matrix& w) {
    const std::size_t d = ch.count();
    if (w.rows() != d || w.cols() != d) throw std::invalid_argument("kraus_transform: W must be d x d");
    if (!is_unitary(w, 1e-10)) throw std::invalid_argument("kraus_transform: W not unitary within 1e-10");
    std::vector<Matrix> out(d, Matrix(ch.dim(), ch.dim()));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (w(i, j) != cplx(0)) out[i] += w(i, j) * ch.op(j);
    return KrausChannel(ch.dim(), std::move(out));
}

KrausChannel pad_zero(const KrausChannel& ch) {
    std::vector<Matrix> ops = ch.ops();
    ops.emplace_back(ch.dim(), ch.dim());
    return KrausChannel(ch.dim(), std::move(ops));
}

CVec kraus_traces(const KrausChannel& ch) {
    CVec t;
    for (const auto& k : ch.ops()) t.push_back(k.trace());
    return t;
}

std::optional<Matrix> canonical_rotation(const KrausChannel& ch) {
    const CVec t = kraus_traces(ch);
    const double s = norm(t);
    if (s <= 1e-14) return std::nullopt;
    // W has first row conj(t)/s, i.e. W = Q† with Q e1 = t/s.
    return unitary_with_first_column(scaled(t, 1.0 / s)).adjoint();
}

KrausChannel canonical_form(const KrausChannel& ch) {
    const KrausChannel padded = ch.count() == 1 ? pad_zero(ch) : ch;
    const auto w = canonical_rotation(padded);
    if (!w) return padded;
    return kraus_transform(padded, *w);
}

Matrix weyl_operator(std::size_t n, std::size_t a, std::size_t b) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>((b * k) % n) / static_cast<double>(n);
        m((k + a) % n, k) = std::polar(1.0, ang);
    }
    return m;
}

KrausChannel make_depolarizing(std::size_t n, double p) {
    if (n < 1) throw std::invalid_argument("make_depolarizing: n must be >= 1");
    const double n2 = static_cast<double>(n * n);
    const double pmax = n == 1 ? 0.0 : n2 / (n2 - 1.0);
    if (!(p >= 0.0) || p > pmax + 1e-15) {
        std::ostringstream os;
        os << "make_depolarizing: p = " << p << " outside [0, " << pmax << "]";
        throw std::invalid_argument(os.str());
    }
    std::vector<Matrix> ops;
    const double alpha = std::sqrt(std::max(0.0, 1.0 - p * (n2 - 1.0) / n2));
    const double beta = std::sqrt(p) / static_cast<double>(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) ops.push_back((a == 0 && b == 0 ? alpha : beta) * weyl_operator(n, a, b));
    return KrausChannel(n, std::move(ops));
}

KrausChannel make_projector_channel(const std::vector<Matrix>& projectors, const CVec& scales) {
    if (projectors.empty() || projectors.size() != scales.size())
        throw std::invalid_argument("make_projector_channel: need one scale per projector");
    const std::size_t n = projectors.front().rows();
    long rank = -1;
    Matrix total(n, n);
    std::vector<Matrix> ops;
    for (std::size_t j = 0; j < projectors.size(); ++j) {
        const Matrix& p = projectors[j];
        if (!p.square() || p.rows() != n) throw std::invalid_argument("make_projector_channel: dimension mismatch");
        if (max_abs_diff(p * p, p) > 1e-10 || max_abs_diff(p, p.adjoint()) > 1e-10)
            throw std::invalid_argument("make_projector_channel: operator " + std::to_string(j) +
                                        " is not an orthogonal projector");
        const long r = std::lround(p.trace().real());
        if (rank >= 0 && r != rank) throw std::invalid_argument("make_projector_channel: projector ranks differ");
        rank = r;
        total += std::norm(scales[j]) * p;
        ops.push_back(scales[j] * p);
    }
    if (max_abs_diff(total, Matrix::identity(n)) > kChannelTol)
        throw std::invalid_argument("make_projector_channel: sum |s_j|^2 P_j != I");
    return KrausChannel(n, std::move(ops));
}

KrausChannel make_block_projector_channel(std::size_t n, std::size_t r) {
    if (r == 0 || n == 0 || n % r != 0) throw std::invalid_argument("projector family needs r dividing n");
    std::vector<Matrix> ps;
    for (std::size_t k = 0; k < n / r; ++k) {
        Matrix p(n, n);
        for (std::size_t i = 0; i < r; ++i) p(k * r + i, k * r + i) = 1.0;
        ps.push_back(p);
    }
    return make_projector_channel(ps, CVec(ps.size(), 1.0));
}

KrausChannel make_identity_channel(std::size_t n) { return KrausChannel(n, {Matrix::identity(n)}); }

Matrix random_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double re = rng.normal(), im = rng.normal();
            m(r, c) = cplx(re, im);
        }
    return m;
}

namespace {

// Sequential Gram-Schmidt (two passes) on the columns of m, left to right.
Matrix orthonormalize_in_order(const Matrix& m) {
    Matrix q(m.rows(), m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        CVec v = m.col(c);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < c; ++k) {
                const CVec qk = q.col(k);
                v = axpy(-dot(qk, v), qk, v);
            }
        const double nv = norm(v);
        if (nv < 1e-12) throw std::runtime_error("orthonormalize: rank-deficient Gaussian draw");
        q.set_col(c, scaled(v, 1.0 / nv));
    }
    return q;
}

}  // namespace

Matrix random_unitary(std::size_t n, std::uint64_t seed) {
    return orthonormalize_in_order(random_gaussian(n, n, seed, 0x756e6974ULL));
}

KrausChannel make_random_channel(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 1 || d < 1) throw std::invalid_argument("make_random_channel: n and d must be >= 1");
    const Matrix iso = orthonormalize_in_order(random_gaussian(d * n, n, seed, 0x6b726175ULL));
    std::vector<Matrix> ops;
    for (std::size_t j = 0; j < d; ++j) ops.push_back(iso.block(j * n, 0, n, n));
    return KrausChannel(n, std::move(ops));
}

}  // namespace tecost
