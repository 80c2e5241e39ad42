#include "tecost/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tecost {

double unitary_max_norm(const Matrix& u) {
    if (!u.square() || !is_unitary(u, 1e-8)) throw std::invalid_argument("unitary_max_norm: input not unitary within 1e-8");
    // U is normal, so the eigenvalues of (U + U†)/2 are the cos(theta_j).
    return std::acos(std::clamp(lambda_min(hermitian_part(u)), -1.0, 1.0));
}

namespace {

Matrix stack2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    const std::size_t n = a.rows();
    Matrix u(2 * n, 2 * n);
    u.set_block(0, 0, a);
    u.set_block(0, n, b);
    u.set_block(n, 0, c);
    u.set_block(n, n, d);
    return u;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix s(a.rows() + b.rows(), a.cols() + b.cols());
    s.set_block(0, 0, a);
    s.set_block(a.rows(), a.cols(), b);
    return s;
}

// Unitary on C^{2n} with top-left block K and lambda_min(Re U) = lambda_min(Re K).
//
// Each pass takes the lowest eigenpair (h, x) of Re Kc for the current
// compression Kc of U onto the system subspace ran(E). The vectors v = E x
// and U v span an invariant plane on which U acts as a rotation by
// arccos(h). The plane is written into U, and the remaining system subspace
// and compression are updated; an ancilla direction is spent whenever
// |Kc x| < 1. Leftover ancilla directions get the identity.
Matrix deflation_dilation(const Matrix& k) {
    const std::size_t n = k.rows(), big = 2 * n;
    Matrix e(big, n);
    e.set_block(0, 0, Matrix::identity(n));
    Matrix rem = Matrix::identity(big);
    Matrix kc = k;
    Matrix u(big, big);

    while (e.cols() > 0) {
        const std::size_t dim = e.cols();
        const EigResult eig = hermitian_eig(hermitian_part(kc));
        const CVec x = eig.vectors.col(0);
        std::vector<std::size_t> others;
        for (std::size_t i = 1; i < dim; ++i) others.push_back(i);
        const Matrix xp = eig.vectors.cols_at(others);

        const CVec kx = kc * x;
        cplx kap = dot(x, kx);
        CVec q = axpy(-kap, x, kx);
        q = axpy(-dot(x, q), x, q);
        const double a2 = 1.0 - std::pow(norm(kx), 2);
        // Below ~1e-13 the value of 1 - |Kx|^2 is round-off.
        const double al = a2 > 1e-13 ? std::sqrt(a2) : 0.0;
        const double qn = norm(q);
        const double b = std::sqrt(qn * qn + al * al);
        const CVec v = e * x;

        if (b < 1e-7) {
            kap /= std::abs(kap);
            u += kap * outer(v, v);
            rem = orthonormal_columns(rem - outer(v, v) * rem, 1e-6, rem.cols() - 1);
            e = e * xp;
            kc = xp.adjoint() * kc * xp;
            continue;
        }

        const double s = std::sqrt(std::norm(kap) + b * b);
        kap /= s;
        const double bb = b / s;
        CVec w = e * q;
        if (al > 0) {
            const Matrix free = rem - e * (e.adjoint() * rem);
            const CVec ea = orthonormal_columns(free, 1e-6, 1).col(0);
            w = axpy(al, ea, w);
        }
        w = scaled(w, 1.0 / b);
        u += kap * outer(v, v) + bb * outer(w, v) - bb * outer(v, w) + std::conj(kap) * outer(w, w);
        rem = orthonormal_columns(rem - (outer(v, v) + outer(w, w)) * rem, 1e-6, rem.cols() - 2);
        if (dim == 1) break;

        const CVec om = xp.adjoint() * (e.adjoint() * w);
        const Matrix kp = xp.adjoint() * kc * xp;
        const double on = norm(om);
        Matrix mis = Matrix::identity(dim - 1);
        if (on > 1e-300) {
            const CVec uhat = scaled(om, 1.0 / on);
            if (al == 0.0) mis = orthogonal_complement(Matrix::column(uhat));
            else mis += (b / al - 1.0) * outer(uhat, uhat);
        }
        e = (e * xp - outer(w, om)) * mis;
        kc = mis.adjoint() * (kp - std::conj(kap) * outer(om, om)) * mis;
    }
    if (rem.cols() > 0) u += rem * rem.adjoint();
    return u;
}

}  // namespace

Matrix match_isometries(const Matrix& m1, const Matrix& m2, double tol) {
    if (m1.rows() != m2.rows() || m1.cols() != m2.cols()) throw GramMismatch("match_isometries: shape mismatch");
    const std::size_t p = m1.rows();
    const Matrix g1 = hermitian_part(m1.adjoint() * m1), g2 = hermitian_part(m2.adjoint() * m2);
    const double gdev = max_abs_diff(g1, g2);
    if (gdev > tol) {
        std::ostringstream os;
        os << "Gram matrices of the two column stacks differ by " << gdev << " > " << tol;
        throw GramMismatch(os.str());
    }
    const EigResult eig = hermitian_eig(g1);
    std::vector<CVec> f1, f2;
    for (std::size_t i = eig.values.size(); i-- > 0;) {
        const double mu = eig.values[i];
        if (mu <= 1e-20) break;  // singular value below 1e-10
        const CVec ui = eig.vectors.col(i);
        f1.push_back(scaled(m1 * ui, 1.0 / std::sqrt(mu)));
        f2.push_back(scaled(m2 * ui, 1.0 / std::sqrt(mu)));
    }
    // Same-order Gram-Schmidt on both sides keeps the pairing f1[k] -> f2[k].
    auto gs = [p](std::vector<CVec> f) {
        Matrix q(p, 0);
        std::vector<CVec> done;
        for (auto& c : f) {
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& b : done) c = axpy(-dot(b, c), b, c);
            const double nc = norm(c);
            if (nc < 1e-12) continue;
            done.push_back(scaled(c, 1.0 / nc));
        }
        Matrix out(p, done.size());
        for (std::size_t k = 0; k < done.size(); ++k) out.set_col(k, done[k]);
        return out;
    };
    const Matrix q1 = gs(f1), q2 = gs(f2);
    if (q1.cols() != q2.cols()) throw GramMismatch("match_isometries: column stacks have different ranks");
    Matrix w = q2 * q1.adjoint();
    const Matrix c1 = orthogonal_complement(q1), c2 = orthogonal_complement(q2);
    if (c1.cols() > 0) w += c2 * c1.adjoint();
    const double res = max_abs_diff(w * m1, m2);
    if (res > tol) {
        std::ostringstream os;
        os << "match_isometries: residual " << res << " > " << tol;
        throw GramMismatch(os.str());
    }
    return w;
}

DilationResult choi_dilation(const Matrix& kin) {
    if (!kin.square()) throw std::invalid_argument("choi_dilation: square input required");
    const std::size_t n = kin.rows();
    const Matrix id = Matrix::identity(n);
    Matrix k = kin;
    const double op2 = hermitian_eig(hermitian_part(k.adjoint() * k)).values.back();
    const double op = std::sqrt(std::max(0.0, op2));
    if (op > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "choi_dilation: operator norm " << op << " exceeds 1";
        throw std::invalid_argument(os.str());
    }
    if (op > 1.0) k *= 1.0 / op;

    const Matrix kd = k.adjoint();
    const Matrix lower = psd_sqrt(hermitian_part(id - kd * k));
    Matrix u;
    if (max_abs_diff(k * kd, kd * k) <= 1e-12) {
        // K†K = KK† here; one root for both blocks keeps U + U† block diagonal
        // even where I - K†K is singular and the root amplifies round-off.
        u = stack2(k, -lower, lower, kd);
    } else {
        u = deflation_dilation(k);
        // Rotate the ancilla so the bottom-left block becomes sqrt(I - K†K).
        const Matrix r = match_isometries(u.block(n, 0, n, n), lower, 1e-7);
        const Matrix t = direct_sum(id, r);
        u = t * u * t.adjoint();
        u.set_block(0, 0, k);
        u.set_block(n, 0, lower);
    }
    DilationResult res;
    res.u = u;
    res.ancilla_dim = 2;
    res.system_dim = n;
    res.maxnorm = unitary_max_norm(u);
    return res;
}

DilationResult optimal_extension(const KrausChannel& ch, const CostResult& cr) {
    const std::size_t n = ch.dim(), d = ch.count(), dp = d + 1;
    if (cr.optimal_v.size() != d) throw std::invalid_argument("optimal_extension: cost result does not match channel");
    const double nv = norm(cr.optimal_v);
    if (nv > 1.0 + 1e-9) throw std::invalid_argument("optimal_extension: |v*| exceeds 1");

    // Put the missing norm on the appended zero operator: K_v is unchanged
    // and the first row of V becomes a unit vector.
    const KrausChannel padded = pad_zero(ch);
    CVec row = cr.optimal_v;
    if (nv > 1.0) row = scaled(row, 1.0 / nv);
    row.push_back(std::sqrt(std::max(0.0, 1.0 - std::pow(norm(row), 2))));
    row = scaled(row, 1.0 / norm(row));
    CVec col(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) col[j] = std::conj(row[j]);
    const Matrix vmat = unitary_with_first_column(col).adjoint();
    const KrausChannel rot = kraus_transform(padded, vmat);

    const DilationResult small = choi_dilation(rot.op(0));
    const std::size_t p = (dp - 1) * n;
    Matrix m1(p, n), m2(p, n);
    m1.set_block(0, 0, small.u.block(n, 0, n, n));
    for (std::size_t i = 1; i < dp; ++i) m2.set_block((i - 1) * n, 0, rot.op(i));
    const Matrix w = match_isometries(m1, m2, 1e-7);

    Matrix core = Matrix::identity(dp * n);
    core.set_block(0, 0, small.u);
    const Matrix t = direct_sum(Matrix::identity(n), w);
    DilationResult res;
    res.u = t * core * t.adjoint();
    res.ancilla_dim = dp;
    res.system_dim = n;
    res.maxnorm = unitary_max_norm(res.u);
    res.realized_v = cr.optimal_v;
    return res;
}

KrausChannel extension_channel(const Matrix& u, std::size_t n) {
    if (n == 0 || !u.square() || u.rows() % n != 0) throw std::invalid_argument("extension_channel: dimension mismatch");
    if (!is_unitary(u, 1e-8)) throw std::invalid_argument("extension_channel: input not unitary within 1e-8");
    std::vector<Matrix> ops;
    for (std::size_t i = 0; i < u.rows() / n; ++i) ops.push_back(u.block(i * n, 0, n, n));
    return KrausChannel(n, std::move(ops));
}

Matrix apply_extension(const Matrix& u, std::size_t n, const Matrix& rho) {
    if (n == 0 || !u.square() || u.rows() % n != 0 || rho.rows() != n)
        throw std::invalid_argument("apply_extension: dimension mismatch");
    const std::size_t db = u.rows() / n;
    Matrix anc(db, db);
    anc(0, 0) = 1.0;
    return partial_trace_first(u * kron(anc, rho) * u.adjoint(), db, n);
}

}  // namespace tecost
