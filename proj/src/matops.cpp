#include "tecost/matops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tecost {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw std::invalid_argument("Matrix: entry count != rows*cols");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(const CVec& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::diag(const RealVec& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::column(const CVec& v) { return Matrix(v.size(), 1, v); }

Matrix Matrix::adjoint() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
    return t;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::conj() const {
    Matrix t = *this;
    for (auto& z : t.data_) z = std::conj(z);
    return t;
}

cplx Matrix::trace() const {
    cplx s = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("Matrix::block");
    Matrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw std::out_of_range("Matrix::set_block");
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

CVec Matrix::col(std::size_t c) const {
    CVec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

void Matrix::set_col(std::size_t c, const CVec& v) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

Matrix Matrix::cols_at(const std::vector<std::size_t>& idx) const {
    Matrix m(rows_, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t r = 0; r < rows_; ++r) m(r, k) = (*this)(r, idx[k]);
    return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("Matrix +: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("Matrix -: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, cplx s) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Matrix *: shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

CVec operator*(const Matrix& a, const CVec& v) {
    if (a.cols() != v.size()) throw std::invalid_argument("Matrix*vector: shape mismatch");
    CVec out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s = 0;
        for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * v[k];
        out[i] = s;
    }
    return out;
}

double max_abs(const Matrix& a) {
    double m = 0;
    for (const auto& z : a.data()) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double frobenius(const Matrix& a) {
    double s = 0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

bool all_finite(const Matrix& a) {
    return std::all_of(a.data().begin(), a.data().end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

Matrix hermitian_part(const Matrix& a) {
    Matrix h = a + a.adjoint();
    return h *= 0.5;
}

Matrix outer(const CVec& x, const CVec& y) {
    Matrix m(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) m(i, j) = x[i] * std::conj(y[j]);
    return m;
}

cplx dot(const CVec& x, const CVec& y) {
    cplx s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

double norm(const CVec& x) {
    double s = 0;
    for (const auto& z : x) s += std::norm(z);
    return std::sqrt(s);
}

CVec scaled(const CVec& x, cplx s) {
    CVec y = x;
    for (auto& z : y) z *= s;
    return y;
}

CVec axpy(cplx a, const CVec& x, const CVec& y) {
    CVec out = y;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * x[i];
    return out;
}

bool is_hermitian(const Matrix& h, double tol) {
    if (!h.square()) return false;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = i; j < h.cols(); ++j)
            if (std::abs(h(i, j) - std::conj(h(j, i))) > tol) return false;
    return true;
}

namespace {

double offdiag_mass(const Matrix& a) {
    double s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EigResult hermitian_eig(const Matrix& h) {
    if (!h.square()) throw std::invalid_argument("hermitian_eig: non-square input");
    if (!is_hermitian(h, 1e-10)) throw std::invalid_argument("hermitian_eig: input not Hermitian within 1e-10");
    const std::size_t n = h.rows();
    Matrix a = hermitian_part(h);
    Matrix v = Matrix::identity(n);
    const double target = 1e-13 * frobenius(a);

    for (int sweep = 0; sweep < 100 && offdiag_mass(a) > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const cplx ph = apq / mag;  // e^{i phi}
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
                const cplx jpp = c, jpq = s, jqp = -s * std::conj(ph), jqq = c * std::conj(ph);
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
    EigResult out{RealVec(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        CVec col = v.col(order[k]);
        for (const auto& z : col) {
            if (std::abs(z) > 1e-12) {
                const cplx fix = std::conj(z) / std::abs(z);
                for (auto& w : col) w *= fix;
                break;
            }
        }
        out.vectors.set_col(k, col);
    }
    return out;
}

double lambda_min(const Matrix& h) { return hermitian_eig(h).values.front(); }

Matrix psd_sqrt(const Matrix& p) {
    EigResult e = hermitian_eig(p);
    const std::size_t n = p.rows();
    RealVec r(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (e.values[i] < -1e-10) throw std::domain_error("psd_sqrt: eigenvalue below -1e-10, input not PSD");
        r[i] = std::sqrt(std::max(0.0, e.values[i]));
    }
    Matrix s = e.vectors * Matrix::diag(r) * e.vectors.adjoint();
    return hermitian_part(s);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t c = 0; c < b.cols(); ++c) k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
        }
    return k;
}

Matrix partial_trace_first(const Matrix& m, std::size_t dB, std::size_t dA) {
    if (!m.square() || m.rows() != dB * dA) throw std::invalid_argument("partial_trace_first: dimension mismatch");
    Matrix out(dA, dA);
    for (std::size_t b = 0; b < dB; ++b)
        for (std::size_t i = 0; i < dA; ++i)
            for (std::size_t j = 0; j < dA; ++j) out(i, j) += m(b * dA + i, b * dA + j);
    return out;
}

bool is_unitary(const Matrix& u, double tol) {
    if (!u.square()) return false;
    return max_abs_diff(u.adjoint() * u, Matrix::identity(u.rows())) <= tol;
}

std::optional<Matrix> cholesky(const Matrix& h) {
    if (!h.square()) throw std::invalid_argument("cholesky: non-square input");
    const std::size_t n = h.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = h(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0)) return std::nullopt;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = h(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return l;
}

Matrix inverse_from_cholesky(const Matrix& l) {
    const std::size_t n = l.rows();
    // Invert L by forward substitution, then H^{-1} = L^{-†} L^{-1}.
    Matrix li(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        li(c, c) = 1.0 / l(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            cplx s = 0;
            for (std::size_t k = c; k < i; ++k) s += l(i, k) * li(k, c);
            li(i, c) = -s / l(i, i);
        }
    }
    return hermitian_part(li.adjoint() * li);
}

RealVec solve_real(std::vector<RealVec> a, RealVec b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) throw std::domain_error("solve_real: singular system");
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    RealVec x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

Matrix unitary_with_first_column(const CVec& c) {
    const std::size_t n = c.size();
    const double nc = norm(c);
    if (std::abs(nc - 1.0) > 1e-9) throw std::invalid_argument("unitary_with_first_column: vector not unit norm");
    const cplx ph = std::abs(c[0]) > 0 ? c[0] / std::abs(c[0]) : cplx(1.0);
    // w = c - ph e1 reflects ph e1 onto c; the inner product c† (ph e1) is real.
    CVec w = c;
    w[0] -= ph;
    const double ww = std::pow(norm(w), 2);
    Matrix h = Matrix::identity(n);
    if (ww > 1e-30) h -= (2.0 / ww) * outer(w, w);
    // h e1 = conj(ph) c, so scale the first column by ph.
    for (std::size_t r = 0; r < n; ++r) h(r, 0) *= ph;
    return h;
}

Matrix orthonormal_columns(const Matrix& a, double tol, std::size_t max_rank) {
    const std::size_t m = a.rows();
    std::vector<CVec> rest;
    for (std::size_t c = 0; c < a.cols(); ++c) rest.push_back(a.col(c));
    std::vector<CVec> basis;
    while (basis.size() < max_rank && !rest.empty()) {
        std::size_t best = 0;
        double bn = -1;
        for (std::size_t k = 0; k < rest.size(); ++k) {
            const double nk = norm(rest[k]);
            if (nk > bn) bn = nk, best = k;
        }
        if (bn <= tol) break;
        CVec q = rest[best];
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) q = axpy(-dot(b, q), b, q);
        const double nq = norm(q);
        if (nq <= tol) continue;
        q = scaled(q, 1.0 / nq);
        for (auto& r : rest) r = axpy(-dot(q, r), q, r);
        basis.push_back(std::move(q));
    }
    Matrix out(m, basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) out.set_col(k, basis[k]);
    return out;
}

Matrix orthogonal_complement(const Matrix& q) {
    const std::size_t m = q.rows();
    if (q.cols() >= m) return Matrix(m, 0);
    Matrix p = Matrix::identity(m) - q * q.adjoint();
    // Project twice so residual components along ran(q) sit at round-off level.
    p = p - q * (q.adjoint() * p);
    return orthonormal_columns(p, 1e-8, m - q.cols());
}

}  // namespace tecost
