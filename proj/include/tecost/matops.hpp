#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace tecost {

using cplx = std::complex<double>;
using RealVec = std::vector<double>;
using CVec = std::vector<cplx>;

// Dense row-major complex matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);
    Matrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static Matrix identity(std::size_t n);
    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix diag(const CVec& d);
    static Matrix diag(const RealVec& d);
    static Matrix column(const CVec& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<cplx>& data() const { return data_; }

    Matrix adjoint() const;
    Matrix transpose() const;
    Matrix conj() const;
    cplx trace() const;

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
    CVec col(std::size_t c) const;
    void set_col(std::size_t c, const CVec& v);
    // Columns picked by index, in the given order.
    Matrix cols_at(const std::vector<std::size_t>& idx) const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cplx s);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(cplx s, Matrix a);
Matrix operator*(Matrix a, cplx s);
CVec operator*(const Matrix& a, const CVec& v);

// Entrywise helpers.
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
double frobenius(const Matrix& a);
bool all_finite(const Matrix& a);
Matrix hermitian_part(const Matrix& a);  // (A + A†)/2
Matrix outer(const CVec& x, const CVec& y);  // x y†

// Vector helpers.
cplx dot(const CVec& x, const CVec& y);  // x† y
double norm(const CVec& x);
CVec scaled(const CVec& x, cplx s);
CVec axpy(cplx a, const CVec& x, const CVec& y);  // a x + y

// Hermitian eigendecomposition by cyclic complex Jacobi. Eigenvalues ascend;
// each eigenvector has its first nonzero component real and nonnegative.
struct EigResult {
    RealVec values;
    Matrix vectors;
};
EigResult hermitian_eig(const Matrix& h);
double lambda_min(const Matrix& h);

Matrix psd_sqrt(const Matrix& p);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix partial_trace_first(const Matrix& m, std::size_t dB, std::size_t dA);
bool is_unitary(const Matrix& u, double tol);
bool is_hermitian(const Matrix& h, double tol);

// Lower-triangular L with L L† = H, or nullopt if H is not positive definite.
std::optional<Matrix> cholesky(const Matrix& h);
// Inverse of a Hermitian positive definite matrix from its Cholesky factor.
Matrix inverse_from_cholesky(const Matrix& l);

// Solve a real dense system by Gaussian elimination with partial pivoting.
RealVec solve_real(std::vector<RealVec> a, RealVec b);

// Unitary whose first column is the unit vector c (Householder reflection
// times a phase).
Matrix unitary_with_first_column(const CVec& c);

// Orthonormal basis for the span of the columns of a, Gram-Schmidt with
// pivoting on residual norm. Stops at max_rank columns or when the largest
// residual falls below tol (absolute).
Matrix orthonormal_columns(const Matrix& a, double tol, std::size_t max_rank);

// Orthonormal basis of the complement of ran(q) in C^rows, q with orthonormal
// columns. Completion uses the standard basis, so the result is deterministic.
Matrix orthogonal_complement(const Matrix& q);

}  // namespace tecost
