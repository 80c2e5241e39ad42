#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "tecost/channel.hpp"
#include "tecost/matops.hpp"

using namespace tecost;
using Catch::Approx;

namespace {

Matrix random_hermitian(std::size_t n, std::uint64_t seed) {
    const Matrix g = random_gaussian(n, n, seed, 0);
    return hermitian_part(g);
}

Matrix reassemble(const EigResult& e) {
    return e.vectors * Matrix::diag(e.values) * e.vectors.adjoint();
}

}  // namespace

TEST_CASE("hermitian_eig on small fixed inputs", "[matops]") {
    const EigResult d = hermitian_eig(Matrix::diag(RealVec{3.0, 1.0}));
    REQUIRE(d.values[0] == Approx(1.0).margin(1e-14));
    REQUIRE(d.values[1] == Approx(3.0).margin(1e-14));

    const EigResult x = hermitian_eig(Matrix{{0, 1}, {1, 0}});
    REQUIRE(x.values[0] == Approx(-1.0).margin(1e-14));
    REQUIRE(x.values[1] == Approx(1.0).margin(1e-14));
}

TEST_CASE("hermitian_eig reconstructs random Hermitian matrices", "[matops]") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Matrix h = random_hermitian(5, seed);
        const EigResult e = hermitian_eig(h);
        REQUIRE(max_abs_diff(reassemble(e), h) <= 1e-10 * std::max(1.0, max_abs(h)));
        REQUIRE(is_unitary(e.vectors, 1e-10));
        for (std::size_t i = 1; i < e.values.size(); ++i) REQUIRE(e.values[i - 1] <= e.values[i]);
        // first nonzero component real and nonnegative
        for (std::size_t c = 0; c < 5; ++c) {
            std::size_t r = 0;
            while (std::abs(e.vectors(r, c)) < 1e-14) ++r;
            REQUIRE(std::abs(e.vectors(r, c).imag()) < 1e-14);
            REQUIRE(e.vectors(r, c).real() > 0);
        }
    }
}

TEST_CASE("hermitian_eig spectrum is unitarily invariant and brackets the mean", "[matops]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Matrix h = random_hermitian(4, seed);
        const Matrix u = random_unitary(4, 100 + seed);
        const RealVec a = hermitian_eig(h).values;
        const RealVec b = hermitian_eig(hermitian_part(u * h * u.adjoint())).values;
        for (std::size_t i = 0; i < 4; ++i) REQUIRE(a[i] == Approx(b[i]).margin(1e-9));
        const double mean = h.trace().real() / 4.0;
        REQUIRE(a.front() <= mean + 1e-12);
        REQUIRE(mean <= a.back() + 1e-12);
    }
}

TEST_CASE("hermitian_eig rejects bad input", "[matops]") {
    REQUIRE_THROWS_AS(hermitian_eig(Matrix(2, 3)), std::invalid_argument);
    REQUIRE_THROWS_AS(hermitian_eig(Matrix{{0, 1}, {0, 0}}), std::invalid_argument);
}

TEST_CASE("psd_sqrt", "[matops]") {
    REQUIRE(max_abs_diff(psd_sqrt(Matrix::identity(3)), Matrix::identity(3)) < 1e-14);
    REQUIRE(max_abs_diff(psd_sqrt(Matrix::diag(RealVec{4.0, 9.0})), Matrix::diag(RealVec{2.0, 3.0})) < 1e-13);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Matrix m = random_gaussian(3, 3, seed, 1);
        const Matrix p = m.adjoint() * m;
        const Matrix s = psd_sqrt(p);
        REQUIRE(max_abs_diff(s * s, p) <= 1e-9);
        REQUIRE(is_hermitian(s, 1e-12));
        REQUIRE(lambda_min(s) >= -1e-12);
        // sqrt(S^2) = S
        REQUIRE(max_abs_diff(psd_sqrt(hermitian_part(s * s)), s) <= 1e-8);
    }

    // tiny negative round-off is clamped, a real negative eigenvalue is not
    REQUIRE_NOTHROW(psd_sqrt(Matrix::diag(RealVec{1.0, -1e-12})));
    REQUIRE_THROWS_AS(psd_sqrt(Matrix::diag(RealVec{1.0, -1e-6})), std::domain_error);
}

TEST_CASE("kron", "[matops]") {
    REQUIRE(max_abs_diff(kron(Matrix::identity(2), Matrix::identity(2)), Matrix::identity(4)) == 0.0);

    const Matrix x{{0, 1}, {1, 0}};
    const Matrix xi = kron(x, Matrix::identity(2));
    REQUIRE(max_abs_diff(xi.block(0, 2, 2, 2), Matrix::identity(2)) == 0.0);
    REQUIRE(max_abs_diff(xi.block(2, 0, 2, 2), Matrix::identity(2)) == 0.0);
    REQUIRE(max_abs(xi.block(0, 0, 2, 2)) == 0.0);
    REQUIRE(max_abs(xi.block(2, 2, 2, 2)) == 0.0);

    const Matrix a = random_gaussian(2, 2, 1, 0), b = random_gaussian(2, 2, 2, 0);
    const Matrix c = random_gaussian(2, 2, 3, 0), d = random_gaussian(2, 2, 4, 0);
    REQUIRE(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) <= 1e-12);

    const Matrix r = kron(random_gaussian(2, 3, 5, 0), random_gaussian(3, 1, 6, 0));
    REQUIRE(r.rows() == 6);
    REQUIRE(r.cols() == 3);
}

TEST_CASE("partial_trace_first", "[matops]") {
    const Matrix sigma = random_gaussian(2, 2, 7, 0), rho = random_gaussian(2, 2, 8, 0);
    REQUIRE(max_abs_diff(partial_trace_first(kron(sigma, rho), 2, 2), sigma.trace() * rho) <= 1e-12);

    REQUIRE(max_abs_diff(partial_trace_first(Matrix::identity(4), 2, 2), 2.0 * Matrix::identity(2)) == 0.0);

    Matrix zero(2, 2);
    zero(0, 0) = 1.0;
    REQUIRE(max_abs_diff(partial_trace_first(kron(zero, rho), 2, 2), rho) == 0.0);

    const Matrix m = random_gaussian(6, 6, 9, 0), n = random_gaussian(6, 6, 10, 0);
    const cplx al(0.3, -1.2), be(2.0, 0.5);
    const Matrix lhs = partial_trace_first(al * m + be * n, 3, 2);
    const Matrix rhs = al * partial_trace_first(m, 3, 2) + be * partial_trace_first(n, 3, 2);
    REQUIRE(max_abs_diff(lhs, rhs) <= 1e-12);
    REQUIRE(std::abs(partial_trace_first(m, 3, 2).trace() - m.trace()) <= 1e-12);

    REQUIRE_THROWS_AS(partial_trace_first(Matrix::identity(5), 2, 2), std::invalid_argument);
}

TEST_CASE("is_unitary", "[matops]") {
    REQUIRE(is_unitary(Matrix::identity(3), 1e-10));
    REQUIRE_FALSE(is_unitary(Matrix::diag(RealVec{1.0, 0.999}), 1e-10));
    const double c = std::cos(std::numbers::pi / 4), s = std::sin(std::numbers::pi / 4);
    REQUIRE(is_unitary(Matrix{{c, -s}, {s, c}}, 1e-12));
}

TEST_CASE("cholesky and solve_real", "[matops]") {
    const Matrix g = random_gaussian(4, 4, 11, 0);
    const Matrix p = g.adjoint() * g + Matrix::identity(4);
    const auto l = cholesky(p);
    REQUIRE(l);
    REQUIRE(max_abs_diff(*l * l->adjoint(), p) <= 1e-12);
    REQUIRE(max_abs_diff(inverse_from_cholesky(*l) * p, Matrix::identity(4)) <= 1e-12);
    REQUIRE_FALSE(cholesky(Matrix::diag(RealVec{1.0, -1.0})));

    const RealVec x = solve_real({{2, 1}, {1, 3}}, {3, 5});
    REQUIRE(x[0] == Approx(0.8));
    REQUIRE(x[1] == Approx(1.4));
}

TEST_CASE("unitary completions", "[matops]") {
    const CVec c{cplx(0.6, 0.0), cplx(0.0, 0.8), 0.0};
    const Matrix u = unitary_with_first_column(c);
    REQUIRE(is_unitary(u, 1e-12));
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(std::abs(u(i, 0) - c[i]) < 1e-14);

    const Matrix q = unitary_with_first_column(CVec{cplx(0.5, 0.5), cplx(0.5, -0.5)}).cols_at({0});
    const Matrix comp = orthogonal_complement(q);
    REQUIRE(comp.cols() == 1);
    REQUIRE(std::abs(dot(q.col(0), comp.col(0))) < 1e-14);

    Matrix a(3, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;  // parallel columns: rank 1
    const Matrix o = orthonormal_columns(a, 1e-10, 2);
    REQUIRE(o.cols() == 1);
}
