#include <cmath>

#include "doctest.h"
#include "germ/linalg.hpp"
#include "germ/rng.hpp"

using namespace germ;

namespace {

Matrix random_matrix(Rng& rng, int n, double lo = -10.0, double hi = 10.0) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

Matrix permuted_rows(const Matrix& a, const std::vector<int>& piv) {
    Matrix out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = a(piv[i], j);
    return out;
}

double reconstruction_error(const Matrix& a, const LuFactorization& lu) {
    const Matrix pa = permuted_rows(a, lu.pivots());
    const Matrix prod = matmul(lu.lower(), lu.upper());
    double err = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) err = std::max(err, std::abs(pa(i, j) - prod(i, j)));
    return err;
}

}  // namespace

TEST_CASE("LU: P·A = L·U to 1e-12 relative on random matrices") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.next() % 6);
        Matrix a = random_matrix(rng, n);
        LuFactorization lu(a);
        if (!lu.valid()) continue;
        CHECK(reconstruction_error(a, lu) <= 1e-12 * std::max(1.0, inf_norm(a)));
    }
}

TEST_CASE("LU: solve accuracy against known solutions") {
    Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.next() % 5);
        Matrix a = random_matrix(rng, n);
        LuFactorization lu(a);
        if (!lu.valid() || lu.rcond() < 1e-6) continue;
        Vec x_true(n);
        for (int i = 0; i < n; ++i) x_true[i] = rng.uniform(-5.0, 5.0);
        Vec rhs = matvec(a, x_true);
        Vec x = lu.solve(rhs);
        CHECK(inf_norm(vec_sub(x, x_true)) <= 1e-8 / lu.rcond());
    }
}

TEST_CASE("LU: 1x1 rcond is exactly 1; zero scalar is invalid") {
    Matrix a(1, 1);
    a(0, 0) = 1.6;
    LuFactorization lu(a);
    CHECK(lu.valid());
    CHECK(lu.rcond() == 1.0);
    CHECK(lu.det() == 1.6);

    a(0, 0) = 0.0;
    LuFactorization zero(a);
    CHECK_FALSE(zero.valid());
    CHECK(zero.rcond() == 0.0);
    CHECK(zero.det() == 0.0);
}

TEST_CASE("LU: rank-deficient matrix is flagged") {
    Matrix a(2, 2);
    a(0, 0) = 0.0; a(0, 1) = 1.0;
    a(1, 0) = 0.0; a(1, 1) = 2.0;
    LuFactorization lu(a);
    CHECK_FALSE(lu.valid());
    CHECK(lu.rcond() == 0.0);
    CHECK_THROWS_AS(lu.solve(Vec{1.0, 1.0}), Error);
}

TEST_CASE("LU: determinant matches the closed form for 2x2") {
    Rng rng(44);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix a = random_matrix(rng, 2);
        LuFactorization lu(a);
        const double expected = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        if (!lu.valid()) {
            CHECK(expected == 0.0);
            continue;
        }
        CHECK(lu.det() == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("LU: rcond agrees with direct norms") {
    Rng rng(45);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 4);
        Matrix a = random_matrix(rng, n);
        LuFactorization lu(a);
        if (!lu.valid()) continue;
        Matrix inv = lu.solve(Matrix::identity(n));
        const double expected = 1.0 / (inf_norm(a) * inf_norm(inv));
        CHECK(lu.rcond() == doctest::Approx(expected).epsilon(1e-12));
        CHECK(lu.rcond() > 0.0);
        CHECK(lu.rcond() <= 1.0 + 1e-12);
    }
}

TEST_CASE("matrix view windows share the source") {
    Matrix m(2, 3);
    int v = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = ++v;
    MatrixView view(&m, 0, 1, 2, 2);
    CHECK(view(0, 0) == 2.0);
    CHECK(view(1, 1) == 6.0);
    Matrix copy = view.to_matrix();
    CHECK(copy(0, 0) == 2.0);
    CHECK(copy.rows() == 2);
    CHECK(copy.cols() == 2);
}
