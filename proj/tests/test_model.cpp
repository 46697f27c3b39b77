#include <cmath>

#include "doctest.h"
#include "germ/model.hpp"
#include "germ/problem.hpp"
#include "germ/rng.hpp"
#include "oracles.hpp"

using namespace germ;

namespace {

FunctionSpec circle_spec() { return build_spec(catalog_entry("circle")); }
FunctionSpec affine_spec() { return build_spec(catalog_entry("affine")); }
FunctionSpec exp_spec() { return build_spec(catalog_entry("exp")); }

Matrix random_full(Rng& rng, int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-10.0, 10.0);
    return m;
}

}  // namespace

TEST_CASE("eval_f: catalog examples") {
    CHECK(eval_f(circle_spec(), {0.6, 0.8})[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(eval_f(affine_spec(), {1.0, 1.0})[0] == 5.0);
    CHECK(eval_f(exp_spec(), {0.0})[0] == 1.0);
    CHECK_THROWS_AS(eval_f(circle_spec(), {0.6}), Error);  // wrong length
}

TEST_CASE("fd_jacobian: affine maps are exact to rounding") {
    BlockJacobian jac = fd_jacobian(affine_spec(), {1.3, -0.4});
    CHECK(std::abs(jac.full()(0, 0) - 2.0) <= 1e-9);
    CHECK(std::abs(jac.full()(0, 1) - 3.0) <= 1e-9);
}

TEST_CASE("fd_jacobian: exp and circle derived values") {
    BlockJacobian dexp = fd_jacobian(exp_spec(), {0.0});
    CHECK(std::abs(dexp.d_y().to_matrix()(0, 0) - 1.0) <= 1e-10);

    BlockJacobian dcircle = fd_jacobian(circle_spec(), {0.6, 0.8});
    CHECK(std::abs(dcircle.full()(0, 0) - 1.2) <= 1e-9);
    CHECK(std::abs(dcircle.full()(0, 1) - 1.6) <= 1e-9);
    CHECK(dcircle.d_x().to_matrix()(0, 0) == dcircle.full()(0, 0));
    CHECK(dcircle.d_y().to_matrix()(0, 0) == dcircle.full()(0, 1));
}

TEST_CASE("fd_jacobian: random affine property within 1e-9") {
    Rng rng(100);
    for (int trial = 0; trial < 30; ++trial) {
        const int p = static_cast<int>(rng.next() % 3);
        const int n = 1 + static_cast<int>(rng.next() % 3);
        Matrix a(n, p + n);
        Vec b0(n);
        for (int i = 0; i < n; ++i) {
            b0[i] = rng.uniform(-10.0, 10.0);
            for (int j = 0; j < p + n; ++j) a(i, j) = rng.uniform(-10.0, 10.0);
        }
        FunctionSpec spec;
        spec.dims = Dims{0, p, n};
        spec.evaluator = [a, b0, n](const Vec& u) {
            Vec out = matvec(a, u);
            for (int i = 0; i < n; ++i) out[i] += b0[i];
            return out;
        };
        Vec at(p + n);
        for (int j = 0; j < p + n; ++j) at[j] = rng.uniform(-3.0, 3.0);
        // Truncation vanishes on affine maps; step 1e-4 keeps the
        // rounding part of the quotient below the 1e-9 bound too.
        BlockJacobian jac = fd_jacobian(spec, at, 1e-4);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p + n; ++j) CHECK(std::abs(jac.full()(i, j) - a(i, j)) <= 1e-9);
    }
}

TEST_CASE("fd_jacobian: matches analytic on smooth catalog problems") {
    // circle with its hand analytic Jacobian [2x, 2y]
    Rng rng(101);
    FunctionSpec spec = circle_spec();
    for (int trial = 0; trial < 50; ++trial) {
        const double x = rng.uniform(-0.7, 0.7);
        const double y = rng.uniform(0.5, 1.5);
        BlockJacobian jac = fd_jacobian(spec, {x, y});
        const double analytic_norm = std::max(std::abs(2 * x), std::abs(2 * y));
        CHECK(std::abs(jac.full()(0, 0) - 2 * x) <= 1e-6 * (1 + analytic_norm));
        CHECK(std::abs(jac.full()(0, 1) - 2 * y) <= 1e-6 * (1 + analytic_norm));
    }
}

TEST_CASE("partition_jacobian: slicing examples") {
    {
        Matrix full(2, 3);
        full(0, 0) = 1; full(0, 1) = 2; full(0, 2) = 3;
        full(1, 0) = 4; full(1, 1) = 5; full(1, 2) = 6;
        BlockJacobian jac = partition_jacobian(full, Dims{0, 1, 2});
        CHECK(jac.d_x().to_matrix()(0, 0) == 1);
        CHECK(jac.d_x().to_matrix()(1, 0) == 4);
        CHECK(jac.d_y().to_matrix()(0, 0) == 2);
        CHECK(jac.d_y().to_matrix()(1, 1) == 6);
    }
    {
        Matrix full(1, 2);
        full(0, 0) = 1.2; full(0, 1) = 1.6;
        BlockJacobian jac = partition_jacobian(full, Dims{0, 1, 1});
        CHECK(jac.d_y().to_matrix()(0, 0) == 1.6);
        CHECK(jac.d_y_rcond() == 1.0);  // 1x1
    }
    {
        Matrix full(2, 2);
        full(0, 0) = 0; full(0, 1) = 1;
        full(1, 0) = 0; full(1, 1) = 2;
        BlockJacobian jac = partition_jacobian(full, Dims{0, 0, 2});
        CHECK_FALSE(jac.d_y_lu().valid());
        CHECK(jac.d_y_rcond() == 0.0);
    }
    CHECK_THROWS_AS(partition_jacobian(Matrix(2, 2), Dims{0, 1, 2}), Error);
}

TEST_CASE("partition_jacobian: block reassembly is bitwise over 200 random cases") {
    Rng rng(102);
    for (int trial = 0; trial < 200; ++trial) {
        const int q = static_cast<int>(rng.next() % 3);
        const int m = static_cast<int>(rng.next() % 3);
        const int n = 1 + static_cast<int>(rng.next() % 3);
        const Dims dims{q, m, n};
        Matrix full = random_full(rng, n, dims.total());
        BlockJacobian jac = partition_jacobian(full, dims);
        MatrixView ds = jac.d_s(), dt = jac.d_t(), dy = jac.d_y();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < q; ++j) CHECK(ds(i, j) == full(i, j));
            for (int j = 0; j < m; ++j) CHECK(dt(i, j) == full(i, q + j));
            for (int j = 0; j < n; ++j) CHECK(dy(i, j) == full(i, q + m + j));
        }
    }
}

TEST_CASE("partition_jacobian: the eager LU satisfies its factor identity") {
    Rng rng(103);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.next() % 4);
        const int p = static_cast<int>(rng.next() % 3);
        const Dims dims{0, p, n};
        Matrix full = random_full(rng, n, dims.total());
        BlockJacobian jac = partition_jacobian(full, dims);
        const LuFactorization& lu = jac.d_y_lu();
        if (!lu.valid()) continue;
        Matrix dy = jac.d_y().to_matrix();
        Matrix pa(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) pa(i, j) = dy(lu.pivots()[i], j);
        Matrix prod = matmul(lu.lower(), lu.upper());
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) err = std::max(err, std::abs(pa(i, j) - prod(i, j)));
        CHECK(err <= 1e-12 * std::max(1.0, inf_norm(dy)));
    }
}

TEST_CASE("check_seed: certificate and rejection") {
    FunctionSpec circle = circle_spec();
    SeedPoint seed = check_seed(circle, {0.0}, {1.0}, {0.0}, 1e-10);
    CHECK(seed.residual_inf == 0.0);

    try {
        check_seed(circle, {0.0}, {1.0}, {0.5}, 1e-10);
        FAIL("expected SeedResidualTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SeedResidualTooLarge);
        CHECK(e.value() == doctest::Approx(0.5));
    }

    SeedPoint exp_seed = check_seed(exp_spec(), {}, {0.0}, {1.0}, 1e-10);
    CHECK(exp_seed.residual_inf == 0.0);
}
