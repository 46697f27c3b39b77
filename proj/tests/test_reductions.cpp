#include <cmath>

#include "doctest.h"
#include "germ/reductions.hpp"
#include "germ/rng.hpp"
#include "oracles.hpp"

using namespace germ;

namespace {

GermEvaluator route_germ(const std::string& name, RouteKind route) {
    const ProblemFile& pf = catalog_entry(name);
    FunctionSpec spec = build_spec(pf);
    SolverConfig cfg = apply_overrides(pf.solver, SolverConfig{});
    SeedPoint seed = check_seed(spec, pf.seed_x(), pf.seed_b, pf.seed_c, cfg.tol_res);
    return solve_via_route(spec, seed, cfg, route);
}

std::vector<Vec> grid_targets(const ProblemFile& pf, int per_axis) {
    const Vec radii = default_check_radii(pf);
    const Vec center = vec_concat(vec_concat(pf.seed_a, pf.seed_d), pf.seed_c);
    const int dim = static_cast<int>(center.size());
    std::vector<Vec> out;
    std::vector<int> idx(dim, 0);
    for (;;) {
        Vec t(dim);
        for (int a = 0; a < dim; ++a) {
            const double frac = per_axis == 1 ? 0.0 : -1.0 + 2.0 * idx[a] / (per_axis - 1);
            t[a] = center[a] + frac * radii[a];
        }
        out.push_back(std::move(t));
        int a = dim - 1;
        while (a >= 0 && ++idx[a] == per_axis) idx[a--] = 0;
        if (a < 0) break;
    }
    return out;
}

}  // namespace

TEST_CASE("lift_to_inverse: values and Jacobian structure on the circle") {
    FunctionSpec circle = build_spec(catalog_entry("circle"));
    LiftedSpec lifted = lift_to_inverse(circle);
    CHECK(lifted.spec.dims.p() == 0);
    CHECK(lifted.spec.dims.n == 2);

    Vec value = eval_f(lifted.spec, {0.6, 0.8});
    CHECK(value[0] == 0.6);
    CHECK(std::abs(value[1]) <= 1e-15);

    BlockJacobian jac = fd_jacobian(lifted.spec, {0.0, 1.0});
    CHECK(std::abs(jac.full()(0, 0) - 1.0) <= 1e-9);
    CHECK(std::abs(jac.full()(0, 1)) <= 1e-9);
    CHECK(std::abs(jac.full()(1, 0)) <= 1e-9);
    CHECK(std::abs(jac.full()(1, 1) - 2.0) <= 1e-9);
}

TEST_CASE("lift_to_inverse: p = 0 problems are unchanged") {
    FunctionSpec expf = build_spec(catalog_entry("exp"));
    LiftedSpec lifted = lift_to_inverse(expf);
    CHECK(lifted.spec.dims == expf.dims);
    CHECK(eval_f(lifted.spec, {0.25})[0] == eval_f(expf, {0.25})[0]);
}

TEST_CASE("lift_to_inverse: identity and zero blocks at random points") {
    Rng rng(600);
    for (const char* name : {"circle", "affine", "poly2x2", "mixed-abs"}) {
        FunctionSpec spec = build_spec(catalog_entry(name));
        LiftedSpec lifted = lift_to_inverse(spec);
        const int p = spec.dims.p();
        const int n = spec.dims.n;
        for (int trial = 0; trial < 20; ++trial) {
            Vec at(p + n);
            for (int j = 0; j < p + n; ++j) at[j] = rng.uniform(0.2, 0.8);
            BlockJacobian jac = fd_jacobian(lifted.spec, at);
            for (int i = 0; i < p; ++i) {
                for (int j = 0; j < p + n; ++j) {
                    const double expected = (i == j) ? 1.0 : 0.0;
                    CHECK(std::abs(jac.full()(i, j) - expected) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("lift_to_implicit: values and the −I_n block") {
    FunctionSpec circle = build_spec(catalog_entry("circle"));
    LiftedSpec lifted = lift_to_implicit(circle);
    CHECK(lifted.spec.dims.q == 0);
    CHECK(lifted.spec.dims.m == 2);  // original t plus adjoined z
    CHECK(lifted.spec.dims.n == 1);

    CHECK(std::abs(eval_f(lifted.spec, {0.6, 0.0, 0.8})[0]) <= 1e-15);

    BlockJacobian at_seed = fd_jacobian(lifted.spec, {0.0, 0.0, 1.0});
    CHECK(std::abs(at_seed.d_y().to_matrix()(0, 0) - 2.0) <= 1e-9);

    Rng rng(601);
    for (int trial = 0; trial < 10; ++trial) {
        Vec at = {rng.uniform(-0.5, 0.5), rng.uniform(-0.1, 0.1), rng.uniform(0.7, 1.2)};
        BlockJacobian jac = fd_jacobian(lifted.spec, at);
        CHECK(std::abs(jac.full()(0, 1) - (-1.0)) <= 1e-9);  // the z column
    }
}

TEST_CASE("solve_via_route: both routes reproduce the circle") {
    GermEvaluator inverse = route_germ("circle", RouteKind::InverseLift);
    GermEvaluator implicit = route_germ("circle", RouteKind::ImplicitLift);
    CHECK(std::abs(inverse.evaluate({0.6}, {0.0}).y[0] - 0.8) <= 1e-9);
    CHECK(std::abs(implicit.evaluate({0.6}, {0.0}).y[0] - 0.8) <= 1e-9);
    CHECK(inverse.mode() == GermMode::General);
    CHECK(implicit.mode() == GermMode::ImplicitSlice);
    CHECK(inverse.base() != nullptr);
    CHECK(implicit.base() != nullptr);
}

TEST_CASE("solve_via_route: the inverse route's H coordinates copy x") {
    GermEvaluator inverse = route_germ("circle", RouteKind::InverseLift);
    const GermEvaluator* base = inverse.base();
    REQUIRE(base != nullptr);
    EvalResult phi = base->evaluate({}, {0.6, 0.0});  // Φ = (H, G)
    CHECK(std::abs(phi.y[0] - 0.6) <= 1e-12);
    CHECK(std::abs(phi.y[1] - 0.8) <= 1e-9);
}

TEST_CASE("route equivalence on catalog grids") {
    for (const char* name : {"circle", "exp", "affine", "poly2x2", "mixed-abs"}) {
        CAPTURE(name);
        GermEvaluator direct = oracles::catalog_germ(name);
        GermEvaluator inverse = route_germ(name, RouteKind::InverseLift);
        GermEvaluator implicit = route_germ(name, RouteKind::ImplicitLift);
        const ProblemFile& pf = catalog_entry(name);
        const int p = direct.spec().dims.p();
        for (const Vec& xz : grid_targets(pf, 3)) {
            const Vec x(xz.begin(), xz.begin() + p);
            const Vec z(xz.begin() + p, xz.end());
            const Vec y_direct = direct.evaluate(x, z).y;
            CHECK(oracles::max_abs_diff(y_direct, inverse.evaluate(x, z).y) <= 1e-8);
            CHECK(oracles::max_abs_diff(y_direct, implicit.evaluate(x, z).y) <= 1e-8);
        }
    }
}

TEST_CASE("route germs expose the same derivative surface") {
    GermEvaluator direct = oracles::catalog_germ("circle");
    GermEvaluator inverse = route_germ("circle", RouteKind::InverseLift);
    GermEvaluator implicit = route_germ("circle", RouteKind::ImplicitLift);
    Matrix d = direct.jacobian({0.2}, {0.05});
    Matrix i1 = inverse.jacobian({0.2}, {0.05});
    Matrix i2 = implicit.jacobian({0.2}, {0.05});
    for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(d(0, j) - i1(0, j)) <= 1e-7);
        CHECK(std::abs(d(0, j) - i2(0, j)) <= 1e-7);
    }
}

TEST_CASE("invert_germ: H agrees with F near the seed") {
    GermEvaluator circle = oracles::catalog_germ("circle");
    GermEvaluator h = invert_germ(circle);

    // H(a, b) = c within the residual gate
    CHECK(oracles::max_abs_diff(h.evaluate({0.0}, {1.0}).y, {0.0}) <= 1e-9);

    // H must equal F: F(0.1, 0.99) = 0.01 + 0.9801 - 1
    const double expected = 0.1 * 0.1 + 0.99 * 0.99 - 1.0;
    CHECK(std::abs(h.evaluate({0.1}, {0.99}).y[0] - expected) <= 1e-7);
}

TEST_CASE("invert_germ: exp germ inverts back to exp") {
    GermEvaluator expg = oracles::catalog_germ("exp");
    GermEvaluator h = invert_germ(expg);
    CHECK(std::abs(h.evaluate({}, {0.5}).y[0] - 1.6487212707001282) <= 1e-8);
}

TEST_CASE("invert_germ: symmetry over sampled neighborhoods") {
    Rng rng(602);
    for (const char* name : {"circle", "exp", "affine"}) {
        CAPTURE(name);
        GermEvaluator germ = oracles::catalog_germ(name);
        GermEvaluator h = invert_germ(germ);
        const int p = germ.spec().dims.p();
        const int n = germ.spec().dims.n;
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            Vec x(p), y(n);
            for (int i = 0; i < p; ++i) x[i] = germ.seed().a[i] + rng.uniform(-0.05, 0.05);
            for (int i = 0; i < n; ++i) y[i] = germ.seed().b[i] + rng.uniform(-0.05, 0.05);
            const Vec f_val = eval_f(germ.spec(), vec_concat(x, y));
            const Vec h_val = h.evaluate(x, y).y;
            worst = std::max(worst, oracles::max_abs_diff(f_val, h_val));
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("invert_germ: double inversion returns to G") {
    Rng rng(603);
    for (const char* name : {"circle", "exp", "affine"}) {
        CAPTURE(name);
        GermEvaluator germ = oracles::catalog_germ(name);
        GermEvaluator back = invert_germ(invert_germ(germ));
        const int p = germ.spec().dims.p();
        const int n = germ.spec().dims.n;
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            Vec x(p), z(n);
            for (int i = 0; i < p; ++i) x[i] = germ.seed().a[i] + rng.uniform(-0.04, 0.04);
            for (int i = 0; i < n; ++i) z[i] = germ.seed().c[i] + rng.uniform(-0.04, 0.04);
            worst = std::max(worst,
                             oracles::max_abs_diff(germ.evaluate(x, z).y, back.evaluate(x, z).y));
        }
        CHECK(worst <= 1e-6);
    }
}
