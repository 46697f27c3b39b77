#pragma once

// Closed forms and brute-force helpers the tests check the library
// against. Everything here is independent of the solver path: plain
// formulas and finite differences over std::function.

#include <cmath>
#include <functional>

#include "germ/linalg.hpp"
#include "germ/model.hpp"
#include "germ/problem.hpp"
#include "germ/rng.hpp"
#include "germ/solver.hpp"

namespace oracles {

using germ::Matrix;
using germ::Vec;

// circle: F(x, y) = x^2 + y^2 - 1, upper branch
inline double circle_g(double x, double z) { return std::sqrt(1.0 + z - x * x); }
inline double circle_dg_dx(double x, double z) { return -x / circle_g(x, z); }
inline double circle_dg_dz(double x, double z) { return 0.5 / circle_g(x, z); }

// exp (p = 0): F(y) = e^y
inline double exp_g(double z) { return std::log(z); }

// affine: F(x, y) = 2x + 3y
inline double affine_g(double x, double z) { return (z - 2.0 * x) / 3.0; }

// poly2x2: F = (y1^2 + y2^2 - x, y1 - y2), branch through (1, 1)
inline Vec poly2x2_g(double x, const Vec& z) {
    const double s = std::sqrt(2.0 * (x + z[0]) - z[1] * z[1]);
    return {(z[1] + s) / 2.0, (s - z[1]) / 2.0};
}

// mixed-abs: F(s, t, y) = y - |s| - t^2
inline double mixed_g(double s, double t, double z) { return z + std::abs(s) + t * t; }

/// Central finite difference of an arbitrary vector map, per coordinate
/// with relative step h0.
inline Matrix fd_matrix(const std::function<Vec(const Vec&)>& f, const Vec& at, int out_dim,
                        double h0 = 1e-6) {
    const int in_dim = static_cast<int>(at.size());
    Matrix jac(out_dim, in_dim);
    Vec probe = at;
    for (int j = 0; j < in_dim; ++j) {
        const double h = h0 * std::max(1.0, std::abs(at[j]));
        probe[j] = at[j] + h;
        const Vec hi = f(probe);
        probe[j] = at[j] - h;
        const Vec lo = f(probe);
        probe[j] = at[j];
        for (int i = 0; i < out_dim; ++i) jac(i, j) = (hi[i] - lo[i]) / (2.0 * h);
    }
    return jac;
}

/// Catalog germ built with default configuration.
inline germ::GermEvaluator catalog_germ(const std::string& name,
                                        germ::SolverConfig cfg = {}) {
    const germ::ProblemFile& pf = germ::catalog_entry(name);
    germ::FunctionSpec spec = germ::build_spec(pf);
    cfg = germ::apply_overrides(pf.solver, cfg);
    germ::SeedPoint seed = germ::check_seed(spec, pf.seed_x(), pf.seed_b, pf.seed_c, cfg.tol_res);
    return germ::make_germ(std::move(spec), std::move(seed), cfg);
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
    return germ::inf_norm(germ::vec_sub(a, b));
}

}  // namespace oracles
