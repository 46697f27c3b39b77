#include "germ/reductions.hpp"

namespace germ {

LiftedSpec lift_to_inverse(const FunctionSpec& spec) {
    spec.dims.validate();
    const Dims original = spec.dims;
    const int p = original.p();
    const int n = original.n;

    LiftedSpec lifted;
    lifted.route = RouteKind::InverseLift;
    lifted.original = original;
    lifted.x_offset = 0;
    lifted.second_offset = p;

    FunctionSpec out;
    out.dims = Dims{0, 0, p + n};
    out.name = spec.name.empty() ? "inverse-lift" : spec.name + ".inverse-lift";
    out.smoothness = spec.smoothness;
    out.differentiable_in_s = true;

    FunctionSpec inner = spec;
    out.evaluator = [inner, p, n](const Vec& w) -> Vec {
        Vec value(p + n);
        for (int i = 0; i < p; ++i) value[i] = w[i];
        Vec f = eval_f(inner, w);
        for (int i = 0; i < n; ++i) value[p + i] = f[i];
        return value;
    };
    if (inner.analytic_jacobian) {
        out.analytic_jacobian = [inner, p, n](const Vec& w) -> Matrix {
            Matrix jac(p + n, p + n, 0.0);
            for (int i = 0; i < p; ++i) jac(i, i) = 1.0;
            Matrix df = inner.analytic_jacobian(w);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < p + n; ++j) jac(p + i, j) = df(i, j);
            return jac;
        };
    }
    lifted.spec = std::move(out);
    return lifted;
}

LiftedSpec lift_to_implicit(const FunctionSpec& spec) {
    spec.dims.validate();
    const Dims original = spec.dims;
    const int p = original.p();
    const int n = original.n;

    LiftedSpec lifted;
    lifted.route = RouteKind::ImplicitLift;
    lifted.original = original;
    lifted.x_offset = 0;
    lifted.second_offset = p;

    FunctionSpec out;
    out.dims = Dims{original.q, original.m + n, n};
    out.name = spec.name.empty() ? "implicit-lift" : spec.name + ".implicit-lift";
    out.smoothness = spec.smoothness;
    out.differentiable_in_s = spec.differentiable_in_s;

    FunctionSpec inner = spec;
    out.evaluator = [inner, p, n](const Vec& w) -> Vec {
        // w = (x, z, y) with |x| = p, |z| = n, |y| = n
        Vec point(p + n);
        for (int i = 0; i < p; ++i) point[i] = w[i];
        for (int i = 0; i < n; ++i) point[p + i] = w[p + n + i];
        Vec f = eval_f(inner, point);
        for (int i = 0; i < n; ++i) f[i] -= w[p + i];
        return f;
    };
    if (inner.analytic_jacobian) {
        out.analytic_jacobian = [inner, p, n](const Vec& w) -> Matrix {
            Vec point(p + n);
            for (int i = 0; i < p; ++i) point[i] = w[i];
            for (int i = 0; i < n; ++i) point[p + i] = w[p + n + i];
            Matrix df = inner.analytic_jacobian(point);
            Matrix jac(n, p + 2 * n, 0.0);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < p; ++j) jac(i, j) = df(i, j);
                jac(i, p + i) = -1.0;
                for (int j = 0; j < n; ++j) jac(i, p + n + j) = df(i, p + j);
            }
            return jac;
        };
    }
    lifted.spec = std::move(out);
    return lifted;
}

GermEvaluator solve_via_route(const FunctionSpec& spec, const SeedPoint& seed,
                              const SolverConfig& cfg, RouteKind route) {
    const int n = spec.dims.n;
    if (route == RouteKind::InverseLift) {
        LiftedSpec lifted = lift_to_inverse(spec);
        SeedPoint lifted_seed;
        lifted_seed.a = {};
        lifted_seed.b = vec_concat(seed.a, seed.b);
        lifted_seed.c = vec_concat(seed.a, seed.c);
        lifted_seed.residual_inf = seed.residual_inf;
        auto base = std::make_shared<GermEvaluator>(
            make_germ(std::move(lifted.spec), std::move(lifted_seed), cfg));
        return make_route_germ(spec, seed, cfg, RouteKind::InverseLift, std::move(base));
    }
    if (route == RouteKind::ImplicitLift) {
        LiftedSpec lifted = lift_to_implicit(spec);
        SeedPoint lifted_seed;
        lifted_seed.a = vec_concat(seed.a, seed.c);
        lifted_seed.b = seed.b;
        lifted_seed.c = Vec(n, 0.0);
        lifted_seed.residual_inf = seed.residual_inf;
        auto base = std::make_shared<GermEvaluator>(
            make_germ(std::move(lifted.spec), std::move(lifted_seed), cfg));
        return make_route_germ(spec, seed, cfg, RouteKind::ImplicitLift, std::move(base));
    }
    throw Error(ErrorKind::ConfigError, "solve_via_route requires a reduction route");
}

GermEvaluator invert_germ(const GermEvaluator& germ) {
    const Dims dims = germ.spec().dims;
    const int p = dims.p();
    const int n = dims.n;
    auto inner = std::make_shared<GermEvaluator>(germ.clone());

    FunctionSpec spec;
    spec.dims = dims;
    spec.name = germ.spec().name.empty() ? "inverted" : germ.spec().name + ".inverted";
    spec.smoothness = germ.spec().smoothness;
    spec.differentiable_in_s = germ.spec().differentiable_in_s;
    spec.evaluator = [inner, p, n](const Vec& point) -> Vec {
        const Vec x(point.begin(), point.begin() + p);
        const Vec w(point.begin() + p, point.end());
        try {
            return inner->evaluate(x, w).y;
        } catch (const Error& e) {
            // Outside the inner germ's working neighborhood means outside
            // the new map's domain.
            if (e.kind() == ErrorKind::SingularJacobian ||
                e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::DomainError) {
                throw Error(ErrorKind::DomainError,
                            std::string("inner germ evaluation failed: ") + e.what());
            }
            throw;
        }
    };
    // No analytic Jacobian: G is differentiated by finite differences.

    SeedPoint seed;
    seed.a = germ.seed().a;
    seed.b = germ.seed().c;
    seed.c = germ.seed().b;
    seed.residual_inf = 0.0;  // G(a, c) = b is the cached seed waypoint, exact

    // The new map's values carry the inner germ's solve noise
    // (~tol_res / |D_yF|), so the outer residual gate must sit above
    // that floor or Newton stalls against it. Each inversion level
    // loosens by the same factor.
    SolverConfig cfg = germ.config();
    cfg.tol_res *= 50.0;

    return make_germ(std::move(spec), std::move(seed), cfg);
}

}  // namespace germ
