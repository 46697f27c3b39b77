#include "germ/solver.hpp"

#include <cmath>
#include <optional>

namespace germ {

void SolverConfig::validate() const {
    const bool ok = tol_res > 0.0 && max_newton_iters >= 1 && rcond_min > 0.0 &&
                    initial_step > 0.0 && initial_step <= 1.0 && min_step > 0.0 &&
                    step_shrink > 0.0 && step_shrink < 1.0 && step_grow >= 1.0 &&
                    backtrack_factor > 0.0 && backtrack_factor < 1.0 && max_backtracks >= 0 &&
                    armijo_slope > 0.0 && armijo_slope < 1.0 && branch_guard > 0.0 &&
                    fd_step > 0.0 && fold_det_decay > 0.0 && fold_det_decay < 1.0;
    if (!ok) {
        throw Error(ErrorKind::ConfigError, "invalid solver configuration");
    }
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
        case StopReason::Converged: return "Converged";
        case StopReason::SingularJacobian: return "SingularJacobian";
        case StopReason::NoConvergence: return "NoConvergence";
        case StopReason::DomainError: return "DomainError";
        case StopReason::BranchJump: return "BranchJump";
    }
    return "NoConvergence";
}

std::string_view to_string(GermMode mode) {
    switch (mode) {
        case GermMode::General: return "general";
        case GermMode::Inverse: return "inverse";
        case GermMode::ImplicitSlice: return "implicit-slice";
    }
    return "general";
}

namespace {

bool is_domain_error(const Error& e) { return e.kind() == ErrorKind::DomainError; }

Vec residual_at(const FunctionSpec& spec, const Vec& x, const Vec& y, const Vec& z) {
    return vec_sub(eval_f(spec, vec_concat(x, y)), z);
}

struct NewtonOutcome {
    StopReason reason = StopReason::NoConvergence;
    Vec y;
    NewtonTrace trace;
    double last_rcond = 0.0;
};

NewtonOutcome run_newton(const FunctionSpec& spec, const Vec& x, const Vec& z, const Vec& y0,
                         const SolverConfig& cfg) {
    NewtonOutcome out;
    out.y = y0;

    Vec r;
    try {
        r = residual_at(spec, x, y0, z);
    } catch (const Error& e) {
        if (!is_domain_error(e)) throw;
        out.reason = StopReason::DomainError;
        return out;
    }
    double res = inf_norm(r);
    out.trace.initial_residual = res;
    out.trace.final_residual = res;
    if (res <= cfg.tol_res) {
        out.reason = StopReason::Converged;
        return out;
    }

    Vec y = y0;
    for (int iter = 1; iter <= cfg.max_newton_iters; ++iter) {
        std::optional<BlockJacobian> jac;
        try {
            jac.emplace(jacobian_of(spec, vec_concat(x, y), cfg.fd_step));
        } catch (const Error& e) {
            if (!is_domain_error(e)) throw;
            out.reason = StopReason::DomainError;
            return out;
        }
        const double rc = jac->d_y_rcond();
        out.last_rcond = rc;
        if (!(rc >= cfg.rcond_min)) {
            out.reason = StopReason::SingularJacobian;
            return out;
        }

        Vec delta = jac->d_y_lu().solve(r);

        // Armijo backtracking on the residual norm
        bool any_finite_trial = false;
        double lambda = 1.0;
        Vec y_try, r_try;
        double res_try = 0.0;
        auto line_search = [&](const Vec& direction) -> bool {
            lambda = 1.0;
            for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
                y_try = y;
                for (std::size_t i = 0; i < y_try.size(); ++i) y_try[i] -= lambda * direction[i];
                try {
                    r_try = residual_at(spec, x, y_try, z);
                } catch (const Error& e) {
                    if (!is_domain_error(e)) throw;
                    lambda *= cfg.backtrack_factor;
                    ++out.trace.backtracks;
                    continue;
                }
                any_finite_trial = true;
                res_try = inf_norm(r_try);
                if (res_try <= (1.0 - cfg.armijo_slope * lambda) * res) return true;
                lambda *= cfg.backtrack_factor;
                ++out.trace.backtracks;
            }
            return false;
        };

        bool accepted = line_search(delta);
        if (!accepted) {
            // The local model may be stale (e.g. the iterate sits on a
            // kink that finite differences smear out). Re-model once at
            // the rejected full-step point and retry the search.
            try {
                Vec probe = y;
                for (std::size_t i = 0; i < probe.size(); ++i) probe[i] -= delta[i];
                BlockJacobian refreshed = jacobian_of(spec, vec_concat(x, probe), cfg.fd_step);
                if (refreshed.d_y_rcond() >= cfg.rcond_min) {
                    delta = refreshed.d_y_lu().solve(r);
                    accepted = line_search(delta);
                }
            } catch (const Error& e) {
                if (!is_domain_error(e)) throw;
            }
        }
        if (!accepted) {
            out.reason = any_finite_trial ? StopReason::NoConvergence : StopReason::DomainError;
            return out;
        }

        double step_inf = 0.0;
        for (std::size_t i = 0; i < delta.size(); ++i)
            step_inf = std::max(step_inf, std::abs(lambda * delta[i]));
        y = y_try;
        r = r_try;
        res = res_try;
        out.trace.iterates.push_back({y, res, rc, step_inf, lambda});
        out.trace.final_residual = res;
        if (res <= cfg.tol_res) {
            out.y = y;
            out.reason = StopReason::Converged;
            return out;
        }
    }
    out.y = y;
    out.reason = StopReason::NoConvergence;
    return out;
}

[[noreturn]] void throw_stop(StopReason reason, const std::string& context, double value) {
    switch (reason) {
        case StopReason::SingularJacobian:
            throw Error(ErrorKind::SingularJacobian, "singular Jacobian: " + context)
                .with_value(value);
        case StopReason::DomainError:
            throw Error(ErrorKind::DomainError, "left the working domain: " + context);
        case StopReason::BranchJump:
            throw Error(ErrorKind::NoConvergence, "branch guard rejected the correction: " + context);
        case StopReason::NoConvergence:
        default:
            throw Error(ErrorKind::NoConvergence, "no convergence: " + context).with_value(value);
    }
}

Vec lerp_toward(const Vec& from, const Vec& to, double t) {
    Vec out(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) out[i] = from[i] + t * (to[i] - from[i]);
    return out;
}

}  // namespace

NewtonResult newton_correct(const FunctionSpec& spec, const Vec& x, const Vec& z, const Vec& y0,
                            const SolverConfig& cfg) {
    cfg.validate();
    NewtonOutcome out = run_newton(spec, x, z, y0, cfg);
    if (out.reason != StopReason::Converged) {
        out.trace.reason = out.reason;
        throw_stop(out.reason,
                   "Newton correction stopped after " +
                       std::to_string(out.trace.iterations()) + " iteration(s)",
                   out.last_rcond);
    }
    out.trace.reason = StopReason::Converged;
    return NewtonResult{std::move(out.y), std::move(out.trace)};
}

// ---------------------------------------------------------------------------
// GermEvaluator
// ---------------------------------------------------------------------------

EvalResult GermEvaluator::evaluate(const Vec& x, const Vec& z) const {
    if (route_ == RouteKind::InverseLift) {
        EvalResult inner = base_->evaluate({}, vec_concat(x, z));
        const int n = spec_.dims.n;
        Vec y(inner.y.end() - n, inner.y.end());
        return EvalResult{std::move(y), std::move(inner.trace)};
    }
    if (route_ == RouteKind::ImplicitLift) {
        return base_->evaluate(vec_concat(x, z), Vec(spec_.dims.n, 0.0));
    }
    std::vector<Waypoint> snap = snapshot();
    std::vector<Waypoint> accepted;
    EvalResult result = evaluate_direct(snap, x, z, &accepted);
    absorb(accepted);
    return result;
}

EvalResult GermEvaluator::evaluate_isolated(const std::vector<Waypoint>& waypoints, const Vec& x,
                                            const Vec& z) const {
    if (route_ == RouteKind::InverseLift) {
        EvalResult inner = base_->evaluate_isolated(waypoints, {}, vec_concat(x, z));
        const int n = spec_.dims.n;
        Vec y(inner.y.end() - n, inner.y.end());
        return EvalResult{std::move(y), std::move(inner.trace)};
    }
    if (route_ == RouteKind::ImplicitLift) {
        return base_->evaluate_isolated(waypoints, vec_concat(x, z), Vec(spec_.dims.n, 0.0));
    }
    std::vector<Waypoint> accepted;
    return evaluate_direct(waypoints, x, z, &accepted);
}

EvalResult GermEvaluator::evaluate_direct(const std::vector<Waypoint>& waypoints, const Vec& x,
                                          const Vec& z, std::vector<Waypoint>* accepted) const {
    const int p = spec_.dims.p();
    const int n = spec_.dims.n;
    if (static_cast<int>(x.size()) != p || static_cast<int>(z.size()) != n) {
        throw Error(ErrorKind::DimensionMismatch, "evaluate: target lengths do not match dims");
    }
    const Vec xz = vec_concat(x, z);

    // Exact hits return the cached waypoint; the seed entry makes
    // evaluate(a, c) = b bitwise.
    for (const Waypoint& wp : waypoints) {
        if (wp.xz == xz) {
            EvalTrace trace;
            trace.from_cache = true;
            trace.final_residual = inf_norm(residual_at(spec_, x, wp.y, z));
            trace.final_rcond = jacobian_of(spec_, vec_concat(x, wp.y), cfg_.fd_step).d_y_rcond();
            return EvalResult{wp.y, std::move(trace)};
        }
    }

    // Warm start from the nearest accepted waypoint (ties: first wins).
    const Waypoint* start = nullptr;
    double best = 0.0;
    for (const Waypoint& wp : waypoints) {
        const double d = inf_norm(vec_sub(wp.xz, xz));
        if (start == nullptr || d < best) {
            start = &wp;
            best = d;
        }
    }
    if (start == nullptr) {
        throw Error(ErrorKind::InternalError, "waypoint cache is empty");
    }

    const Vec from_xz = start->xz;
    Vec y = start->y;

    double det_start = std::abs(
        jacobian_of(spec_, vec_concat(Vec(from_xz.begin(), from_xz.begin() + p), y), cfg_.fd_step)
            .d_y_det());
    double det_frontier = det_start;
    double rcond_frontier = 1.0;

    EvalTrace trace;
    double sigma = 0.0;
    double step = std::min(cfg_.initial_step, 1.0);
    bool saw_singular = false;
    StopReason last_fail = StopReason::NoConvergence;

    while (sigma < 1.0) {
        const bool is_final = step >= 1.0 - sigma;
        const double sigma_next = is_final ? 1.0 : sigma + step;
        const Vec sub_xz = is_final ? xz : lerp_toward(from_xz, xz, sigma_next);
        const Vec sub_x(sub_xz.begin(), sub_xz.begin() + p);
        const Vec sub_z(sub_xz.begin() + p, sub_xz.end());

        NewtonOutcome outcome = run_newton(spec_, sub_x, sub_z, y, cfg_);
        bool ok = outcome.reason == StopReason::Converged;
        if (!ok) {
            last_fail = outcome.reason;
            if (outcome.reason == StopReason::SingularJacobian) saw_singular = true;
        }

        // Reject corrections that jump further than the trust measure
        // allows; large jumps are how a branch switch slips through.
        if (ok && inf_norm(vec_sub(outcome.y, y)) >
                      cfg_.branch_guard * (inf_norm(y) + 1.0)) {
            ok = false;
            last_fail = StopReason::BranchJump;
        }

        double rc = 0.0, adet = 0.0, residual = 0.0;
        if (ok) {
            // Gate the waypoint itself: rcond(D_yF) at the corrected point.
            try {
                BlockJacobian jac = jacobian_of(spec_, vec_concat(sub_x, outcome.y), cfg_.fd_step);
                rc = jac.d_y_rcond();
                adet = std::abs(jac.d_y_det());
                residual = outcome.trace.final_residual;
                if (!(rc >= cfg_.rcond_min)) {
                    ok = false;
                    saw_singular = true;
                    last_fail = StopReason::SingularJacobian;
                }
            } catch (const Error& e) {
                if (!is_domain_error(e)) throw;
                ok = false;
                last_fail = StopReason::DomainError;
            }
        }

        if (ok) {
            y = outcome.y;
            sigma = sigma_next;
            det_frontier = adet;
            rcond_frontier = rc;
            trace.steps.push_back(
                {sigma, sub_xz, outcome.trace.iterations(), residual, rc, adet});
            trace.total_newton_iters += outcome.trace.iterations();
            if (sigma >= 1.0) {
                trace.final_residual = residual;
                trace.final_rcond = rc;
                accepted->push_back(Waypoint{xz, y});
                return EvalResult{std::move(y), std::move(trace)};
            }
            if (outcome.trace.iterations() <= 2 && outcome.trace.backtracks == 0) {
                step = std::min(step * cfg_.step_grow, 1.0);
            }
            continue;
        }

        step *= cfg_.step_shrink;
        ++trace.rejected_steps;
        if (step < cfg_.min_step) {
            // Classify the give-up. A shrinking |det D_yF| along the
            // frontier is the numerical signature of a fold: the path
            // ran into the boundary of the invertibility region. rcond
            // alone cannot see this for n = 1 (any nonzero scalar has
            // rcond 1), so the determinant trend decides.
            const bool fold = std::isfinite(det_start) && det_start > 0.0 &&
                              det_frontier <= cfg_.fold_det_decay * det_start;
            if (saw_singular || fold) {
                throw Error(ErrorKind::SingularJacobian,
                            "continuation approached the singular set (|det D_yF| fell from " +
                                std::to_string(det_start) + " to " +
                                std::to_string(det_frontier) + " at progress " +
                                std::to_string(sigma) + ")")
                    .with_value(rcond_frontier);
            }
            throw_stop(last_fail,
                       "continuation stalled at progress " + std::to_string(sigma) +
                           " with step below " + std::to_string(cfg_.min_step),
                       det_frontier);
        }
    }
    throw Error(ErrorKind::InternalError, "continuation loop exited without a result");
}

Matrix GermEvaluator::jacobian_from_blocks(const BlockJacobian& jac, int first_col,
                                           int param_cols) const {
    const int n = spec_.dims.n;
    const LuFactorization& lu = jac.d_y_lu();
    Matrix out(n, param_cols + n);
    Vec rhs(n);
    for (int j = 0; j < param_cols; ++j) {
        for (int i = 0; i < n; ++i) rhs[i] = jac.full()(i, first_col + j);
        Vec sol = lu.solve(rhs);
        for (int i = 0; i < n; ++i) out(i, j) = -sol[i];
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) rhs[i] = (i == k) ? 1.0 : 0.0;
        Vec sol = lu.solve(rhs);
        for (int i = 0; i < n; ++i) out(i, param_cols + k) = sol[i];
    }
    return out;
}

Matrix GermEvaluator::jacobian(const Vec& x, const Vec& z) const {
    const int p = spec_.dims.p();
    const int n = spec_.dims.n;
    if (route_ == RouteKind::InverseLift) {
        Matrix lifted = base_->jacobian({}, vec_concat(x, z));  // (p+n) × (p+n)
        Matrix out(n, p + n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p + n; ++j) out(i, j) = lifted(p + i, j);
        return out;
    }
    if (route_ == RouteKind::ImplicitLift) {
        Matrix lifted = base_->jacobian(vec_concat(x, z), Vec(n, 0.0));  // n × (p+2n)
        Matrix out(n, p + n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p + n; ++j) out(i, j) = lifted(i, j);
        return out;
    }
    EvalResult at = evaluate(x, z);
    BlockJacobian jac = jacobian_of(spec_, vec_concat(x, at.y), cfg_.fd_step);
    if (!(jac.d_y_rcond() >= cfg_.rcond_min)) {
        throw Error(ErrorKind::SingularJacobian, "D_yF nearly singular at the evaluated point")
            .with_value(jac.d_y_rcond());
    }
    return jacobian_from_blocks(jac, 0, p);
}

Matrix GermEvaluator::jacobian_isolated(const std::vector<Waypoint>& waypoints, const Vec& x,
                                        const Vec& z) const {
    const int p = spec_.dims.p();
    const int n = spec_.dims.n;
    if (route_ == RouteKind::InverseLift) {
        Matrix lifted = base_->jacobian_isolated(waypoints, {}, vec_concat(x, z));
        Matrix out(n, p + n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p + n; ++j) out(i, j) = lifted(p + i, j);
        return out;
    }
    if (route_ == RouteKind::ImplicitLift) {
        Matrix lifted = base_->jacobian_isolated(waypoints, vec_concat(x, z), Vec(n, 0.0));
        Matrix out(n, p + n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p + n; ++j) out(i, j) = lifted(i, j);
        return out;
    }
    EvalResult at = evaluate_isolated(waypoints, x, z);
    BlockJacobian jac = jacobian_of(spec_, vec_concat(x, at.y), cfg_.fd_step);
    if (!(jac.d_y_rcond() >= cfg_.rcond_min)) {
        throw Error(ErrorKind::SingularJacobian, "D_yF nearly singular at the evaluated point")
            .with_value(jac.d_y_rcond());
    }
    return jacobian_from_blocks(jac, 0, p);
}

Vec GermEvaluator::implicit_slice(const Vec& x) const { return evaluate(x, seed_.c).y; }

Matrix GermEvaluator::slice_jacobian(const Vec& x) const {
    const int p = spec_.dims.p();
    const int n = spec_.dims.n;
    Matrix dg = jacobian(x, seed_.c);
    Matrix out(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) out(i, j) = dg(i, j);
    return out;
}

Matrix GermEvaluator::mixed_jacobian(const Vec& s, const Vec& t, const Vec& z) const {
    const int q = spec_.dims.q;
    const int m = spec_.dims.m;
    const int n = spec_.dims.n;
    if (static_cast<int>(s.size()) != q || static_cast<int>(t.size()) != m) {
        throw Error(ErrorKind::DimensionMismatch, "mixed_jacobian: s/t lengths do not match dims");
    }
    const Vec x = vec_concat(s, t);
    if (route_ != RouteKind::None) {
        Matrix dg = jacobian(x, z);
        Matrix out(n, m + n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m + n; ++j) out(i, j) = dg(i, q + j);
        return out;
    }
    EvalResult at = evaluate(x, z);
    BlockJacobian jac = jacobian_of(spec_, vec_concat(x, at.y), cfg_.fd_step);
    if (!(jac.d_y_rcond() >= cfg_.rcond_min)) {
        throw Error(ErrorKind::SingularJacobian, "D_yF nearly singular at the evaluated point")
            .with_value(jac.d_y_rcond());
    }
    return jacobian_from_blocks(jac, q, m);
}

std::vector<Waypoint> GermEvaluator::snapshot() const {
    if (base_) return base_->snapshot();
    std::lock_guard lock(cache_->mutex);
    return cache_->entries;
}

void GermEvaluator::absorb(const std::vector<Waypoint>& waypoints) const {
    if (base_) {
        // Route germs keep their waypoints in the lifted germ's space;
        // translation happens in absorb_result-style callers. Direct
        // absorption is only used internally with already-lifted keys.
        base_->absorb(waypoints);
        return;
    }
    std::lock_guard lock(cache_->mutex);
    for (const Waypoint& wp : waypoints) {
        bool duplicate = false;
        for (const Waypoint& existing : cache_->entries) {
            if (existing.xz == wp.xz) {
                if (inf_norm(vec_sub(existing.y, wp.y)) > cfg_.tol_res) {
                    throw Error(ErrorKind::InternalError,
                                "conflicting waypoints for one target: cache invariant violated");
                }
                duplicate = true;
                break;
            }
        }
        if (!duplicate) cache_->entries.push_back(wp);
    }
}

void GermEvaluator::absorb_result(const Vec& x, const Vec& z, const Vec& y) const {
    if (route_ == RouteKind::InverseLift) {
        // Lifted key is (x, z) itself (the lifted germ has p = 0); the
        // lifted value is (H, G) with H ≡ x, which holds exactly here.
        base_->absorb_result({}, vec_concat(x, z), vec_concat(x, y));
        return;
    }
    if (route_ == RouteKind::ImplicitLift) {
        base_->absorb_result(vec_concat(x, z), Vec(spec_.dims.n, 0.0), y);
        return;
    }
    absorb({Waypoint{vec_concat(x, z), y}});
}

std::size_t GermEvaluator::waypoint_count() const {
    if (base_) return base_->waypoint_count();
    std::lock_guard lock(cache_->mutex);
    return cache_->entries.size();
}

GermEvaluator GermEvaluator::clone() const {
    GermEvaluator copy;
    copy.spec_ = spec_;
    copy.seed_ = seed_;
    copy.cfg_ = cfg_;
    copy.mode_ = mode_;
    copy.route_ = route_;
    if (base_) {
        copy.base_ = std::make_shared<GermEvaluator>(base_->clone());
    } else {
        copy.cache_ = std::make_unique<Cache>();
        copy.cache_->entries = snapshot();
    }
    return copy;
}

GermEvaluator make_germ(FunctionSpec spec, SeedPoint seed, SolverConfig cfg) {
    spec.dims.validate();
    cfg.validate();
    const int p = spec.dims.p();
    const int n = spec.dims.n;
    if (static_cast<int>(seed.a.size()) != p || static_cast<int>(seed.b.size()) != n ||
        static_cast<int>(seed.c.size()) != n) {
        throw Error(ErrorKind::DimensionMismatch, "seed lengths do not match dims");
    }
    const double residual = inf_norm(residual_at(spec, seed.a, seed.b, seed.c));
    if (!(residual <= cfg.tol_res)) {
        throw Error(ErrorKind::SeedResidualTooLarge,
                    "seed residual " + std::to_string(residual) +
                        " exceeds tol_res; certify with check_seed first")
            .with_value(residual);
    }

    BlockJacobian jac = jacobian_of(spec, vec_concat(seed.a, seed.b), cfg.fd_step);
    const double rc = jac.d_y_rcond();
    if (!(rc >= cfg.rcond_min)) {
        throw Error(ErrorKind::SingularAtSeed,
                    "D_yF at the seed has rcond " + std::to_string(rc) + " below rcond_min")
            .with_value(rc);
    }

    GermEvaluator germ;
    germ.spec_ = std::move(spec);
    germ.seed_ = std::move(seed);
    germ.cfg_ = cfg;
    germ.mode_ = (p == 0) ? GermMode::Inverse : GermMode::General;
    germ.cache_ = std::make_unique<GermEvaluator::Cache>();
    germ.cache_->entries.push_back(
        Waypoint{vec_concat(germ.seed_.a, germ.seed_.c), germ.seed_.b});
    return germ;
}

GermEvaluator make_route_germ(FunctionSpec original_spec, SeedPoint original_seed,
                              SolverConfig cfg, RouteKind route,
                              std::shared_ptr<GermEvaluator> base) {
    GermEvaluator germ;
    germ.spec_ = std::move(original_spec);
    germ.seed_ = std::move(original_seed);
    germ.cfg_ = cfg;
    germ.mode_ = route == RouteKind::ImplicitLift ? GermMode::ImplicitSlice
                 : germ.spec_.dims.p() == 0       ? GermMode::Inverse
                                                  : GermMode::General;
    germ.route_ = route;
    germ.base_ = std::move(base);
    return germ;
}

}  // namespace germ
