#pragma once

#include <memory>
#include <mutex>

#include "germ/model.hpp"

namespace germ {

struct SolverConfig {
    double tol_res = 1e-10;        // ∞-norm residual gate
    int max_newton_iters = 25;     // per correction
    double rcond_min = 1e-10;      // invertibility gate on D_yF
    double initial_step = 1.0;     // continuation step fraction
    double min_step = 1e-6;        // give up below this fraction
    double step_shrink = 0.5;
    double step_grow = 2.0;
    double backtrack_factor = 0.5;  // Armijo damping factor
    int max_backtracks = 8;
    double armijo_slope = 1e-4;    // accept ‖r(y−λΔ)‖ ≤ (1 − slope·λ)‖r(y)‖
    double branch_guard = 0.5;     // max |y_corrected − y_predictor| / (‖y_predictor‖∞ + 1)
    double fd_step = 1e-6;         // relative step for FD Jacobians
    double fold_det_decay = 1e-2;  // see evaluate(): fold classification on give-up

    void validate() const;
};

enum class StopReason { Converged, SingularJacobian, NoConvergence, DomainError, BranchJump };

std::string_view to_string(StopReason reason);

struct NewtonIterate {
    Vec y;
    double residual_inf;
    double rcond;      // of D_yF at the point the step was computed from
    double step_inf;   // ‖λΔ‖∞ actually applied
    double lambda;     // damping factor accepted
};

struct NewtonTrace {
    std::vector<NewtonIterate> iterates;
    StopReason reason = StopReason::NoConvergence;
    double initial_residual = 0.0;
    double final_residual = 0.0;
    int backtracks = 0;

    int iterations() const noexcept { return static_cast<int>(iterates.size()); }
};

struct NewtonResult {
    Vec y;
    NewtonTrace trace;
};

/// Damped Newton on y for F(x, y) = z at fixed x, from the start y0.
/// Every iterate is gated on rcond(D_yF) ≥ rcond_min. Throws
/// SingularJacobian / NoConvergence / DomainError.
NewtonResult newton_correct(const FunctionSpec& spec, const Vec& x, const Vec& z, const Vec& y0,
                            const SolverConfig& cfg);

/// One accepted continuation sub-step.
struct ContinuationStep {
    double sigma;       // progress along the segment after this step
    Vec target_xz;
    int newton_iters;
    double residual_inf;
    double rcond;       // of D_yF at the accepted waypoint
    double abs_det;
};

struct EvalTrace {
    std::vector<ContinuationStep> steps;
    int total_newton_iters = 0;
    int rejected_steps = 0;
    bool from_cache = false;
    double final_residual = 0.0;
    double final_rcond = 1.0;
};

struct EvalResult {
    Vec y;
    EvalTrace trace;
};

struct Waypoint {
    Vec xz;  // concatenated (x, z), length p+n
    Vec y;
};

enum class GermMode { General, Inverse, ImplicitSlice };

std::string_view to_string(GermMode mode);

enum class RouteKind { None, InverseLift, ImplicitLift };

/// The computed local evaluator G with F(x, G(x, z)) = z around a seed.
///
/// Evaluation runs predictor–corrector continuation along the straight
/// segment in (x, z)-space from the nearest accepted waypoint to the
/// target, with damped Newton as the corrector. Accepted results join
/// the waypoint cache so nearby targets warm-start on the same branch.
///
/// Sharing: concurrent evaluate() calls on one germ are safe; the cache
/// is the only mutable state and behaves as a linearizable map. For
/// scheduling-independent results use snapshot() + evaluate_isolated()
/// and merge the outcomes back in index order (see kernels.hpp).
class GermEvaluator {
public:
    const FunctionSpec& spec() const noexcept { return spec_; }
    const SeedPoint& seed() const noexcept { return seed_; }
    const SolverConfig& config() const noexcept { return cfg_; }
    GermMode mode() const noexcept { return mode_; }
    RouteKind route() const noexcept { return route_; }

    /// The lifted-problem germ a route germ delegates to; nullptr for
    /// germs built directly by make_germ.
    const GermEvaluator* base() const noexcept { return base_.get(); }

    EvalResult evaluate(const Vec& x, const Vec& z) const;

    /// DG(x, z) = [ −D_yF⁻¹·D_xF | D_yF⁻¹ ] at (x, G(x, z)), n × (p+n).
    /// Solved column by column from the LU factors; the inverse is never
    /// formed.
    Matrix jacobian(const Vec& x, const Vec& z) const;

    /// The implicit function f of the slice z = c: f(x) = G(x, c).
    Vec implicit_slice(const Vec& x) const;

    /// Df(x) = −D_yF⁻¹·D_xF at (x, f(x)): the left block of jacobian().
    Matrix slice_jacobian(const Vec& x) const;

    /// Mixed-case derivative [ −D_yF⁻¹·D_tF | D_yF⁻¹ ], n × (m+n). The
    /// s-columns of DF are never consumed. Identical to jacobian() when
    /// q = 0.
    Matrix mixed_jacobian(const Vec& s, const Vec& t, const Vec& z) const;

    // -- waypoint cache ----------------------------------------------------

    std::vector<Waypoint> snapshot() const;

    /// Evaluate against a frozen waypoint list; the shared cache is
    /// neither read nor written. Result depends only on (snapshot, x, z).
    EvalResult evaluate_isolated(const std::vector<Waypoint>& waypoints, const Vec& x,
                                 const Vec& z) const;

    /// jacobian() against a frozen waypoint list.
    Matrix jacobian_isolated(const std::vector<Waypoint>& waypoints, const Vec& x,
                             const Vec& z) const;

    /// Append waypoints (already gate-checked by an isolated evaluation)
    /// in the order given.
    void absorb(const std::vector<Waypoint>& waypoints) const;

    /// Record one accepted evaluation ((x, z) → y) in the cache,
    /// translating coordinates for route germs.
    void absorb_result(const Vec& x, const Vec& z, const Vec& y) const;

    std::size_t waypoint_count() const;

    /// Deep copy with an independent cache (snapshot of this one).
    GermEvaluator clone() const;

    GermEvaluator(GermEvaluator&&) noexcept = default;
    GermEvaluator& operator=(GermEvaluator&&) noexcept = default;

private:
    friend GermEvaluator make_germ(FunctionSpec spec, SeedPoint seed, SolverConfig cfg);
    friend GermEvaluator make_route_germ(FunctionSpec original_spec, SeedPoint original_seed,
                                         SolverConfig cfg, RouteKind route,
                                         std::shared_ptr<GermEvaluator> base);

    GermEvaluator() = default;

    EvalResult evaluate_direct(const std::vector<Waypoint>& waypoints, const Vec& x, const Vec& z,
                               std::vector<Waypoint>* accepted) const;
    Matrix jacobian_from_blocks(const BlockJacobian& jac, int first_col, int param_cols) const;

    struct Cache {
        mutable std::mutex mutex;
        std::vector<Waypoint> entries;
    };

    FunctionSpec spec_;
    SeedPoint seed_;
    SolverConfig cfg_;
    GermMode mode_ = GermMode::General;
    RouteKind route_ = RouteKind::None;
    std::shared_ptr<GermEvaluator> base_;  // lifted germ for route germs
    std::unique_ptr<Cache> cache_;
};

/// Construct the germ at a certified seed. Evaluates D_yF(a, b) and
/// requires rcond ≥ rcond_min; throws SingularAtSeed otherwise.
GermEvaluator make_germ(FunctionSpec spec, SeedPoint seed, SolverConfig cfg = {});

/// Wrap a germ of a lifted problem as a germ of the original one.
/// Used by the reduction routes; the wrapper delegates evaluation and
/// derivative queries to `base` with the coordinate translation the
/// route requires.
GermEvaluator make_route_germ(FunctionSpec original_spec, SeedPoint original_seed,
                              SolverConfig cfg, RouteKind route,
                              std::shared_ptr<GermEvaluator> base);

}  // namespace germ
