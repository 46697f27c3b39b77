#include "germ/kernels.hpp"

#include "germ/parallel.hpp"

namespace germ::kernels {

namespace {

std::vector<GridRowResult> run_batch(const GermEvaluator& germ,
                                     std::span<const GridTarget> targets, int jobs) {
    const int count = static_cast<int>(targets.size());
    const std::vector<Waypoint> snap = germ.snapshot();
    std::vector<GridRowResult> rows(count);

    for_each_index(count, jobs, [&](int idx) {
        const GridTarget& t = targets[idx];
        GridRowResult& row = rows[idx];
        try {
            EvalResult res = germ.evaluate_isolated(snap, t.x, t.z);
            row.ok = true;
            row.y = std::move(res.y);
            row.residual = res.trace.final_residual;
            row.iters = res.trace.total_newton_iters;
            row.rcond = res.trace.final_rcond;
        } catch (const Error& e) {
            row.error = e.kind();
            row.message = e.what();
        } catch (const std::exception& e) {
            row.error = ErrorKind::InternalError;
            row.message = e.what();
        }
    });

    // Deterministic merge-back: index order, independent of scheduling.
    for (int idx = 0; idx < count; ++idx) {
        if (rows[idx].ok) germ.absorb_result(targets[idx].x, targets[idx].z, rows[idx].y);
    }
    return rows;
}

}  // namespace

std::vector<GridRowResult> evaluate_targets_serial(const GermEvaluator& germ,
                                                   std::span<const GridTarget> targets) {
    return run_batch(germ, targets, 1);
}

std::vector<GridRowResult> evaluate_targets_openmp(const GermEvaluator& germ,
                                                   std::span<const GridTarget> targets, int jobs) {
    return run_batch(germ, targets, jobs < 2 ? 2 : jobs);
}

std::vector<GridRowResult> evaluate_targets(const GermEvaluator& germ,
                                            std::span<const GridTarget> targets, int jobs) {
    if (jobs <= 1) return evaluate_targets_serial(germ, targets);
    return evaluate_targets_openmp(germ, targets, jobs);
}

}  // namespace germ::kernels
