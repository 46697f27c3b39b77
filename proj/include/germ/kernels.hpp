#pragma once

#include <span>
#include <string>

#include "germ/solver.hpp"

namespace germ::kernels {

struct GridTarget {
    Vec x;
    Vec z;
};

struct GridRowResult {
    bool ok = false;
    Vec y;
    double residual = 0.0;
    int iters = 0;
    double rcond = 0.0;
    ErrorKind error = ErrorKind::NoConvergence;
    std::string message;
};

/// Evaluate a batch of targets against a snapshot of the germ's cache
/// taken at entry. Every row starts from the snapshot, so results do not
/// depend on row order, thread count, or scheduling; the parallel and
/// serial variants return bitwise-identical rows. Accepted results are
/// merged back into the cache in index order afterwards.
std::vector<GridRowResult> evaluate_targets_serial(const GermEvaluator& germ,
                                                   std::span<const GridTarget> targets);

std::vector<GridRowResult> evaluate_targets_openmp(const GermEvaluator& germ,
                                                   std::span<const GridTarget> targets, int jobs);

/// Dispatch: jobs <= 1 runs the serial reference.
std::vector<GridRowResult> evaluate_targets(const GermEvaluator& germ,
                                            std::span<const GridTarget> targets, int jobs);

}  // namespace germ::kernels
