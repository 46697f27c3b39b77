#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "germ/rng.hpp"
#include "germ/solver.hpp"

namespace germ::diagnostics {

enum class Verdict { Pass, Fail, Inconclusive };

std::string_view to_string(Verdict verdict);

struct Target {
    Vec x;
    Vec z;
};

/// Compare the derivative formula against central differences of the
/// evaluator itself, componentwise with denominator (1 + |entry|), over
/// the given targets. Returns the maximum relative error. Evaluation
/// failures rethrow with the offending target attached to the message.
double check_jacobian_formula(const GermEvaluator& germ, std::span<const Target> grid,
                              double fd_step = 1e-5, int jobs = 1);

struct UniquenessWitness {
    Vec start;
    Vec converged;
    double distance;  // ∞-distance from y*
};

/// Newton from perturbed starts around y* = G(x, z).
///
/// Rule: Pass when every converged start lands within 1e-8 of y*.
/// Starts that converge to a different solution are witnesses that the
/// probe ball left the invertibility neighborhood — reported, and the
/// verdict degrades to Inconclusive rather than Fail.
struct UniquenessReport {
    Verdict verdict = Verdict::Inconclusive;
    Vec y_star;
    int consistent = 0;
    int nonconverged = 0;
    std::vector<UniquenessWitness> witnesses;
};

UniquenessReport uniqueness_probe(const GermEvaluator& germ, const Vec& x, const Vec& z,
                                  int n_starts, double radius,
                                  std::uint64_t seed = kDefaultProbeSeed);

/// Axis-aligned box over the full (x, y) space.
struct Box {
    Vec lo;
    Vec hi;
};

struct ScanFailure {
    Vec point;
    ErrorKind kind;
};

struct ScanResult {
    double min_rcond = 0.0;
    double min_abs_det = 0.0;
    Vec argmin_point;  // where |det D_yF| attains its minimum
    int evaluated = 0;
    std::vector<ScanFailure> failures;
};

/// Evaluate D_yF on a uniform grid over the box and report the minimum
/// reciprocal condition and determinant magnitude with their location.
/// DomainError grid points are recorded and the scan continues.
ScanResult singularity_scan(const FunctionSpec& spec, const Box& region, int grid_per_axis,
                            int jobs = 1);

struct ProbeSample {
    double scale;
    double defect;
};

struct ProbeReport {
    std::string statistic;
    std::vector<ProbeSample> samples;
    Verdict verdict = Verdict::Inconclusive;
    int resampled = 0;  // degenerate or out-of-domain pairs, redrawn
    std::string rule;   // the decision rule the verdict was taken under
};

/// Strong-differentiability probe: measures the two-point linearization
/// defect max ‖F(u)−F(v)−DF(point)(u−v)‖∞ / ‖u−v‖∞ over sampled pairs in
/// balls of decreasing radius.
///
/// Pair separations are drawn log-uniformly down to 1e-6 of the ball
/// radius; nearby pairs are what expose a defect that ordinary
/// differentiability hides (fine oscillation of the derivative). Each
/// pair's defect is reduced by a floating-point noise bound so that an
/// exactly linear map measures zero.
///
/// Verdict: Pass if all defects sit at rounding level, or decrease at
/// ratio ≤ 0.7 per decade of scale; Fail if the last defect is ≥ 0.5 ×
/// the first; Inconclusive otherwise.
ProbeReport strong_diff_probe(const FunctionSpec& spec, const Vec& point,
                              std::span<const double> scales, int pairs_per_scale,
                              std::uint64_t seed = kDefaultProbeSeed);

struct DomainFailure {
    int ring;
    Vec target_xz;
    ErrorKind kind;
    std::string message;
};

/// Empirical working-domain estimate around (a, c): probes targets on
/// concentric ∞-norm rings; r_xz is the largest ring radius with zero
/// failures (0 when every probed ring fails). Failures are data, not
/// errors.
struct DomainEstimate {
    double r_xz = 0.0;
    double min_rcond = 1.0;  // over successful targets
    int probed = 0;
    std::vector<DomainFailure> failures;
};

DomainEstimate estimate_domain(const GermEvaluator& germ, double max_radius, int rings,
                               int targets_per_ring, std::uint64_t seed = kDefaultProbeSeed,
                               int jobs = 1);

}  // namespace germ::diagnostics
