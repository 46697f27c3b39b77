#include <cmath>

#include "doctest.h"
#include "germ/diagnostics.hpp"
#include "oracles.hpp"

using namespace germ;
using namespace germ::diagnostics;

namespace {

std::vector<Target> grid_2d(double x_lo, double x_hi, double z_lo, double z_hi, int per_axis) {
    std::vector<Target> out;
    for (int i = 0; i < per_axis; ++i) {
        for (int j = 0; j < per_axis; ++j) {
            const double x = x_lo + (x_hi - x_lo) * i / (per_axis - 1);
            const double z = z_lo + (z_hi - z_lo) * j / (per_axis - 1);
            out.push_back({{x}, {z}});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("check_jacobian_formula: circle 5x5 grid stays under 1e-5") {
    GermEvaluator germ = oracles::catalog_germ("circle");
    const double err = check_jacobian_formula(germ, grid_2d(-0.3, 0.3, -0.1, 0.1, 5), 1e-5);
    CHECK(err <= 1e-5);
}

TEST_CASE("check_jacobian_formula: affine is exact to rounding") {
    GermEvaluator germ = oracles::catalog_germ("affine");
    const double err = check_jacobian_formula(germ, grid_2d(-1.0, 1.0, -1.0, 1.0, 4), 1e-5);
    CHECK(err <= 1e-9);
}

TEST_CASE("check_jacobian_formula: poly2x2 3-per-axis grid") {
    GermEvaluator germ = oracles::catalog_germ("poly2x2");
    std::vector<Target> grid;
    for (double x : {1.7, 2.0, 2.3})
        for (double z1 : {-0.1, 0.0, 0.1})
            for (double z2 : {-0.1, 0.0, 0.1}) grid.push_back({{x}, {z1, z2}});
    CHECK(check_jacobian_formula(germ, grid, 1e-5) <= 1e-5);
}

TEST_CASE("check_jacobian_formula: failures carry the offending target") {
    GermEvaluator germ = oracles::catalog_germ("circle");
    std::vector<Target> grid = {{{0.0}, {0.0}}, {{1.5}, {0.0}}};
    try {
        check_jacobian_formula(germ, grid, 1e-5);
        FAIL("expected failure at the fold target");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularJacobian);
        CHECK(std::string(e.what()).find("grid target 1") != std::string::npos);
    }
}

TEST_CASE("uniqueness_probe: circle basin at radius 0.3 passes") {
    GermEvaluator germ = oracles::catalog_germ("circle");
    UniquenessReport report = uniqueness_probe(germ, {0.6}, {0.0}, 8, 0.3);
    CHECK(report.verdict == Verdict::Pass);
    CHECK(report.consistent == 8);
    CHECK(report.witnesses.empty());
    CHECK(std::abs(report.y_star[0] - 0.8) <= 1e-9);
}

TEST_CASE("uniqueness_probe: the second branch shows up as a witness") {
    GermEvaluator germ = oracles::catalog_germ("circle");
    UniquenessReport report = uniqueness_probe(germ, {0.6}, {0.0}, 32, 1.7);
    REQUIRE(!report.witnesses.empty());
    for (const UniquenessWitness& w : report.witnesses) {
        CHECK(std::abs(w.converged[0] - (-0.8)) <= 1e-8);  // the other sqrt branch
    }
    CHECK(report.verdict == Verdict::Inconclusive);  // reported, not a failure
}

TEST_CASE("uniqueness_probe: every catalog germ passes with the default ball") {
    for (const char* name : {"circle", "exp", "affine", "poly2x2", "mixed-abs"}) {
        CAPTURE(name);
        GermEvaluator germ = oracles::catalog_germ(name);
        UniquenessReport report =
            uniqueness_probe(germ, germ.seed().a, germ.seed().c, 8, 0.3);
        CHECK(report.verdict == Verdict::Pass);
    }
}

TEST_CASE("singularity_scan: circle singular line localized near y = 0") {
    FunctionSpec circle = build_spec(catalog_entry("circle"));
    ScanResult scan = singularity_scan(circle, {{0.0, -0.1}, {1.2, 0.1}}, 25);
    CHECK(scan.min_abs_det <= 0.02);
    CHECK(std::abs(scan.argmin_point[1]) <= 0.01);
    CHECK(scan.failures.empty());
    CHECK(scan.evaluated == 625);
}

TEST_CASE("singularity_scan: a box away from the singular set") {
    FunctionSpec circle = build_spec(catalog_entry("circle"));
    ScanResult scan = singularity_scan(circle, {{0.0, 0.8}, {0.5, 1.0}}, 25);
    CHECK(scan.min_abs_det >= 1.6 - 1e-6);
}

TEST_CASE("singularity_scan: affine determinant is constant") {
    FunctionSpec affine = build_spec(catalog_entry("affine"));
    ScanResult scan = singularity_scan(affine, {{-5.0, -5.0}, {5.0, 5.0}}, 10);
    CHECK(std::abs(scan.min_abs_det - 3.0) <= 1e-6);
    CHECK(scan.min_rcond == 1.0);
}

TEST_CASE("singularity_scan: nested refinement drives the circle minimum to zero") {
    // Doubling the resolution with nested grids (g -> 2g-1) keeps every
    // coarse ordinate, so minima are monotone non-increasing by
    // construction; uniform re-gridding (25 -> 50) would not be.
    FunctionSpec circle = build_spec(catalog_entry("circle"));
    double prev = std::numeric_limits<double>::infinity();
    for (int g : {25, 49, 97, 193}) {
        ScanResult scan = singularity_scan(circle, {{0.0, -0.1}, {1.2, 0.1}}, g);
        CHECK(scan.min_abs_det <= prev);
        prev = scan.min_abs_det;
    }
    CHECK(prev <= 1e-2);
}

TEST_CASE("singularity_scan: domain errors are recorded per point, scan continues") {
    FunctionSpec logspec;
    logspec.dims = Dims{0, 0, 1};
    logspec.evaluator = [](const Vec& u) {
        if (u[0] <= 0.0) throw Error(ErrorKind::DomainError, "log domain");
        return Vec{std::log(u[0])};
    };
    ScanResult scan = singularity_scan(logspec, {{-1.0}, {1.0}}, 11);
    CHECK(!scan.failures.empty());
    CHECK(scan.evaluated + static_cast<int>(scan.failures.size()) == 11);
    CHECK(scan.evaluated > 0);
}

TEST_CASE("strong_diff_probe: y^2 at 0 passes with defect of order r") {
    FunctionSpec spec;
    spec.dims = Dims{0, 0, 1};
    spec.evaluator = [](const Vec& u) { return Vec{u[0] * u[0]}; };
    const double scales[] = {1e-1, 1e-2, 1e-3, 1e-4};
    ProbeReport report = strong_diff_probe(spec, {0.0}, scales, 64);
    CHECK(report.verdict == Verdict::Pass);
    for (const ProbeSample& s : report.samples) CHECK(s.defect <= 2.0 * s.scale);
}

TEST_CASE("strong_diff_probe: y^2 sin(1/y) at 0 fails (defect bounded below)") {
    FunctionSpec spec = build_spec(catalog_entry("sindiff"));
    const double scales[] = {1e-1, 1e-2, 1e-3, 1e-4};
    ProbeReport report = strong_diff_probe(spec, {0.0}, scales, 64);
    CHECK(report.verdict == Verdict::Fail);
    CHECK(report.samples.back().defect >= 0.5);  // oscillation amplitude ~1
}

TEST_CASE("strong_diff_probe: affine maps measure a zero defect") {
    FunctionSpec affine = build_spec(catalog_entry("affine"));
    const double scales[] = {1e-1, 1e-2, 1e-3, 1e-4};
    ProbeReport report = strong_diff_probe(affine, {0.4, -0.2}, scales, 64);
    CHECK(report.verdict == Verdict::Pass);
    for (const ProbeSample& s : report.samples) CHECK(s.defect <= 1e-10);
}

TEST_CASE("strong_diff_probe: C^1 catalog maps pass at their seeds") {
    const double scales[] = {1e-1, 1e-2, 1e-3, 1e-4};
    for (const char* name : {"circle", "exp", "affine", "poly2x2"}) {
        CAPTURE(name);
        const ProblemFile& pf = catalog_entry(name);
        FunctionSpec spec = build_spec(pf);
        ProbeReport report =
            strong_diff_probe(spec, vec_concat(pf.seed_x(), pf.seed_b), scales, 64);
        CHECK(report.verdict == Verdict::Pass);
    }
}

TEST_CASE("estimate_domain: circle fold bounds the estimate") {
    GermEvaluator germ = oracles::catalog_germ("circle");
    DomainEstimate est = estimate_domain(germ, 2.0, 8, 16);
    CHECK(est.r_xz > 0.0);
    CHECK(est.r_xz < 1.0);
    bool singular_beyond_fold = false;
    for (const DomainFailure& f : est.failures) {
        if (f.kind == ErrorKind::SingularJacobian && std::abs(f.target_xz[0]) >= 1.0) {
            singular_beyond_fold = true;
        }
    }
    CHECK(singular_beyond_fold);
}

TEST_CASE("estimate_domain: affine solves everywhere probed") {
    GermEvaluator germ = oracles::catalog_germ("affine");
    DomainEstimate est = estimate_domain(germ, 100.0, 8, 8);
    CHECK(est.r_xz == 100.0);
    CHECK(est.failures.empty());
}

TEST_CASE("estimate_domain: exp stays clean while z stays positive") {
    GermEvaluator germ = oracles::catalog_germ("exp");
    DomainEstimate est = estimate_domain(germ, 0.9, 8, 8);
    CHECK(est.r_xz == 0.9);
    CHECK(est.failures.empty());
}

TEST_CASE("estimate_domain: shrinking the radius never adds failures") {
    GermEvaluator germ = oracles::catalog_germ("circle");
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double radius : {2.0, 1.5, 1.0, 0.5}) {
        DomainEstimate est = estimate_domain(germ, radius, 8, 16);
        CHECK(est.failures.size() <= prev);
        prev = est.failures.size();
    }
}

TEST_CASE("mixed formula: FD of evaluate in (t, z) matches, including s = 0") {
    GermEvaluator germ = oracles::catalog_germ("mixed-abs");
    Rng rng(700);
    // balanced step: large enough that solver noise (~tol_res) in the
    // numerator stays below the 1e-6 gate
    const double h = 5e-4;
    for (int trial = 0; trial < 11; ++trial) {
        const double s = (trial == 0) ? 0.0 : rng.uniform(-0.25, 0.25);
        const double t = rng.uniform(-0.25, 0.25);
        const double z = rng.uniform(-0.25, 0.25);
        Matrix mixed = germ.mixed_jacobian({s}, {t}, {z});
        const double fd_t =
            (germ.evaluate({s, t + h}, {z}).y[0] - germ.evaluate({s, t - h}, {z}).y[0]) / (2 * h);
        const double fd_z =
            (germ.evaluate({s, t}, {z + h}).y[0] - germ.evaluate({s, t}, {z - h}).y[0]) / (2 * h);
        CHECK(std::abs(mixed(0, 0) - fd_t) <= 1e-6);
        CHECK(std::abs(mixed(0, 1) - fd_z) <= 1e-6);
    }
}

TEST_CASE("diagnostics are deterministic given the seed") {
    GermEvaluator germ = oracles::catalog_germ("circle");
    DomainEstimate a = estimate_domain(germ, 2.0, 4, 8, 123);
    DomainEstimate b = estimate_domain(germ, 2.0, 4, 8, 123);
    CHECK(a.r_xz == b.r_xz);
    CHECK(a.failures.size() == b.failures.size());
    CHECK(a.min_rcond == b.min_rcond);

    FunctionSpec sindiff = build_spec(catalog_entry("sindiff"));
    const double scales[] = {1e-1, 1e-2};
    ProbeReport p1 = strong_diff_probe(sindiff, {0.0}, scales, 16, 99);
    ProbeReport p2 = strong_diff_probe(sindiff, {0.0}, scales, 16, 99);
    REQUIRE(p1.samples.size() == p2.samples.size());
    for (std::size_t i = 0; i < p1.samples.size(); ++i) {
        CHECK(p1.samples[i].defect == p2.samples[i].defect);
    }
}
