// Benchmark: serial reference vs OpenMP kernels on grid evaluation and
// the singularity scan. Prints a small table of wall times and speedup.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "germ/diagnostics.hpp"
#include "germ/kernels.hpp"
#include "germ/parallel.hpp"
#include "germ/problem.hpp"

using namespace germ;

namespace {

double seconds_of(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GermEvaluator germ_for(const std::string& name) {
    const ProblemFile& pf = catalog_entry(name);
    FunctionSpec spec = build_spec(pf);
    SolverConfig cfg = apply_overrides(pf.solver, SolverConfig{});
    SeedPoint seed = check_seed(spec, pf.seed_x(), pf.seed_b, pf.seed_c, cfg.tol_res);
    return make_germ(std::move(spec), std::move(seed), cfg);
}

std::vector<kernels::GridTarget> grid_for(const ProblemFile& pf, int per_axis) {
    const Vec radii = default_check_radii(pf);
    const Vec center = vec_concat(pf.seed_x(), pf.seed_c);
    const int dim = static_cast<int>(center.size());
    const int p = pf.dims.p();
    std::vector<kernels::GridTarget> out;
    std::vector<int> idx(dim, 0);
    for (;;) {
        Vec xz(dim);
        for (int a = 0; a < dim; ++a)
            xz[a] = center[a] + (-1.0 + 2.0 * idx[a] / (per_axis - 1)) * radii[a];
        out.push_back({Vec(xz.begin(), xz.begin() + p), Vec(xz.begin() + p, xz.end())});
        int a = dim - 1;
        while (a >= 0 && ++idx[a] == per_axis) idx[a--] = 0;
        if (a < 0) break;
    }
    return out;
}

void report(const char* name, long long items, double serial_s, double parallel_s, int jobs) {
    std::printf("%-28s %10lld items   serial %8.3f s   omp(%d) %8.3f s   speedup %.2fx\n", name,
                items, serial_s, jobs, parallel_s, serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
    int jobs = hardware_jobs();
    int scale = 1;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--jobs" && i + 1 < argc) jobs = std::atoi(argv[++i]);
        if (arg == "--scale" && i + 1 < argc) scale = std::atoi(argv[++i]);
    }
    if (!openmp_enabled()) {
        std::printf("OpenMP not enabled in this build; parallel timings run serially.\n");
    }
    std::printf("jobs = %d\n\n", jobs);

    {
        const ProblemFile& pf = catalog_entry("circle");
        const auto targets = grid_for(pf, 120 * scale);
        GermEvaluator g1 = germ_for("circle");
        const double ts = seconds_of([&] { kernels::evaluate_targets_serial(g1, targets); });
        GermEvaluator g2 = germ_for("circle");
        const double tp =
            seconds_of([&] { kernels::evaluate_targets_openmp(g2, targets, jobs); });
        report("grid evaluate (circle)", static_cast<long long>(targets.size()), ts, tp, jobs);
    }
    {
        const ProblemFile& pf = catalog_entry("poly2x2");
        const auto targets = grid_for(pf, 24 * scale);
        GermEvaluator g1 = germ_for("poly2x2");
        const double ts = seconds_of([&] { kernels::evaluate_targets_serial(g1, targets); });
        GermEvaluator g2 = germ_for("poly2x2");
        const double tp =
            seconds_of([&] { kernels::evaluate_targets_openmp(g2, targets, jobs); });
        report("grid evaluate (poly2x2)", static_cast<long long>(targets.size()), ts, tp, jobs);
    }
    {
        FunctionSpec circle = build_spec(catalog_entry("circle"));
        const diagnostics::Box box{{0.0, -0.1}, {1.2, 0.1}};
        const int g = 700 * scale;
        const double ts =
            seconds_of([&] { diagnostics::singularity_scan(circle, box, g, 1); });
        const double tp =
            seconds_of([&] { diagnostics::singularity_scan(circle, box, g, jobs); });
        report("singularity scan (circle)", static_cast<long long>(g) * g, ts, tp, jobs);
    }
    return 0;
}
