// germ: solve F(x, y) = z locally around a certified seed, inspect the
// derivative formulas, and probe the hypotheses behind them.
//
// Subcommands: solve | grid | check | catalog. Exit codes: 0 ok,
// 1 check failure, 2 usage/parse error, 3 seed rejection, 4 evaluation
// failure. All numeric output is printed with 17 significant digits so
// identical invocations produce byte-identical reports.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "germ/diagnostics.hpp"
#include "germ/kernels.hpp"
#include "germ/parallel.hpp"
#include "germ/problem.hpp"
#include "germ/reductions.hpp"
#include "germ/report.hpp"

namespace {

using namespace germ;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSeedRejected = 3;
constexpr int kExitEvaluation = 4;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SeedResidualTooLarge:
        case ErrorKind::SingularAtSeed:
            return kExitSeedRejected;
        case ErrorKind::DomainError:
        case ErrorKind::SingularJacobian:
        case ErrorKind::NoConvergence:
            return kExitEvaluation;
        default:
            return kExitUsage;
    }
}

struct GlobalOptions {
    double tol_res = -1.0;  // negative: not set on the command line
    double rcond_min = -1.0;
    int max_iters = -1;
    int jobs = 1;
    bool json = false;
    bool allow_failures = false;
    bool timings = false;
    std::string out_path;
};

SolverConfig resolve_config(const GlobalOptions& opts, const ProblemFile& pf) {
    SolverConfig cfg = apply_overrides(pf.solver, SolverConfig{});
    if (opts.tol_res > 0.0) cfg.tol_res = opts.tol_res;
    if (opts.rcond_min > 0.0) cfg.rcond_min = opts.rcond_min;
    if (opts.max_iters > 0) cfg.max_newton_iters = opts.max_iters;
    cfg.validate();
    return cfg;
}

Vec parse_reals(const std::string& text) {
    Vec out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(start, comma - start);
        if (!item.empty()) {
            char* end = nullptr;
            const double v = std::strtod(item.c_str(), &end);
            if (end != item.c_str() + item.size()) {
                throw Error(ErrorKind::ConfigError, "bad number '" + item + "' in list");
            }
            out.push_back(v);
        }
        start = comma + 1;
    }
    return out;
}

void emit(const GlobalOptions& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write to '" + opts.out_path + "'");
    }
    out << text;
}

void write_config(JsonWriter& w, const SolverConfig& cfg, const GlobalOptions& opts) {
    w.key("config").begin_object();
    w.key("tol_res").value(cfg.tol_res);
    w.key("rcond_min").value(cfg.rcond_min);
    w.key("max_iters").value(cfg.max_newton_iters);
    w.key("min_step").value(cfg.min_step);
    w.key("fd_step").value(cfg.fd_step);
    w.key("jobs").value(opts.jobs);
    w.end_object();
}

struct LoadedProblem {
    ProblemFile file;
    FunctionSpec spec;
    SolverConfig cfg;
};

LoadedProblem load(const std::string& reference, const GlobalOptions& opts) {
    LoadedProblem lp{load_problem(reference), {}, {}};
    lp.spec = build_spec(lp.file);
    lp.cfg = resolve_config(opts, lp.file);
    return lp;
}

GermEvaluator make_problem_germ(const LoadedProblem& lp) {
    SeedPoint seed =
        check_seed(lp.spec, lp.file.seed_x(), lp.file.seed_b, lp.file.seed_c, lp.cfg.tol_res);
    return make_germ(lp.spec, seed, lp.cfg);
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

int cmd_solve(const std::string& problem_ref, const std::string& x_text,
              const std::string& z_text, const GlobalOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    LoadedProblem lp = load(problem_ref, opts);
    if (lp.file.probe_only) {
        throw Error(ErrorKind::ConfigError,
                    "'" + lp.file.name + "' is a probe-only map; nothing to solve");
    }
    const int p = lp.file.dims.p();
    const int n = lp.file.dims.n;
    const Vec x = parse_reals(x_text);
    const Vec z = parse_reals(z_text);
    if (static_cast<int>(x.size()) != p || static_cast<int>(z.size()) != n) {
        throw Error(ErrorKind::ConfigError,
                    "expected " + std::to_string(p) + " --x value(s) and " + std::to_string(n) +
                        " --z value(s)");
    }

    GermEvaluator germ = make_problem_germ(lp);
    EvalResult res = germ.evaluate(x, z);
    Matrix dg = germ.jacobian(x, z);

    // Re-verify what gets printed: round-trip y through the output
    // format and recompute the residual from it.
    Vec y_printed(res.y.size());
    for (std::size_t i = 0; i < res.y.size(); ++i)
        y_printed[i] = std::strtod(format_double(res.y[i]).c_str(), nullptr);
    const double recomputed =
        inf_norm(vec_sub(eval_f(lp.spec, vec_concat(x, y_printed)), z));
    if (std::abs(recomputed - res.trace.final_residual) > 1e-12) {
        throw Error(ErrorKind::InternalError, "printed residual failed re-verification");
    }

    JsonWriter w;
    w.begin_object();
    w.key("command").value(std::string_view("solve"));
    w.key("problem").value(lp.file.name);
    write_config(w, lp.cfg, opts);
    w.key("mode").value(to_string(germ.mode()));
    w.key("target").begin_object();
    w.key("x").value(x);
    w.key("z").value(z);
    w.end_object();
    w.key("result").begin_object();
    w.key("y").value(res.y);
    w.key("residual").value(recomputed);
    w.key("iterations").value(res.trace.total_newton_iters);
    w.key("rcond").value(res.trace.final_rcond);
    w.key("from_cache").value(res.trace.from_cache);
    w.key("dg").value(dg);
    if (lp.file.dims.q > 0) {
        const Vec s(x.begin(), x.begin() + lp.file.dims.q);
        const Vec t(x.begin() + lp.file.dims.q, x.end());
        w.key("dg_mixed").value(germ.mixed_jacobian(s, t, z));
    }
    w.key("verified").value(true);
    w.end_object();
    w.key("trace").begin_object();
    w.key("continuation_steps").value(static_cast<int>(res.trace.steps.size()));
    w.key("rejected_steps").value(res.trace.rejected_steps);
    w.end_object();
    if (opts.timings) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        w.key("timings").begin_object();
        w.key("total_s").value(secs);
        w.end_object();
    }
    w.key("status").value(std::string_view("ok"));
    w.end_object();
    emit(opts, w.str() + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// grid
// ---------------------------------------------------------------------------

int cmd_grid(const std::string& problem_ref, const std::string& box_text,
             const std::string& counts_text, const GlobalOptions& opts) {
    LoadedProblem lp = load(problem_ref, opts);
    if (lp.file.probe_only) {
        throw Error(ErrorKind::ConfigError,
                    "'" + lp.file.name + "' is a probe-only map; nothing to solve");
    }
    const int p = lp.file.dims.p();
    const int n = lp.file.dims.n;
    const int dim = p + n;

    // box: lo:hi per (x, z) axis; default centered at (a, c) with the
    // problem's check radii
    Vec lo(dim), hi(dim);
    if (box_text.empty()) {
        const Vec radii = default_check_radii(lp.file);
        const Vec center = vec_concat(lp.file.seed_x(), lp.file.seed_c);
        for (int i = 0; i < dim; ++i) {
            lo[i] = center[i] - radii[i];
            hi[i] = center[i] + radii[i];
        }
    } else {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (start <= box_text.size()) {
            std::size_t comma = box_text.find(',', start);
            if (comma == std::string::npos) comma = box_text.size();
            parts.push_back(box_text.substr(start, comma - start));
            start = comma + 1;
        }
        if (static_cast<int>(parts.size()) != dim) {
            throw Error(ErrorKind::ConfigError, "--box needs " + std::to_string(dim) +
                                                    " lo:hi ranges, got " +
                                                    std::to_string(parts.size()));
        }
        for (int i = 0; i < dim; ++i) {
            const std::size_t colon = parts[i].find(':');
            if (colon == std::string::npos) {
                throw Error(ErrorKind::ConfigError, "--box entries are lo:hi, got '" + parts[i] + "'");
            }
            lo[i] = std::strtod(parts[i].substr(0, colon).c_str(), nullptr);
            hi[i] = std::strtod(parts[i].substr(colon + 1).c_str(), nullptr);
        }
    }

    std::vector<int> counts(dim, 5);
    if (!counts_text.empty()) {
        const Vec raw = parse_reals(counts_text);
        if (static_cast<int>(raw.size()) == 1) {
            counts.assign(dim, static_cast<int>(raw[0]));
        } else if (static_cast<int>(raw.size()) == dim) {
            for (int i = 0; i < dim; ++i) counts[i] = static_cast<int>(raw[i]);
        } else {
            throw Error(ErrorKind::ConfigError,
                        "--counts needs 1 or " + std::to_string(dim) + " values");
        }
        for (int c : counts) {
            if (c < 1) throw Error(ErrorKind::ConfigError, "--counts values must be >= 1");
        }
    }

    // lexicographic over the grid, first axis slowest
    std::vector<kernels::GridTarget> targets;
    std::vector<int> idx(dim, 0);
    for (;;) {
        Vec xz(dim);
        for (int a = 0; a < dim; ++a) {
            xz[a] = (counts[a] == 1)
                        ? lo[a]
                        : ((idx[a] == counts[a] - 1)
                               ? hi[a]
                               : lo[a] + (hi[a] - lo[a]) * idx[a] / (counts[a] - 1));
        }
        targets.push_back({Vec(xz.begin(), xz.begin() + p), Vec(xz.begin() + p, xz.end())});
        int a = dim - 1;
        while (a >= 0 && ++idx[a] == counts[a]) idx[a--] = 0;
        if (a < 0) break;
    }

    GermEvaluator germ = make_problem_germ(lp);
    const auto rows = kernels::evaluate_targets(germ, targets, opts.jobs);

    CsvWriter csv;
    for (int i = 0; i < p; ++i) csv.field(lp.file.var_names[i]);
    for (int i = 1; i <= n; ++i) csv.field("z" + std::to_string(i));
    for (int i = 1; i <= n; ++i) csv.field("y" + std::to_string(i));
    csv.field("residual");
    csv.field("iters");
    csv.field("rcond");
    csv.field("status");
    csv.end_row();

    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].ok && !opts.allow_failures) {
            throw Error(rows[r].error, rows[r].message + " (grid row " + std::to_string(r) +
                                           "; use --allow-failures to keep going)");
        }
        for (double v : targets[r].x) csv.field(v);
        for (double v : targets[r].z) csv.field(v);
        if (rows[r].ok) {
            for (double v : rows[r].y) csv.field(v);
            csv.field(rows[r].residual);
            csv.field(rows[r].iters);
            csv.field(rows[r].rcond);
            csv.field("ok");
        } else {
            for (int i = 0; i < n; ++i) csv.field("");
            csv.field("");
            csv.field("");
            csv.field("");
            csv.field(to_string(rows[r].error));
        }
        csv.end_row();
    }
    emit(opts, csv.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckRow {
    std::string name;
    std::string status;  // pass | fail | skipped
    std::string detail;
};

std::vector<diagnostics::Target> default_grid(const ProblemFile& pf, int per_axis) {
    const Vec radii = default_check_radii(pf);
    const Vec center = vec_concat(pf.seed_x(), pf.seed_c);
    const int dim = static_cast<int>(center.size());
    const int p = pf.dims.p();
    std::vector<diagnostics::Target> out;
    std::vector<int> idx(dim, 0);
    for (;;) {
        Vec xz(dim);
        for (int a = 0; a < dim; ++a) {
            const double frac = per_axis == 1 ? 0.0 : -1.0 + 2.0 * idx[a] / (per_axis - 1);
            xz[a] = center[a] + frac * radii[a];
        }
        out.push_back({Vec(xz.begin(), xz.begin() + p), Vec(xz.begin() + p, xz.end())});
        int a = dim - 1;
        while (a >= 0 && ++idx[a] == per_axis) idx[a--] = 0;
        if (a < 0) break;
    }
    return out;
}

int cmd_check(const std::string& problem_ref, bool probe_strong, const GlobalOptions& opts) {
    LoadedProblem lp = load(problem_ref, opts);
    std::vector<CheckRow> rows;
    auto pass_fail = [](bool ok) { return ok ? "pass" : "fail"; };

    const double scales[] = {1e-1, 1e-2, 1e-3, 1e-4};

    if (lp.file.probe_only) {
        if (probe_strong) {
            diagnostics::ProbeReport probe = diagnostics::strong_diff_probe(
                lp.spec, vec_concat(lp.file.seed_x(), lp.file.seed_b), scales, 64);
            rows.push_back({"strong_diff", std::string(to_string(probe.verdict)),
                            "defect(" + format_double(probe.samples.front().scale) +
                                ")=" + format_double(probe.samples.front().defect) + " defect(" +
                                format_double(probe.samples.back().scale) +
                                ")=" + format_double(probe.samples.back().defect)});
        } else {
            rows.push_back({"strong_diff", "skipped", "probe-only map; pass --probe-strong"});
        }
    } else {
        GermEvaluator germ = make_problem_germ(lp);
        const int per_axis = lp.file.dims.total() <= 2 ? 5 : 3;

        {
            const auto grid = default_grid(lp.file, per_axis);
            const double err =
                diagnostics::check_jacobian_formula(germ, grid, 1e-5, opts.jobs);
            rows.push_back({"jacobian_formula", pass_fail(err <= 1e-5),
                            "max_rel_err=" + format_double(err) + " tol=1e-05"});
        }
        {
            diagnostics::UniquenessReport rep =
                diagnostics::uniqueness_probe(germ, germ.seed().a, germ.seed().c, 8, 0.3);
            rows.push_back({"uniqueness",
                            rep.verdict == diagnostics::Verdict::Pass ? "pass" : "fail",
                            "consistent=" + std::to_string(rep.consistent) +
                                " witnesses=" + std::to_string(rep.witnesses.size()) +
                                " nonconverged=" + std::to_string(rep.nonconverged)});
        }
        {
            SeedPoint seed = check_seed(lp.spec, lp.file.seed_x(), lp.file.seed_b, lp.file.seed_c,
                                        lp.cfg.tol_res);
            GermEvaluator inverse = solve_via_route(lp.spec, seed, lp.cfg, RouteKind::InverseLift);
            GermEvaluator implicit =
                solve_via_route(lp.spec, seed, lp.cfg, RouteKind::ImplicitLift);
            double worst_inv = 0.0, worst_imp = 0.0;
            for (const auto& target : default_grid(lp.file, 3)) {
                const Vec y = germ.evaluate(target.x, target.z).y;
                worst_inv = std::max(
                    worst_inv, inf_norm(vec_sub(y, inverse.evaluate(target.x, target.z).y)));
                worst_imp = std::max(
                    worst_imp, inf_norm(vec_sub(y, implicit.evaluate(target.x, target.z).y)));
            }
            rows.push_back({"route_inverse", pass_fail(worst_inv <= 1e-8),
                            "max_diff=" + format_double(worst_inv) + " tol=1e-08"});
            rows.push_back({"route_implicit", pass_fail(worst_imp <= 1e-8),
                            "max_diff=" + format_double(worst_imp) + " tol=1e-08"});
        }
        if (lp.file.dims.q > 0) {
            // FD of the evaluator in the t and z directions; the s
            // coordinates stay fixed (including s = 0 where F need not
            // be differentiable in s).
            const int q = lp.file.dims.q, m = lp.file.dims.m, n = lp.file.dims.n;
            const double h = 5e-4;
            double worst = 0.0;
            Rng rng(kDefaultProbeSeed);
            const Vec radii = default_check_radii(lp.file);
            for (int trial = 0; trial < 11; ++trial) {
                Vec s(q), t(m), z(n);
                for (int i = 0; i < q; ++i)
                    s[i] = trial == 0 ? lp.file.seed_a[i]
                                      : lp.file.seed_a[i] + rng.uniform(-radii[i], radii[i]);
                for (int i = 0; i < m; ++i) t[i] = lp.file.seed_d[i] + rng.uniform(-0.2, 0.2);
                for (int i = 0; i < n; ++i) z[i] = lp.file.seed_c[i] + rng.uniform(-0.2, 0.2);
                Matrix mixed = germ.mixed_jacobian(s, t, z);
                for (int j = 0; j < m + n; ++j) {
                    Vec tp = t, tm = t, zp = z, zm = z;
                    if (j < m) {
                        tp[j] += h;
                        tm[j] -= h;
                    } else {
                        zp[j - m] += h;
                        zm[j - m] -= h;
                    }
                    const Vec y_hi = germ.evaluate(vec_concat(s, tp), zp).y;
                    const Vec y_lo = germ.evaluate(vec_concat(s, tm), zm).y;
                    for (int i = 0; i < n; ++i) {
                        const double fd = (y_hi[i] - y_lo[i]) / (2 * h);
                        worst = std::max(worst, std::abs(mixed(i, j) - fd));
                    }
                }
            }
            rows.push_back({"mixed_formula", pass_fail(worst <= 1e-6),
                            "max_abs_err=" + format_double(worst) + " tol=1e-06"});
        }
        if (auto oracle = build_oracle(lp.file)) {
            double worst = 0.0;
            for (const auto& target : default_grid(lp.file, 3)) {
                worst = std::max(worst, inf_norm(vec_sub(germ.evaluate(target.x, target.z).y,
                                                         oracle(target.x, target.z))));
            }
            rows.push_back({"oracle_agreement", pass_fail(worst <= 1e-9),
                            "max_diff=" + format_double(worst) + " tol=1e-09"});
        }
        if (!lp.file.differentiable_in_s) {
            rows.push_back(
                {"strong_diff", "skipped", "not applicable: F is not differentiable in s"});
        } else if (probe_strong) {
            diagnostics::ProbeReport probe = diagnostics::strong_diff_probe(
                lp.spec, vec_concat(lp.file.seed_x(), lp.file.seed_b), scales, 64);
            rows.push_back({"strong_diff",
                            probe.verdict == diagnostics::Verdict::Pass ? "pass" : "fail",
                            "rule: " + probe.rule});
        } else {
            rows.push_back({"strong_diff", "skipped", "pass --probe-strong to run"});
        }
        {
            const Vec radii = default_check_radii(lp.file);
            double max_radius = 0.0;
            for (double r : radii) max_radius = std::max(max_radius, r);
            diagnostics::DomainEstimate est = diagnostics::estimate_domain(
                germ, 2.0 * max_radius, 4, 8, kDefaultProbeSeed, opts.jobs);
            rows.push_back({"domain_estimate", pass_fail(est.r_xz > 0.0),
                            "r_xz=" + format_double(est.r_xz) +
                                " min_rcond=" + format_double(est.min_rcond) +
                                " failures=" + std::to_string(est.failures.size())});
        }
    }

    bool all_pass = true;
    for (const CheckRow& row : rows) {
        if (row.status == "fail" || row.status == "inconclusive") all_pass = false;
    }

    if (opts.json) {
        JsonWriter w;
        w.begin_object();
        w.key("command").value(std::string_view("check"));
        w.key("problem").value(lp.file.name);
        write_config(w, lp.cfg, opts);
        w.key("checks").begin_array();
        for (const CheckRow& row : rows) {
            w.begin_object();
            w.key("name").value(row.name);
            w.key("status").value(row.status);
            w.key("detail").value(row.detail);
            w.end_object();
        }
        w.end_array();
        w.key("overall").value(std::string_view(all_pass ? "pass" : "fail"));
        w.end_object();
        emit(opts, w.str() + "\n");
    } else {
        std::string text = "check " + lp.file.name + "\n";
        for (const CheckRow& row : rows) {
            text += "  ";
            text += row.name;
            text.append(row.name.size() < 18 ? 18 - row.name.size() : 1, ' ');
            text += row.status;
            text.append(row.status.size() < 8 ? 8 - row.status.size() : 1, ' ');
            text += row.detail;
            text += '\n';
        }
        text += all_pass ? "overall: pass\n" : "overall: fail\n";
        emit(opts, text);
    }
    return all_pass ? kExitOk : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

int cmd_catalog(const std::string& action, const std::string& name, const GlobalOptions& opts) {
    if (action == "list") {
        std::string text;
        for (const std::string& entry : catalog_names()) {
            text += entry;
            text += '\n';
        }
        emit(opts, text);
        return kExitOk;
    }
    if (action == "show") {
        if (name.empty()) {
            throw Error(ErrorKind::ConfigError, "catalog show needs a problem name");
        }
        emit(opts, serialize_problem_file(catalog_entry(name)));
        return kExitOk;
    }
    throw Error(ErrorKind::ConfigError, "catalog action must be 'list' or 'show'");
}

void print_json_error(const Error& e) {
    JsonWriter w;
    w.begin_object();
    w.key("error").begin_object();
    w.key("kind").value(to_string(e.kind()));
    w.key("message").value(std::string_view(e.what()));
    if (e.has_value()) w.key("value").value(e.value());
    if (!e.token().empty()) w.key("token").value(e.token());
    if (e.has_span()) {
        w.key("span").begin_array();
        w.value(static_cast<std::size_t>(e.span_begin()));
        w.value(static_cast<std::size_t>(e.span_end()));
        w.end_array();
    }
    w.end_object();
    w.key("exit_code").value(exit_code_for(e.kind()));
    w.end_object();
    std::fputs((w.str() + "\n").c_str(), stdout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local implicit/inverse function solver"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOptions opts;
    app.add_option("--tol-res", opts.tol_res, "residual tolerance (inf-norm)");
    app.add_option("--rcond-min", opts.rcond_min, "invertibility gate on D_yF");
    app.add_option("--max-iters", opts.max_iters, "Newton iterations per correction");
    app.add_option("--jobs", opts.jobs, "worker threads for grid/scan operations");
    app.add_flag("--json", opts.json, "machine-readable report to stdout");
    app.add_flag("--allow-failures", opts.allow_failures, "keep going on per-row failures");
    app.add_flag("--timings", opts.timings, "include wall-clock timings in reports");
    app.add_option("--out", opts.out_path, "write output to FILE instead of stdout");

    std::string problem_ref, x_text, z_text, box_text, counts_text;
    bool probe_strong = false;
    std::string catalog_action, catalog_name;

    CLI::App* solve = app.add_subcommand("solve", "evaluate y = G(x, z) and its derivative");
    solve->add_option("problem", problem_ref, "problem file path or catalog:NAME")->required();
    solve->add_option("--x", x_text, "x values, comma separated (omit when p = 0)");
    solve->add_option("--z", z_text, "z values, comma separated")->required();

    CLI::App* grid = app.add_subcommand("grid", "evaluate over a grid, CSV output");
    grid->add_option("problem", problem_ref, "problem file path or catalog:NAME")->required();
    grid->add_option("--box", box_text, "lo:hi per (x, z) axis, comma separated");
    grid->add_option("--counts", counts_text, "points per axis (one value or per axis)");

    CLI::App* check = app.add_subcommand("check", "run the diagnostic suite");
    check->add_option("problem", problem_ref, "problem file path or catalog:NAME")->required();
    check->add_flag("--probe-strong", probe_strong, "run the strong-differentiability probe");

    CLI::App* catalog = app.add_subcommand("catalog", "list or show builtin problems");
    catalog->add_option("action", catalog_action, "list | show")->required();
    catalog->add_option("name", catalog_name, "problem name for 'show'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        std::fprintf(stderr, "%s\n", e.what());
        return kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(problem_ref, x_text, z_text, opts);
        if (grid->parsed()) return cmd_grid(problem_ref, box_text, counts_text, opts);
        if (check->parsed()) return cmd_check(problem_ref, probe_strong, opts);
        if (catalog->parsed()) return cmd_catalog(catalog_action, catalog_name, opts);
        return kExitUsage;
    } catch (const Error& e) {
        print_json_error(e);
        std::fprintf(stderr, "error (%s): %s\n", std::string(to_string(e.kind())).c_str(),
                     e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitUsage;
    }
}
