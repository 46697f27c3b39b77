#include "germ/diagnostics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <optional>

#include "germ/parallel.hpp"

namespace germ::diagnostics {

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

std::string format_target(const Target& t) {
    std::string out = "x=(";
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(t.x[i]);
    }
    out += "), z=(";
    for (std::size_t i = 0; i < t.z.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(t.z[i]);
    }
    out += ")";
    return out;
}

/// Direction with ∞-norm exactly 1, redrawing degenerate samples.
Vec unit_inf_direction(Rng& rng, int dim) {
    for (;;) {
        Vec dir(dim);
        double max_abs = 0.0;
        for (int i = 0; i < dim; ++i) {
            dir[i] = rng.uniform(-1.0, 1.0);
            max_abs = std::max(max_abs, std::abs(dir[i]));
        }
        if (max_abs < 1e-3) continue;
        for (int i = 0; i < dim; ++i) dir[i] /= max_abs;
        return dir;
    }
}

}  // namespace

double check_jacobian_formula(const GermEvaluator& germ, std::span<const Target> grid,
                              double fd_step, int jobs) {
    const int p = germ.spec().dims.p();
    const int n = germ.spec().dims.n;
    const int count = static_cast<int>(grid.size());
    const std::vector<Waypoint> snap = germ.snapshot();

    std::vector<double> errs(count, 0.0);
    std::vector<std::optional<Error>> failures(count);

    for_each_index(count, jobs, [&](int idx) {
        const Target& t = grid[idx];
        try {
            const Matrix formula = germ.jacobian_isolated(snap, t.x, t.z);
            const Vec xz = vec_concat(t.x, t.z);
            double worst = 0.0;
            for (int j = 0; j < p + n; ++j) {
                const double h = fd_step * std::max(1.0, std::abs(xz[j]));
                Vec lo = xz, hi = xz;
                hi[j] += h;
                lo[j] -= h;
                const Vec y_hi = germ.evaluate_isolated(snap, Vec(hi.begin(), hi.begin() + p),
                                                        Vec(hi.begin() + p, hi.end()))
                                     .y;
                const Vec y_lo = germ.evaluate_isolated(snap, Vec(lo.begin(), lo.begin() + p),
                                                        Vec(lo.begin() + p, lo.end()))
                                     .y;
                const double inv_2h = 1.0 / (2.0 * h);
                for (int i = 0; i < n; ++i) {
                    const double fd = (y_hi[i] - y_lo[i]) * inv_2h;
                    const double entry = formula(i, j);
                    const double rel = std::abs(entry - fd) / (1.0 + std::abs(entry));
                    worst = std::max(worst, rel);
                }
            }
            errs[idx] = worst;
        } catch (const Error& e) {
            failures[idx] = e;
        } catch (const std::exception& e) {
            failures[idx] = Error(ErrorKind::InternalError, e.what());
        }
    });

    for (int i = 0; i < count; ++i) {
        if (failures[i]) {
            throw Error(failures[i]->kind(),
                        std::string(failures[i]->what()) + " (at grid target " +
                            std::to_string(i) + ": " + format_target(grid[i]) + ")");
        }
    }
    double max_err = 0.0;
    for (double e : errs) max_err = std::max(max_err, e);
    return max_err;
}

UniquenessReport uniqueness_probe(const GermEvaluator& germ, const Vec& x, const Vec& z,
                                  int n_starts, double radius, std::uint64_t seed) {
    if (n_starts < 1 || radius <= 0.0) {
        throw Error(ErrorKind::ConfigError, "uniqueness_probe needs n_starts >= 1, radius > 0");
    }
    constexpr double kConsistentDist = 1e-8;

    UniquenessReport report;
    report.y_star = germ.evaluate(x, z).y;
    const int n = germ.spec().dims.n;

    Rng rng(seed);
    for (int s = 0; s < n_starts; ++s) {
        Vec start(n);
        for (int i = 0; i < n; ++i) start[i] = report.y_star[i] + rng.uniform(-radius, radius);
        try {
            NewtonResult corrected = newton_correct(germ.spec(), x, z, start, germ.config());
            const double dist = inf_norm(vec_sub(corrected.y, report.y_star));
            if (dist <= kConsistentDist) {
                ++report.consistent;
            } else {
                report.witnesses.push_back({start, corrected.y, dist});
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SingularJacobian && e.kind() != ErrorKind::NoConvergence &&
                e.kind() != ErrorKind::DomainError) {
                throw;
            }
            ++report.nonconverged;
        }
    }

    if (!report.witnesses.empty()) {
        report.verdict = Verdict::Inconclusive;  // ball exceeded V; not a theorem failure
    } else if (report.consistent > 0) {
        report.verdict = Verdict::Pass;
    } else {
        report.verdict = Verdict::Inconclusive;
    }
    return report;
}

ScanResult singularity_scan(const FunctionSpec& spec, const Box& region, int grid_per_axis,
                            int jobs) {
    spec.dims.validate();
    const int dim = spec.dims.total();
    if (static_cast<int>(region.lo.size()) != dim || static_cast<int>(region.hi.size()) != dim) {
        throw Error(ErrorKind::DimensionMismatch, "scan box does not match p+n coordinates");
    }
    if (grid_per_axis < 2) {
        throw Error(ErrorKind::ConfigError, "singularity_scan needs grid_per_axis >= 2");
    }

    long long total_ll = 1;
    for (int a = 0; a < dim; ++a) total_ll *= grid_per_axis;
    if (total_ll > 50'000'000) {
        throw Error(ErrorKind::ConfigError, "scan grid too large");
    }
    const int total = static_cast<int>(total_ll);

    auto point_at = [&](int flat) {
        Vec point(dim);
        int rem = flat;
        for (int a = dim - 1; a >= 0; --a) {
            const int i = rem % grid_per_axis;
            rem /= grid_per_axis;
            const double lo = region.lo[a], hi = region.hi[a];
            point[a] = (i == grid_per_axis - 1)
                           ? hi
                           : lo + static_cast<double>(i) * (hi - lo) / (grid_per_axis - 1);
        }
        return point;
    };

    struct Slot {
        double rcond = 0.0;
        double abs_det = 0.0;
        bool ok = false;
        ErrorKind kind = ErrorKind::DomainError;
    };
    std::vector<Slot> slots(total);

    // Grid points are cheap; hand out whole blocks so scheduling
    // overhead stays amortized.
    constexpr int kBlock = 1024;
    const int blocks = (total + kBlock - 1) / kBlock;
    for_each_index(blocks, jobs, [&](int blk) {
        const int lo = blk * kBlock;
        const int hi = std::min(total, lo + kBlock);
        for (int idx = lo; idx < hi; ++idx) {
            const Vec point = point_at(idx);
            try {
                BlockJacobian jac = jacobian_of(spec, point);
                slots[idx].rcond = jac.d_y_rcond();
                slots[idx].abs_det = std::abs(jac.d_y_det());
                slots[idx].ok = true;
            } catch (const Error& e) {
                slots[idx].kind = e.kind();
            } catch (const std::exception&) {
                slots[idx].kind = ErrorKind::InternalError;
            }
        }
    });

    ScanResult result;
    result.min_rcond = std::numeric_limits<double>::quiet_NaN();
    result.min_abs_det = std::numeric_limits<double>::quiet_NaN();
    int argmin = -1;
    for (int idx = 0; idx < total; ++idx) {
        if (!slots[idx].ok) {
            result.failures.push_back({point_at(idx), slots[idx].kind});
            continue;
        }
        ++result.evaluated;
        if (std::isnan(result.min_rcond) || slots[idx].rcond < result.min_rcond) {
            result.min_rcond = slots[idx].rcond;
        }
        if (argmin < 0 || slots[idx].abs_det < result.min_abs_det) {
            result.min_abs_det = slots[idx].abs_det;
            argmin = idx;
        }
    }
    if (argmin >= 0) result.argmin_point = point_at(argmin);
    return result;
}

ProbeReport strong_diff_probe(const FunctionSpec& spec, const Vec& point,
                              std::span<const double> scales, int pairs_per_scale,
                              std::uint64_t seed) {
    spec.dims.validate();
    const int dim = spec.dims.total();
    if (static_cast<int>(point.size()) != dim) {
        throw Error(ErrorKind::DimensionMismatch, "probe point length does not match p+n");
    }
    if (scales.empty() || pairs_per_scale < 1) {
        throw Error(ErrorKind::ConfigError, "strong_diff_probe needs scales and pairs");
    }
    for (std::size_t k = 0; k < scales.size(); ++k) {
        if (!(scales[k] > 0.0) || (k > 0 && !(scales[k] < scales[k - 1]))) {
            throw Error(ErrorKind::ConfigError, "scales must be positive and strictly decreasing");
        }
    }

    const Matrix reference = fd_jacobian(spec, point).full();
    const double ref_norm = inf_norm(reference);

    // The reference derivative is itself a finite-difference estimate;
    // its per-entry rounding error eps·scale/(2h) enters every defect
    // quotient regardless of pair separation. Measure against that
    // floor so exactly linear maps read as zero.
    double value_scale = 0.0;
    try {
        const double f_norm = inf_norm(eval_f(spec, point));
        if (std::isfinite(f_norm)) value_scale = f_norm;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DomainError) throw;
    }
    const double jac_floor = 8.0 * dim * DBL_EPSILON *
                             (value_scale + ref_norm * (inf_norm(point) + 1.0)) / 1e-6;

    ProbeReport report;
    report.statistic = "strong-differentiability defect";
    report.rule =
        "pass: defects at rounding level or shrinking at ratio <= 0.7 per decade; "
        "fail: last defect >= 0.5 * first";

    Rng rng(seed);
    for (double r : scales) {
        double defect = 0.0;
        for (int k = 0; k < pairs_per_scale; ++k) {
            bool measured = false;
            for (int attempt = 0; attempt < 16 && !measured; ++attempt) {
                Vec u(dim);
                for (int i = 0; i < dim; ++i) u[i] = point[i] + rng.uniform(-r / 2, r / 2);
                const Vec dir = unit_inf_direction(rng, dim);
                const double sep = (r / 2) * std::pow(10.0, rng.uniform(-6.0, 0.0));
                Vec v(dim);
                for (int i = 0; i < dim; ++i) v[i] = u[i] + sep * dir[i];

                Vec diff(dim);
                double d = 0.0;
                for (int i = 0; i < dim; ++i) {
                    diff[i] = u[i] - v[i];
                    d = std::max(d, std::abs(diff[i]));
                }
                if (d < 1e-15 * r || d < DBL_MIN) {
                    ++report.resampled;
                    continue;
                }
                Vec fu, fv;
                try {
                    fu = eval_f(spec, u);
                    fv = eval_f(spec, v);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::DomainError) throw;
                    ++report.resampled;
                    continue;
                }
                const Vec predicted = matvec(reference, diff);
                double raw = 0.0;
                for (int i = 0; i < spec.dims.n; ++i) {
                    raw = std::max(raw, std::abs(fu[i] - fv[i] - predicted[i]));
                }
                if (!std::isfinite(raw)) {
                    ++report.resampled;
                    continue;
                }
                // Subtract a rounding bound so exact linearity reads as 0.
                // Term magnitudes inside F scale like ‖DF‖·‖point‖, not
                // |F| itself (cancellation), hence the u, v terms.
                const double noise =
                    64.0 * DBL_EPSILON *
                    (inf_norm(fu) + inf_norm(fv) + ref_norm * (inf_norm(u) + inf_norm(v) + d));
                defect = std::max(defect, std::max((raw - noise) / d - jac_floor, 0.0));
                measured = true;
            }
            if (!measured) {
                throw Error(ErrorKind::DegenerateSample,
                            "could not draw a usable sample pair at scale " + std::to_string(r));
            }
        }
        report.samples.push_back({r, defect});
    }

    const double tiny = 1e-11 * (1.0 + ref_norm);
    bool all_tiny = true;
    for (const ProbeSample& s : report.samples) {
        if (s.defect > tiny) all_tiny = false;
    }
    bool shrinking = true;
    for (std::size_t k = 0; k + 1 < report.samples.size(); ++k) {
        const double d0 = report.samples[k].defect;
        const double d1 = report.samples[k + 1].defect;
        const double decades = std::log10(report.samples[k].scale / report.samples[k + 1].scale);
        const double allowed = std::pow(0.7, decades);
        if (d1 <= tiny) continue;  // reached rounding level; still shrinking
        if (d0 <= tiny || d1 > allowed * d0) {
            shrinking = false;
            break;
        }
    }
    const double first = report.samples.front().defect;
    const double last = report.samples.back().defect;
    if (all_tiny || shrinking) {
        report.verdict = Verdict::Pass;
    } else if (last >= 0.5 * first && first > tiny) {
        report.verdict = Verdict::Fail;
    } else {
        report.verdict = Verdict::Inconclusive;
    }
    return report;
}

DomainEstimate estimate_domain(const GermEvaluator& germ, double max_radius, int rings,
                               int targets_per_ring, std::uint64_t seed, int jobs) {
    if (rings < 1 || targets_per_ring < 1 || !(max_radius > 0.0)) {
        throw Error(ErrorKind::ConfigError,
                    "estimate_domain needs rings >= 1, targets >= 1, max_radius > 0");
    }
    const int p = germ.spec().dims.p();
    const int n = germ.spec().dims.n;
    const Vec center = vec_concat(germ.seed().a, germ.seed().c);
    const int dim = p + n;

    struct Probe {
        int ring;
        Vec xz;
    };
    std::vector<Probe> probes;
    probes.reserve(static_cast<std::size_t>(rings) * targets_per_ring);
    Rng rng(seed);
    for (int k = 1; k <= rings; ++k) {
        const double rho = max_radius * k / rings;
        for (int j = 0; j < targets_per_ring; ++j) {
            const Vec dir = unit_inf_direction(rng, dim);
            Vec xz(dim);
            for (int i = 0; i < dim; ++i) xz[i] = center[i] + rho * dir[i];
            probes.push_back({k, std::move(xz)});
        }
    }

    const std::vector<Waypoint> snap = germ.snapshot();
    struct Slot {
        bool ok = false;
        double rcond = 1.0;
        ErrorKind kind = ErrorKind::NoConvergence;
        std::string message;
    };
    const int count = static_cast<int>(probes.size());
    std::vector<Slot> slots(count);

    for_each_index(count, jobs, [&](int idx) {
        const Vec& xz = probes[idx].xz;
        const Vec x(xz.begin(), xz.begin() + p);
        const Vec z(xz.begin() + p, xz.end());
        try {
            EvalResult res = germ.evaluate_isolated(snap, x, z);
            slots[idx].ok = true;
            slots[idx].rcond = res.trace.final_rcond;
        } catch (const Error& e) {
            slots[idx].kind = e.kind();
            slots[idx].message = e.what();
        } catch (const std::exception& e) {
            slots[idx].kind = ErrorKind::InternalError;
            slots[idx].message = e.what();
        }
    });

    DomainEstimate estimate;
    estimate.probed = count;
    std::vector<bool> ring_clean(static_cast<std::size_t>(rings) + 1, true);
    for (int idx = 0; idx < count; ++idx) {
        if (slots[idx].ok) {
            estimate.min_rcond = std::min(estimate.min_rcond, slots[idx].rcond);
        } else {
            ring_clean[probes[idx].ring] = false;
            estimate.failures.push_back(
                {probes[idx].ring, probes[idx].xz, slots[idx].kind, slots[idx].message});
        }
    }
    for (int k = 1; k <= rings; ++k) {
        if (ring_clean[k]) estimate.r_xz = std::max(estimate.r_xz, max_radius * k / rings);
    }
    return estimate;
}

}  // namespace germ::diagnostics
