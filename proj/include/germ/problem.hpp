#pragma once

#include <functional>
#include <optional>

#include "germ/expr.hpp"
#include "germ/model.hpp"
#include "germ/solver.hpp"

namespace germ {

/// Per-problem solver-config overrides; unset fields fall back to the
/// caller's configuration.
struct SolverOverrides {
    std::optional<double> tol_res;
    std::optional<double> rcond_min;
    std::optional<int> max_iters;
    std::optional<double> min_step;
    std::optional<double> fd_step;

    bool operator==(const SolverOverrides&) const = default;
};

/// Parsed problem file: dims, variable names, the coordinate expressions
/// F_1..F_n, the seed, and optional oracle/check metadata. Files
/// round-trip losslessly through parse/serialize.
struct ProblemFile {
    std::string name;
    Dims dims;
    std::vector<std::string> var_names;    // p+n names, s-block then t-block then y-block
    std::vector<std::string> expressions;  // n entries
    Vec seed_a;  // q values
    Vec seed_d;  // m values
    Vec seed_b;  // n values
    Vec seed_c;  // n values
    int smoothness = kSmoothnessInf;
    bool differentiable_in_s = true;
    bool probe_only = false;  // hypothesis-probe map, not solvable for a germ
    SolverOverrides solver;
    std::vector<std::string> oracle_expressions;  // empty or n entries, over x-names and z1..zn
    Vec check_radii;  // empty, or p+n per-axis radii for default diagnostic grids

    Vec seed_x() const { return vec_concat(seed_a, seed_d); }

    bool operator==(const ProblemFile&) const = default;
};

ProblemFile parse_problem_file(std::string_view text);
std::string serialize_problem_file(const ProblemFile& problem);

/// Load `catalog:NAME` or a filesystem path.
ProblemFile load_problem(const std::string& reference);

/// Compile the expressions into an evaluatable FunctionSpec.
FunctionSpec build_spec(const ProblemFile& problem);

/// Closed-form oracle (x, z) → y when the file carries one.
std::function<Vec(const Vec&, const Vec&)> build_oracle(const ProblemFile& problem);

/// Base configuration with the file's overrides applied.
SolverConfig apply_overrides(const SolverOverrides& overrides, SolverConfig base);

/// Per-axis radii for default diagnostic grids around (a, c): the file's
/// check_radii, or 0.1 everywhere.
Vec default_check_radii(const ProblemFile& problem);

// Builtin catalog: circle, exp, affine, poly2x2, mixed-abs, sindiff.
std::vector<std::string> catalog_names();
const ProblemFile& catalog_entry(const std::string& name);

}  // namespace germ
