#pragma once

#include "germ/solver.hpp"

namespace germ {

/// A problem transformed for one of the two reduction routes, with the
/// index bookkeeping between the original and lifted variable layouts.
struct LiftedSpec {
    FunctionSpec spec;
    RouteKind route = RouteKind::None;
    Dims original;

    // Inverse route: the lifted map is a self-map of ℝ^(p+n) with p' = 0;
    // its y-layout is [original x | original y] and its target layout is
    // [original x | original z].
    // Implicit route: the lifted x-layout is [original x | original z]
    // (z joins the t-block) and y is unchanged; the target is 0.

    /// Where the original x sits inside the lifted y-block (inverse
    /// route) or x-block (implicit route).
    int x_offset = 0;
    /// Where the original y (inverse route) or z (implicit route) begins.
    int second_offset = 0;
};

/// F̃(x, y) = (x, F(x, y)): the self-map whose inverse packages H and G.
/// Jacobian structure: [[I_p, 0], [D_xF, D_yF]].
LiftedSpec lift_to_inverse(const FunctionSpec& spec);

/// F̃(x, z, y) = F(x, y) − z, with the z-variables adjoined to the
/// differentiable parameter block. Solving F̃ = 0 for y recovers G.
LiftedSpec lift_to_implicit(const FunctionSpec& spec);

/// Build a germ through one of the two reductions. The result has the
/// same external contract as make_germ on (spec, seed); internally it
/// delegates to a germ of the lifted problem.
GermEvaluator solve_via_route(const FunctionSpec& spec, const SeedPoint& seed,
                              const SolverConfig& cfg, RouteKind route);

/// Treat G itself as the map of a new germ problem: returns H with
/// G(x, H(x, y)) = y near (a, b), seeded at (a, c-swapped-with-b). H
/// agrees with F near the seed. G is differentiated numerically, so the
/// inner germ's solver failures surface as DomainError of the new map.
GermEvaluator invert_germ(const GermEvaluator& germ);

}  // namespace germ
