#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcoup/conjugate.hpp"
#include "gcoup/coupling.hpp"
#include "gcoup/expr.hpp"
#include "gcoup/grid.hpp"
#include "gcoup/proper_fn.hpp"

namespace gcoup {

// Embedding phi(x, u) of an objective into a family tilted by u, with
// phi(x, 0) equal to the objective. Variables are x1..xn then u1..up.
struct PerturbationScheme {
    ExprFn phi;
    int n = 1;
    int p = 1;
    std::string name = "scheme";
};

struct PerturbationReport {
    bool consistent = false;  // phi(., 0) reproduces f on the grid
    double consistency_gap = 0.0;
    ExtReal alpha = ExtReal::pos_inf();       // value function at u = 0
    ExtReal beta = ExtReal::pos_inf();        // smallest conjugate value over the u* grid
    ExtReal beta_cross = ExtReal::pos_inf();  // same thing through the joint conjugate at 0
    bool weak_duality_ok = false;             // -beta <= alpha
    ExtReal gap = ExtReal::pos_inf();         // alpha + beta, +inf dominant
    bool gap_nonneg = false;
    bool hstar_matches_joint = false;  // h*(u*) vs the joint conjugate at (0, u*)
    double hstar_gap = 0.0;            // largest finite-branch difference
    bool beta_cross_ok = false;
    std::string detail;
};

// Value-function route: h(u) = inf_x phi(x, u) through a nested, memoized
// engine (widening included), h* from it, and the joint conjugate of phi at
// first slot 0 as the independent route. Joint searches run on a fixed 61
// points-per-dim grid over xgrid.box x ugrid.box.
PerturbationReport perturbation_report(const PerturbationScheme& scheme, const ProperFn& f,
                                       const GridSpec& xgrid, const GridSpec& ugrid,
                                       const GridSpec& ustar_grid, double tol,
                                       const EngineLimits& lim = EngineLimits::defaults());

// min f(x) subject to h_i(x) <= 0, all over x1..xn.
struct ConstrainedProblem {
    ExprFn f;
    std::vector<ExprFn> h;
    int n = 1;
    std::string name = "problem";
};

struct LagrangianReport {
    ExtReal primal = ExtReal::pos_inf();
    std::optional<std::vector<double>> primal_arg;
    ExtReal dual = ExtReal::neg_inf();  // largest of -fbar_conj over the multiplier grid
    std::vector<double> dual_arg;
    ExtReal gap = ExtReal::pos_inf();
    double engine_vs_direct = 0.0;  // should be exactly 0: same floats both routes
    SampledFn fbar_conj;            // per-multiplier table
    std::string detail;
};

// The indicator-extended objective conjugated against <lambda*, -h(x)> gated
// on feasibility. The direct route reuses the same arithmetic, so the
// agreement column is a bit-for-bit check of the engine plumbing.
LagrangianReport lagrangian_dual_report(const ConstrainedProblem& prob, const GridSpec& xgrid,
                                        const GridSpec& lgrid, double tol,
                                        const EngineLimits& lim = EngineLimits::defaults());

struct ClassicRecoveryReport {
    double max_diff = 0.0;        // conjugate-vs-table, finite branches
    bool pattern_match = false;   // finiteness classes agree entrywise
    bool recovered = false;       // max_diff <= tol and pattern_match
    bool member = false;          // membership of f with the induced coupling
    bool no_gap = false;          // inf f == -table(0)
    bool member_iff_no_gap = false;
    std::string detail;
};

// Builds the coupling f(x) + t(x*) from the sampled classic conjugate table
// t, whose own conjugate must reproduce t; membership then mirrors the
// classic absence of a duality gap.
ClassicRecoveryReport classic_recovery_check(const ProperFn& f, const GridSpec& xgrid,
                                             const GridSpec& cgrid, double tol,
                                             const EngineLimits& lim = EngineLimits::defaults());

}  // namespace gcoup
