#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcoup/coupling.hpp"
#include "gcoup/grid.hpp"
#include "gcoup/proper_fn.hpp"
#include "gcoup/set_spec.hpp"

namespace gcoup {

// A function known through its values on the retained points of a grid
// (those inside `domain` when one is set). Entries keep the engine status
// that produced them; +inf entries come from divergent searches.
struct SampledFn {
    GridSpec grid;
    std::optional<SetSpec> domain;
    std::vector<long> flat;                  // ascending grid flat indices
    std::vector<std::vector<double>> pts;
    std::vector<ExtReal> values;
    std::vector<OptStatus> statuses;
    std::string name = "fn";

    std::size_t size() const { return flat.size(); }
    // Entry whose point matches coordinatewise within tol.
    std::optional<std::size_t> find_point(std::span<const double> p, double tol = 1e-9) const;
    bool proper() const;  // finite somewhere and never -inf
    ExtReal min_value() const;
    std::optional<std::size_t> argmin_entry() const;  // first entry at the minimum
};

// Pointwise sup of g(., xstar) - f over the first grid, one engine search per
// retained xstar in C. Stores probe values, so widening that stalls below the
// divergence cap still reports the best level it saw.
SampledFn g_conjugate(const ProperFn& f, const Coupling& g, const GridSpec& xgrid,
                      const GridSpec& cgrid, const EngineLimits& lim = EngineLimits::defaults());

// Discrete sup of g(x, .) - fg over the retained entries of fg, evaluated at
// every point of xgrid. No widening: the second slot is exhausted exactly.
SampledFn g_biconjugate(const Coupling& g, const GridSpec& xgrid, const SampledFn& fg,
                        const EngineLimits& lim = EngineLimits::defaults());

// gamma(x, xstar) = f(x) + fg(xstar) on the retained entries, +inf elsewhere.
struct GammaFn {
    ProperFn f;
    SampledFn fg;

    ExtReal at(std::span<const double> x, std::size_t entry) const;
    ExtReal eval(std::span<const double> x, std::span<const double> xstar,
                 double coord_tol = 1e-9) const;
};

GammaFn make_gamma(const ProperFn& f, const SampledFn& fg);

struct MembershipReport {
    bool member = false;
    bool fg_proper = false;
    ExtReal inf_gamma = ExtReal::pos_inf();
    ExtReal inf_f = ExtReal::pos_inf();   // widening-aware, over xgrid
    ExtReal min_fg = ExtReal::pos_inf();  // over retained entries
    std::vector<double> witness_x;        // argmin of f when attained
    std::vector<double> witness_xstar;    // entry reaching min_fg
    std::string detail;
};

// The pair (f, fg) qualifies when fg is proper and inf gamma vanishes within
// tol. The infimum splits into inf f plus min fg, each side exact on its grid.
MembershipReport membership_Ff(const GammaFn& gamma, const GridSpec& xgrid, double tol,
                               const EngineLimits& lim = EngineLimits::defaults());

struct DualityReport {
    ExtReal inf_f = ExtReal::pos_inf();
    ExtReal inf_fgg = ExtReal::pos_inf();
    std::optional<std::vector<double>> argmin_f;
    std::optional<std::vector<double>> argmin_fgg;
    double identity_gap = 0.0;  // |inf f - inf fgg| (inf on class mismatch)
    bool identity_ok = false;
    bool transfer_ok = false;  // fgg is minimal at the argmin of f
    std::string detail;
};

DualityReport duality_report(const ProperFn& f, const SampledFn& fgg, double tol,
                             const EngineLimits& lim = EngineLimits::defaults());

struct DualAttainment {
    bool attained = false;
    ExtReal dual_value = ExtReal::pos_inf();
    std::vector<double> xstar;  // smallest-norm argmin entry, ties to lowest index
    bool improved_when_widened = false;
    std::string detail;
};

// Minimises fg over its entries and re-derives the conjugate on a doubled
// second-slot box; a strictly lower minimum there marks the dual value as not
// attained on the original window.
DualAttainment dual_attainment(const ProperFn& f, const Coupling& g, const GridSpec& xgrid,
                               const SampledFn& fg, double tol,
                               const EngineLimits& lim = EngineLimits::defaults());

struct ClosureStep {
    double sup_diff = 0.0;      // over entries where both conjugates are finite
    bool pattern_match = true;  // finiteness classes agree entrywise
    bool member = false;
};

struct ClosureReport {
    std::vector<ClosureStep> steps;
    double limit_sup_diff = 0.0;
    bool decreasing = true;
    bool pattern_converges = true;
};

// Conjugates of an approximating sequence (f_k, g_k) against the conjugate of
// the limit pair, all sampled on the same grids.
ClosureReport closure_experiment(const std::vector<ProperFn>& fs, const std::vector<Coupling>& gs,
                                 const ProperFn& f, const Coupling& g, const GridSpec& xgrid,
                                 const GridSpec& cgrid, double tol,
                                 const EngineLimits& lim = EngineLimits::defaults());

}  // namespace gcoup
