#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcoup/grid.hpp"
#include "gcoup/proper_fn.hpp"
#include "gcoup/set_spec.hpp"

namespace gcoup {

// Two-slot coupling g(x, xstar) with an explicit closed set C in the second
// slot. eval() pins the defining branch structure: any xstar outside C maps
// to +inf, so the off-C branch is exact by construction and validation only
// has to probe finiteness and nonnegativity on C.
struct Coupling {
    int n = 1;
    int m = 1;
    std::function<ExtReal(std::span<const double>, std::span<const double>)> raw;
    SetSpec C = SetSpec::make_full(1);
    std::string name = "g";

    ExtReal eval(std::span<const double> x, std::span<const double> xstar) const;
};

struct BuiltinArgs {
    int n = 0;  // 0 picks the builtin's default
    int m = 0;
    std::optional<SetSpec> K;        // cone_inner, ik_shifted
    std::optional<ProperFn> dom_of;  // norm_on_dom gates on this objective's domain
};

// Catalog names: exp, square_product, reciprocal, norm_on_dom, max_dot,
// min_dot, lagrangian_g1, cone_inner, ik_shifted.
Coupling builtin_coupling(const std::string& name, const BuiltinArgs& args = {});
const std::vector<std::pair<std::string, std::string>>& builtin_catalog();

struct CouplingValidation {
    bool d1_ok = false;
    std::string d1_detail;
    bool d2_ok = false;
    double d2_inf = 0.0;
    std::string d2_detail;
    bool nonneg_ok = false;
    std::string nonneg_detail;
    bool d3_c_convex = true;  // every representable set kind is convex
    bool d3_convex_ok = false;
    std::string d3_detail;
    std::string d3_lsc = "untested";  // not certifiable from point samples
    long pairs_checked = 0;

    bool ok() const { return d1_ok && d2_ok && nonneg_ok; }
};

// D1: finite exactly on C at sampled pairs (off-C probes included). D2: the
// infimum over the joint grid is 0 within tol, widening-aware. D3: midpoint
// convexity of g(x, .) on random segments in C; l.s.c. stays "untested".
CouplingValidation validate_coupling(const Coupling& g, const GridSpec& xgrid,
                                     const GridSpec& cgrid, double tol, int segments = 200,
                                     std::uint64_t seed = 0,
                                     const EngineLimits& lim = EngineLimits::defaults());

struct StarReport {
    bool homogeneous_x = true;
    bool homogeneous_star = true;
    bool increasing_x = true;
    bool increasing_star = true;
    std::string counterexample;  // first failure seen
    int samples = 0;
    bool all_ok() const {
        return homogeneous_x && homogeneous_star && increasing_x && increasing_star;
    }
};

// Positive homogeneity and componentwise monotonicity in each slot, sampled
// on the nonnegative orthant. Needs n == m.
StarReport check_star_properties(const Coupling& g, int samples = 200, double tol = 1e-6,
                                 std::uint64_t seed = 0);

struct PseudoMonotoneReport {
    bool pseudo_monotone = false;
    double max_on_CxC = 0.0;
    std::optional<std::pair<std::vector<double>, std::vector<double>>> violating_pair;
    int pairs = 0;
};

// g(x,y) >= 0 must force g(y,x) <= 0 at every sampled pair of C x C. Since
// couplings are nonnegative, a pseudo-monotone verdict also certifies that g
// vanishes on all sampled pairs.
PseudoMonotoneReport pseudo_monotone_scan(const Coupling& g, int samples = 500, double tol = 1e-6,
                                          std::uint64_t seed = 0, double radius = 5.0);

}  // namespace gcoup
