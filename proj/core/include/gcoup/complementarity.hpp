#pragma once

#include <span>
#include <string>
#include <vector>

#include "gcoup/extreal.hpp"
#include "gcoup/grid.hpp"
#include "gcoup/set_spec.hpp"

namespace gcoup {

struct AffineMap {
    std::vector<std::vector<double>> M;
    std::vector<double> q;

    int dim() const { return static_cast<int>(q.size()); }
    std::vector<double> apply(std::span<const double> x) const;
    void validate() const;  // throws on ragged or mismatched shapes
};

// Find x in K with T(x) in the dual cone of K and <T(x), x> = 0.
struct CPInstance {
    SetSpec K = SetSpec::make_orthant(1);
    AffineMap T;
    std::string name = "cp";
};

struct CPCheck {
    bool in_K = false;
    bool dual_feasible = false;
    bool complementary = false;
    bool solves = false;
    double product = 0.0;  // <T(x), x>
};

CPCheck cp_check(const CPInstance& inst, std::span<const double> x, double tol = 1e-9);

// Support enumeration for K = nonnegative orthant. Subsets are visited by
// cardinality, then lexicographically; singular principal blocks are skipped.
struct LCPResult {
    bool found = false;
    std::vector<double> x;
    std::vector<int> support;
    std::size_t subsets_tested = 0;
    std::size_t solutions = 0;
    std::string detail;
};

LCPResult lcp_enumerate(const CPInstance& inst, double tol = 1e-9);

// Value the pairing-with-K conjugate of <T(x), . - x> takes in closed form:
// <T(x), x> where T(x) - xstar supports K from below, +inf elsewhere.
ExtReal cp_dual_closed_form(const CPInstance& inst, std::span<const double> x,
                            std::span<const double> xstar);

// Engine route against the closed form on seeded lattice pairs, plus the
// induced feasibility and solution classifications.
struct CPEquivalenceReport {
    int pairs_checked = 0;
    double max_diff = 0.0;
    bool pattern_match = false;   // finite/infinite agreement on every pair
    bool domain_match = false;    // conjugate finite at 0 iff T(x) dual-feasible
    bool classification_ok = false;  // min conjugate ~ 0 iff x solves
    std::size_t solutions_seen = 0;
    std::string detail;
};

CPEquivalenceReport cp_zdgp_equivalence(const CPInstance& inst, const GridSpec& ygrid,
                                        const GridSpec& cgrid,
                                        const std::vector<std::vector<double>>& classify,
                                        int pairs = 100, double tol = 1e-6,
                                        const EngineLimits& lim = EngineLimits::defaults());

}  // namespace gcoup
