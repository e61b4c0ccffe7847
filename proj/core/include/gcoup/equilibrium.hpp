#pragma once

#include <span>
#include <string>
#include <vector>

#include "gcoup/conjugate.hpp"
#include "gcoup/coupling.hpp"
#include "gcoup/expr.hpp"
#include "gcoup/grid.hpp"
#include "gcoup/proper_fn.hpp"
#include "gcoup/set_spec.hpp"

namespace gcoup {

// Bifunction problem: find x in K with f(x, y) >= 0 for every y in K.
// f takes variables x1..xn, y1..yn.
struct EPInstance {
    SetSpec K = SetSpec::make_full(1);
    ExprFn f;
    int n = 1;
    std::string name = "ep";
};

struct EPValidation {
    bool diagonal_ok = false;        // f(x, x) = 0 on K
    double diagonal_max = 0.0;
    bool y_convex_ok = true;         // sampled midpoint test, advisory only
    int segments = 0;
    std::string detail;
};

EPValidation validate_ep(const EPInstance& inst, const GridSpec& kgrid, double tol,
                         int segments = 200, unsigned seed = 0);

// inf over y in K of f(x, y); divergent searches report -inf. Throws if x is
// outside K.
ExtReal ep_residual(const EPInstance& inst, std::span<const double> x, const GridSpec& ygrid,
                    const EngineLimits& lim = EngineLimits::defaults());

// Negated residual: zero at solutions, positive elsewhere.
ExtReal ep_gap(const EPInstance& inst, std::span<const double> x, const GridSpec& ygrid,
               const EngineLimits& lim = EngineLimits::defaults());

// inf over y in K of <y, xstar>, with dual-cone membership read off its sign.
struct IkResult {
    ExtReal ik{0.0};
    bool in_Kstar = false;
    bool closed_form = false;
};

IkResult ik_and_Kstar(const SetSpec& K, std::span<const double> xstar, const GridSpec& kgrid,
                      const EngineLimits& lim = EngineLimits::defaults());

// Per-point check that the conjugate dual closes the gap: the residual at x
// plus the smallest conjugate value over the dual window vanishes. Runs two
// coupling routes (plain pairing on K, and the pairing shifted by its own
// infimum) and cross-checks the shifted route against the classic conjugate.
struct ZdgpRow {
    std::vector<double> x;
    ExtReal residual{0.0};
    ExtReal min_fg_inner{0.0};
    ExtReal min_fg_shifted{0.0};
    double zdgp_inner = 0.0;    // |residual + min_fg_inner|
    double zdgp_shifted = 0.0;
    bool ok_inner = false;
    bool ok_shifted = false;
    double shift_identity_gap = 0.0;  // fg_shifted + ik vs classic conjugate
    double fenchel_floor = 0.0;       // min over the window of classic - ik
};

struct ZdgpReport {
    std::vector<ZdgpRow> rows;
    bool all_ok = false;
    double worst_zdgp = 0.0;
    double worst_shift = 0.0;
    bool fenchel_ok = false;  // fenchel_floor >= -tol on every row
    std::string detail;
};

ZdgpReport zdgp_check(const EPInstance& inst, const std::vector<std::vector<double>>& xs,
                      const GridSpec& ygrid, const GridSpec& cgrid, double tol,
                      const EngineLimits& lim = EngineLimits::defaults());

// Scans the dual-cone window in ascending grid order for a multiplier whose
// classic conjugate of f(xbar, .) + K-indicator touches the pairing floor.
// Such a point certifies xbar solves the problem.
struct CertificateResult {
    bool found = false;
    std::vector<double> xstar;
    double diff = 0.0;
    std::size_t matches = 0;  // grid points within tolerance
    std::size_t scanned = 0;
    std::string detail;
};

CertificateResult ep_solution_certificate(const EPInstance& inst, std::span<const double> xbar,
                                          const GridSpec& ygrid, const GridSpec& cgrid,
                                          double tol,
                                          const EngineLimits& lim = EngineLimits::defaults());

// Variational inequality with affine operator F(x) = M x + q over K, exposed
// through the bifunction <F(x), y - x>.
struct VIPInstance {
    SetSpec K = SetSpec::make_full(1);
    std::vector<std::vector<double>> M;
    std::vector<double> q;
    int n = 1;
    std::string name = "vip";
};

EPInstance vip_as_ep(const VIPInstance& inst);

ExtReal vip_gap(const VIPInstance& inst, std::span<const double> x, const GridSpec& ygrid,
                const EngineLimits& lim = EngineLimits::defaults());

struct MonotonicityReport {
    bool monotone = false;
    double min_quad = 0.0;  // smallest sampled z' M z with |z| = 1
    int samples = 0;
    std::string detail;
};

MonotonicityReport vip_monotone_scan(const VIPInstance& inst, int samples = 200,
                                     unsigned seed = 0, double tol = 1e-9);

// Mixed form: f(x, y) = sum_i F_i(x) eta_i(x, y) + h(y) - h(x). Each F_i
// takes x1..xn, each eta_i takes x1..xn, y1..yn.
struct EPVIPInstance {
    SetSpec K = SetSpec::make_full(1);
    std::vector<ExprFn> F;
    std::vector<ExprFn> eta;
    ProperFn h;
    int n = 1;
    std::string name = "epvip";
};

ExtReal epvip_gap(const EPVIPInstance& inst, std::span<const double> x, const GridSpec& ygrid,
                  const EngineLimits& lim = EngineLimits::defaults());

}  // namespace gcoup
