#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gcoup/conjugate.hpp"
#include "gcoup/grid.hpp"
#include "gcoup/set_spec.hpp"

namespace gcoup {

struct PointCloud {
    std::size_t dim = 0;
    std::vector<std::vector<double>> pts;
};

// Finite stand-in for a cone of directions; no entries means the zero cone.
struct DirectionSet {
    std::size_t dim = 0;
    std::vector<std::vector<double>> dirs;  // unit vectors

    bool zero_only() const { return dirs.empty(); }
};

// Angle between unit vectors, degrees.
double angle_deg(std::span<const double> a, std::span<const double> b);

// Deterministic covering of the unit sphere: {-1, +1} on the line, an evenly
// spaced circle in the plane, a Fibonacci sphere in 3-D, seeded Gaussian
// samples beyond.
std::vector<std::vector<double>> sphere_directions(std::size_t dim, double res_deg,
                                                   std::uint64_t seed = 0);

// The candidate directions along which the set is unbounded, probed at
// scaled multiples. For a cone this is exactly the directions it contains;
// a bounded set keeps none.
DirectionSet directions_of_cone(const SetSpec& cone,
                                const std::vector<std::vector<double>>& candidates,
                                double tol = 1e-9);

// A has no direction farther than slack_deg from all of B.
bool dirs_subset(const DirectionSet& a, const DirectionSet& b, double slack_deg);
bool dirs_equal(const DirectionSet& a, const DirectionSet& b, double slack_deg);

// produce(k) samples the same set through a window doubled k times.
using CloudProducer = std::function<PointCloud(int)>;

struct RecessionParams {
    double angular_res_deg = 1.0;
    double angular_tol_deg = 10.0;
    double level_tol = 1e-6;
    double zero_tol = 1e-10;
    int levels = 6;
    int ladder_k = 10;
    double growth = 1.25;
    double min_reach_frac = 0.1;
    int bands = 4;
    std::uint64_t seed = 0;
};

// True when doubling the window does not grow the cloud's largest norm
// beyond the growth factor.
bool cloud_bounded(const CloudProducer& produce, const RecessionParams& p = {});

// Unbounded-direction estimate. A bounded cloud yields the zero cone.
// Otherwise a candidate direction survives when every distance band along it
// (anchored at the smallest-norm point, reaching toward the window exit)
// holds a cloud point within the angular tolerance.
DirectionSet cloud_recession(const CloudProducer& produce,
                             const std::vector<std::vector<double>>& candidates,
                             const Box& window, const RecessionParams& p = {});

// Joint sublevel sample of gamma: pairs (x, xstar-entry) with
// gamma <= level + level_tol * (1 + |level|), x running over xgrid's box
// doubled `doublings` times. The second slot never leaves the entries of fg.
PointCloud gamma_level_cloud(const GammaFn& gamma, const GridSpec& xgrid, double level,
                             int doublings, double level_tol);

// Pairs where gamma vanishes within an absolute tolerance.
PointCloud gamma_zero_cloud(const GammaFn& gamma, const GridSpec& xgrid, double zero_tol);

struct CompactnessReport {
    bool zero_cloud_empty = true;
    std::vector<double> tested_levels;  // smallest distinct sampled values
    DirectionSet level_dirs;            // intersected over tested_levels
    DirectionSet ladder_dirs;           // intersected over 2^-k levels
    DirectionSet r_gamma;               // level_dirs when zeros exist, else ladder_dirs
    bool ladder_agree = false;
    bool bounded_probe = false;    // widest tested level cloud stays in frame
    bool equivalence_ok = false;   // r_gamma == {0} exactly when the probe is bounded
    std::string detail;
};

// Recession analysis of gamma through its sampled level sets, with the
// geometric 2^-k ladder as an independent route and a direct boundedness
// probe closing the equivalence.
CompactnessReport recession_of_gamma(const GammaFn& gamma, const GridSpec& xgrid,
                                     const RecessionParams& p = {});

}  // namespace gcoup
