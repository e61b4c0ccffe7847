#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gcoup/extreal.hpp"

namespace gcoup {

// Axis-aligned closed box, lo[d] <= hi[d]. Degenerate intervals are allowed.
struct Box {
  std::vector<double> lo, hi;

  std::size_t dim() const { return lo.size(); }
  static Box centered(std::size_t dim, double radius);
  static Box interval(double a, double b);  // 1-D convenience

  // Doubles every half-width about the box centre.
  Box doubled() const;
  bool contains(std::span<const double> p, double tol = 0.0) const;
  bool on_boundary(std::span<const double> p) const;
  // Largest Euclidean norm over the corners.
  double max_corner_norm() const;
  // t >= 0 such that p + t*d exits the box (0 if p is outside; +inf for a
  // direction the box never cuts, which cannot happen for bounded boxes
  // unless d = 0).
  double exit_distance(std::span<const double> p, std::span<const double> d) const;
  void validate() const;  // throws GridError on lo > hi, NaN or empty
};

struct GridSpec {
  Box box;
  int points_per_dim = 201;
  int refinement_rounds = 0;

  std::size_t total_points() const;
  // Coordinate of grid index i along dimension d, computed as a lerp so both
  // endpoints and (for odd counts) the centre are exact.
  double coord(std::size_t i, std::size_t d) const;
  void validate(std::size_t point_cap) const;
};

enum class OptStatus { attained, divergent, empty_domain };

// Result of a grid search. `value` is the extremum over the requested grid
// (after local refinement); `probe_value` additionally folds in what the
// box-widening probe saw and is never worse. status == attained iff arg is
// present. status == divergent implies value is +inf or -inf.
struct OptResult {
  ExtReal value{0.0};
  std::optional<std::vector<double>> arg;
  OptStatus status = OptStatus::attained;
  ExtReal probe_value{0.0};
  bool improved_under_widening = false;
};

enum class OptMode { sup, inf };

// Global evaluation limits. GCOUP_POINT_CAP and GCOUP_DIVERGENCE_CAP
// environment variables override the defaults at first use.
struct EngineLimits {
  std::size_t point_cap = 1'000'000;
  double divergence_cap = 1e12;
  int max_widen_rounds = 64;
  static const EngineLimits& defaults();
};

using PointFn = std::function<ExtReal(std::span<const double>)>;

// Deterministic truncated extremum search.
//
// Evaluates phi on the regular grid, keeping the best value with ties broken
// by the lexicographically smallest grid index, then runs
// `refinement_rounds` of local re-gridding around the incumbent (never
// worsening it). Points valued -inf (sup) / +inf (inf) are treated as
// outside the domain; if every point is outside, status = empty_domain.
//
// If the incumbent sits on the box boundary, the probe repeatedly doubles
// the box and re-searches. While the probe strictly improves, crossing
// `divergence_cap` in magnitude classifies the search as divergent and the
// value becomes +inf (sup) / -inf (inf). A probe that stalls leaves `value`
// at the original-grid extremum and records what it saw in `probe_value`.
OptResult optimize_over_grid(const PointFn& phi, const GridSpec& grid, OptMode mode,
                             const EngineLimits& lim = EngineLimits::defaults());

}  // namespace gcoup
