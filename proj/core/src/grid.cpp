#include "gcoup/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace gcoup {

Box Box::centered(std::size_t dim, double radius) {
  Box b;
  b.lo.assign(dim, -radius);
  b.hi.assign(dim, radius);
  return b;
}

Box Box::interval(double a, double b) {
  Box box;
  box.lo = {a};
  box.hi = {b};
  return box;
}

Box Box::doubled() const {
  Box b = *this;
  for (std::size_t d = 0; d < dim(); ++d) {
    const double c = 0.5 * (lo[d] + hi[d]);
    const double hw = 0.5 * (hi[d] - lo[d]);
    // A degenerate axis stays degenerate; there is nothing to widen.
    b.lo[d] = c - 2.0 * hw;
    b.hi[d] = c + 2.0 * hw;
  }
  return b;
}

bool Box::contains(std::span<const double> p, double tol) const {
  for (std::size_t d = 0; d < dim(); ++d)
    if (p[d] < lo[d] - tol || p[d] > hi[d] + tol) return false;
  return true;
}

bool Box::on_boundary(std::span<const double> p) const {
  for (std::size_t d = 0; d < dim(); ++d) {
    const double tiny = 1e-12 * (1.0 + hi[d] - lo[d]);
    if (p[d] <= lo[d] + tiny || p[d] >= hi[d] - tiny) return true;
  }
  return false;
}

double Box::max_corner_norm() const {
  double s = 0.0;
  for (std::size_t d = 0; d < dim(); ++d) {
    const double m = std::max(std::abs(lo[d]), std::abs(hi[d]));
    s += m * m;
  }
  return std::sqrt(s);
}

double Box::exit_distance(std::span<const double> p, std::span<const double> dir) const {
  if (!contains(p, 1e-9)) return 0.0;
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < dim(); ++d) {
    if (dir[d] > 1e-300) t = std::min(t, (hi[d] - p[d]) / dir[d]);
    else if (dir[d] < -1e-300) t = std::min(t, (lo[d] - p[d]) / dir[d]);
  }
  return std::max(t, 0.0);
}

void Box::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw GridError("box dimensions inconsistent");
  for (std::size_t d = 0; d < dim(); ++d) {
    if (std::isnan(lo[d]) || std::isnan(hi[d]) || !std::isfinite(lo[d]) || !std::isfinite(hi[d]))
      throw GridError("box bounds must be finite");
    if (lo[d] > hi[d]) throw GridError("box has lo > hi");
  }
}

std::size_t GridSpec::total_points() const {
  std::size_t n = 1;
  for (std::size_t d = 0; d < box.dim(); ++d) n *= static_cast<std::size_t>(points_per_dim);
  return n;
}

double GridSpec::coord(std::size_t i, std::size_t d) const {
  const double t = static_cast<double>(i) / static_cast<double>(points_per_dim - 1);
  return box.lo[d] * (1.0 - t) + box.hi[d] * t;
}

void GridSpec::validate(std::size_t point_cap) const {
  box.validate();
  if (points_per_dim < 2) throw GridError("points_per_dim must be >= 2");
  if (refinement_rounds < 0) throw GridError("refinement_rounds must be >= 0");
  // Overflow-safe cap check.
  std::size_t n = 1;
  for (std::size_t d = 0; d < box.dim(); ++d) {
    n *= static_cast<std::size_t>(points_per_dim);
    if (n > point_cap) throw GridError("grid cap exceeded: > " + std::to_string(point_cap) + " points");
  }
}

const EngineLimits& EngineLimits::defaults() {
  static const EngineLimits lim = [] {
    EngineLimits l;
    if (const char* s = std::getenv("GCOUP_POINT_CAP")) {
      const long long v = std::atoll(s);
      if (v > 1) l.point_cap = static_cast<std::size_t>(v);
    }
    if (const char* s = std::getenv("GCOUP_DIVERGENCE_CAP")) {
      const double v = std::atof(s);
      if (v > 0) l.divergence_cap = v;
    }
    return l;
  }();
  return lim;
}

namespace {

// better-than for the given mode; strict, so earlier indices win ties.
inline bool better(ExtReal cand, ExtReal best, OptMode mode) {
  return mode == OptMode::sup ? cand > best : cand < best;
}

inline bool outside_domain(ExtReal v, OptMode mode) {
  return mode == OptMode::sup ? v.is_neg_inf() : v.is_pos_inf();
}

struct BestPoint {
  ExtReal value{0.0};
  std::vector<double> arg;
  bool any = false;
};

}  // namespace

OptResult optimize_over_grid(const PointFn& phi, const GridSpec& grid, OptMode mode,
                             const EngineLimits& lim) {
  grid.validate(lim.point_cap);
  const std::size_t dims = grid.box.dim();

  // One scan over a grid spec; strict improvement only, so the first (lowest
  // lexicographic index) extremal point is kept.
  auto scan = [&](const GridSpec& g, BestPoint& best) {
    const std::size_t n = g.total_points();
    std::vector<std::size_t> idx(dims, 0);
    std::vector<double> p(dims);
    for (std::size_t flat = 0; flat < n; ++flat) {
      for (std::size_t d = 0; d < dims; ++d) p[d] = g.coord(idx[d], d);
      const ExtReal v = phi(p);
      if (!outside_domain(v, mode) && (!best.any || better(v, best.value, mode))) {
        best.value = v;
        best.arg = p;
        best.any = true;
      }
      for (std::size_t d = dims; d-- > 0;) {
        if (++idx[d] < static_cast<std::size_t>(g.points_per_dim)) break;
        idx[d] = 0;
      }
    }
  };

  // Full search on one box: base scan plus local refinement rounds around the
  // incumbent, each round re-gridding a +-1-cell neighbourhood (clipped).
  auto search = [&](const Box& box) {
    BestPoint best;
    GridSpec g{box, grid.points_per_dim, grid.refinement_rounds};
    scan(g, best);
    if (!best.any) return best;
    Box cur = box;
    for (int r = 0; r < grid.refinement_rounds; ++r) {
      Box sub;
      sub.lo.resize(dims);
      sub.hi.resize(dims);
      for (std::size_t d = 0; d < dims; ++d) {
        const double step = (cur.hi[d] - cur.lo[d]) / (grid.points_per_dim - 1);
        sub.lo[d] = std::max(box.lo[d], best.arg[d] - step);
        sub.hi[d] = std::min(box.hi[d], best.arg[d] + step);
      }
      GridSpec sg{sub, grid.points_per_dim, 0};
      scan(sg, best);  // strict improvement keeps the incumbent on ties
      cur = sub;
    }
    return best;
  };

  OptResult out;
  BestPoint base = search(grid.box);
  if (!base.any) {
    out.value = mode == OptMode::sup ? ExtReal::neg_inf() : ExtReal::pos_inf();
    out.probe_value = out.value;
    out.status = OptStatus::empty_domain;
    return out;
  }

  out.value = base.value;
  out.arg = base.arg;
  out.status = OptStatus::attained;
  out.probe_value = base.value;

  // Widening probe: only meaningful when the incumbent is pinned to the
  // boundary and still finite.
  if (base.value.finite() && grid.box.on_boundary(base.arg)) {
    Box wide = grid.box;
    ExtReal probe = base.value;
    for (int round = 0; round < lim.max_widen_rounds; ++round) {
      wide = wide.doubled();
      BestPoint cand = search(wide);
      if (!cand.any || !better(cand.value, probe, mode)) break;
      probe = cand.value;
      out.improved_under_widening = true;
      const bool diverged =
          !probe.finite() || std::abs(probe.raw()) > lim.divergence_cap;
      if (diverged) {
        out.value = mode == OptMode::sup ? ExtReal::pos_inf() : ExtReal::neg_inf();
        out.probe_value = out.value;
        out.arg.reset();
        out.status = OptStatus::divergent;
        return out;
      }
      out.probe_value = probe;
      if (!wide.on_boundary(cand.arg)) break;  // settled in the interior
    }
  }
  return out;
}

}  // namespace gcoup
