#include "gcoup/set_spec.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "gcoup/errors.hpp"
#include "linsolve.hpp"

namespace gcoup {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Is p a nonnegative combination of the generators? Caratheodory bounds the
// support of such a combination by the ambient dimension, so trying every
// subset up to that size with a normal-equation solve is exact enough at the
// tolerances we care about.
bool in_conic_hull(std::span<const double> p, const std::vector<std::vector<double>>& gens,
                   double tol) {
    const std::size_t m = p.size();
    const double scale = 1.0 + norm2(p);
    if (norm2(p) <= tol * scale) return true;
    const std::size_t k = gens.size();
    if (k == 0) return false;
    if (k > 16) throw SetSpecError("conic membership limited to 16 generators");
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        std::vector<std::size_t> pick;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i)) pick.push_back(i);
        if (pick.size() > m) continue;
        const std::size_t s = pick.size();
        std::vector<std::vector<double>> ata(s, std::vector<double>(s, 0.0));
        std::vector<double> atp(s, 0.0);
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j < s; ++j)
                for (std::size_t d = 0; d < m; ++d)
                    ata[i][j] += gens[pick[i]][d] * gens[pick[j]][d];
            for (std::size_t d = 0; d < m; ++d) atp[i] += gens[pick[i]][d] * p[d];
        }
        std::vector<double> mu;
        if (!detail::solve_linear(ata, atp, mu, 1e-12)) continue;
        bool nonneg = true;
        for (double c : mu)
            if (c < -tol * scale) nonneg = false;
        if (!nonneg) continue;
        double resid = 0.0;
        for (std::size_t d = 0; d < m; ++d) {
            double coord = 0.0;
            for (std::size_t i = 0; i < s; ++i) coord += mu[i] * gens[pick[i]][d];
            const double diff = coord - p[d];
            resid += diff * diff;
        }
        if (std::sqrt(resid) <= tol * scale) return true;
    }
    return false;
}

std::vector<std::vector<double>> box_vertices(const Box& b) {
    const int m = static_cast<int>(b.dim());
    if (m > 20) throw SetSpecError("vertex enumeration limited to 20 dimensions");
    std::vector<std::vector<double>> out;
    out.reserve(std::size_t{1} << m);
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
        std::vector<double> v(m);
        for (int d = 0; d < m; ++d) v[d] = (mask >> d) & 1 ? b.hi[d] : b.lo[d];
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

SetSpec SetSpec::make_box(Box b) {
    const int m = static_cast<int>(b.dim());
    if (m == 0) throw SetSpecError("box needs at least one dimension");
    for (int d = 0; d < m; ++d)
        if (!(b.lo[d] <= b.hi[d])) throw SetSpecError("box has lo > hi, set would be empty");
    SetSpec s;
    s.kind_ = SetKind::box;
    s.dim_ = m;
    s.box_ = std::move(b);
    return s;
}

SetSpec SetSpec::make_orthant(int dim) {
    if (dim < 1) throw SetSpecError("orthant needs a positive dimension");
    SetSpec s;
    s.kind_ = SetKind::orthant;
    s.dim_ = dim;
    return s;
}

SetSpec SetSpec::make_full(int dim) {
    if (dim < 1) throw SetSpecError("full space needs a positive dimension");
    SetSpec s;
    s.kind_ = SetKind::full;
    s.dim_ = dim;
    return s;
}

SetSpec SetSpec::make_halfspaces(int dim, std::vector<Halfspace> rows) {
    if (dim < 1) throw SetSpecError("halfspace system needs a positive dimension");
    if (rows.empty()) throw SetSpecError("halfspace system needs at least one row");
    for (const auto& r : rows) {
        if (static_cast<int>(r.a.size()) != dim)
            throw SetSpecError("halfspace normal has wrong dimension");
        if (norm2(r.a) == 0.0) throw SetSpecError("halfspace normal is zero");
    }
    SetSpec s;
    s.kind_ = SetKind::halfspaces;
    s.dim_ = dim;
    s.rows_ = std::move(rows);
    return s;
}

SetSpec SetSpec::dual_cone_of(SetSpec base) {
    switch (base.kind_) {
        case SetKind::orthant:
            return base;  // self-dual
        case SetKind::full: {
            Box zero;
            zero.lo.assign(base.dim_, 0.0);
            zero.hi.assign(base.dim_, 0.0);
            return make_box(std::move(zero));
        }
        case SetKind::box:
            break;
        case SetKind::halfspaces:
            if (!base.is_cone())
                throw SetSpecError("dual cone of a halfspace system needs homogeneous rows");
            break;
        case SetKind::dual_cone:
            throw SetSpecError("dual cone of a dual cone is not supported");
    }
    SetSpec s;
    s.kind_ = SetKind::dual_cone;
    s.dim_ = base.dim_;
    s.base_ = std::make_shared<SetSpec>(std::move(base));
    return s;
}

bool SetSpec::contains(std::span<const double> p, double tol) const {
    if (static_cast<int>(p.size()) != dim_)
        throw SetSpecError("point dimension does not match the set");
    switch (kind_) {
        case SetKind::box:
            return box_->contains(p, tol);
        case SetKind::orthant:
            for (double x : p)
                if (x < -tol) return false;
            return true;
        case SetKind::full:
            return true;
        case SetKind::halfspaces:
            for (const auto& r : rows_) {
                double v = -r.b;
                for (int d = 0; d < dim_; ++d) v += r.a[d] * p[d];
                if (v < -tol * (1.0 + std::fabs(r.b) + norm2(p))) return false;
            }
            return true;
        case SetKind::dual_cone:
            switch (base_->kind_) {
                case SetKind::full:
                    for (double x : p)
                        if (std::fabs(x) > tol) return false;
                    return true;
                case SetKind::orthant:
                    for (double x : p)
                        if (x < -tol) return false;
                    return true;
                case SetKind::box: {
                    const double scale = 1.0 + norm2(p);
                    for (const auto& v : box_vertices(*base_->box_)) {
                        double dot = 0.0;
                        for (int d = 0; d < dim_; ++d) dot += v[d] * p[d];
                        if (dot < -tol * scale * (1.0 + norm2(v))) return false;
                    }
                    return true;
                }
                case SetKind::halfspaces: {
                    std::vector<std::vector<double>> gens;
                    gens.reserve(base_->rows_.size());
                    for (const auto& r : base_->rows_) {
                        std::vector<double> g = r.a;
                        const double nn = norm2(g);
                        for (double& x : g) x /= nn;
                        gens.push_back(std::move(g));
                    }
                    return in_conic_hull(p, gens, std::max(tol, 1e-9));
                }
                case SetKind::dual_cone:
                    break;
            }
            throw SetSpecError("unsupported dual cone base");
    }
    throw SetSpecError("unreachable set kind");
}

bool SetSpec::is_cone() const {
    switch (kind_) {
        case SetKind::box:
            for (int d = 0; d < dim_; ++d)
                if (box_->lo[d] != 0.0 || box_->hi[d] != 0.0) return false;
            return true;
        case SetKind::orthant:
        case SetKind::full:
        case SetKind::dual_cone:
            return true;
        case SetKind::halfspaces:
            for (const auto& r : rows_)
                if (r.b != 0.0) return false;
            return true;
    }
    return false;
}

SetSpec SetSpec::recession_cone() const {
    switch (kind_) {
        case SetKind::box: {
            Box zero;
            zero.lo.assign(dim_, 0.0);
            zero.hi.assign(dim_, 0.0);
            return make_box(std::move(zero));
        }
        case SetKind::orthant:
        case SetKind::full:
        case SetKind::dual_cone:
            return *this;
        case SetKind::halfspaces: {
            std::vector<Halfspace> rows = rows_;
            for (auto& r : rows) r.b = 0.0;
            return make_halfspaces(dim_, std::move(rows));
        }
    }
    throw SetSpecError("unreachable set kind");
}

std::optional<ExtReal> SetSpec::support_inf(std::span<const double> xstar) const {
    if (static_cast<int>(xstar.size()) != dim_)
        throw SetSpecError("point dimension does not match the set");
    switch (kind_) {
        case SetKind::box: {
            double s = 0.0;
            for (int d = 0; d < dim_; ++d)
                s += std::min(box_->lo[d] * xstar[d], box_->hi[d] * xstar[d]);
            return ExtReal(s);
        }
        case SetKind::orthant:
            for (double x : xstar)
                if (x < -1e-12) return ExtReal::neg_inf();
            return ExtReal(0.0);
        case SetKind::full:
            for (double x : xstar)
                if (std::fabs(x) > 1e-12) return ExtReal::neg_inf();
            return ExtReal(0.0);
        case SetKind::halfspaces: {
            if (!is_cone()) return std::nullopt;
            SetSpec dual = dual_cone_of(*this);
            return dual.contains(xstar, 1e-9) ? ExtReal(0.0) : ExtReal::neg_inf();
        }
        case SetKind::dual_cone:
            switch (base_->kind_) {
                case SetKind::full:
                    return ExtReal(0.0);  // the set is {0}
                case SetKind::orthant:
                    for (double x : xstar)
                        if (x < -1e-12) return ExtReal::neg_inf();
                    return ExtReal(0.0);
                case SetKind::box: {
                    // dual of the dual of a box is the conic hull of its
                    // vertices, so test xstar against those generators
                    std::vector<std::vector<double>> gens;
                    for (auto& v : box_vertices(*base_->box_)) {
                        const double nn = norm2(v);
                        if (nn == 0.0) continue;
                        for (double& x : v) x /= nn;
                        gens.push_back(std::move(v));
                    }
                    return in_conic_hull(xstar, gens, 1e-9) ? ExtReal(0.0) : ExtReal::neg_inf();
                }
                case SetKind::halfspaces:
                    return base_->contains(xstar, 1e-9) ? ExtReal(0.0) : ExtReal::neg_inf();
                case SetKind::dual_cone:
                    break;
            }
            return std::nullopt;
    }
    return std::nullopt;
}

Box SetSpec::sampling_box(double radius) const {
    Box b;
    switch (kind_) {
        case SetKind::box:
            return *box_;
        case SetKind::orthant:
            b.lo.assign(dim_, 0.0);
            b.hi.assign(dim_, radius);
            return b;
        case SetKind::full:
        case SetKind::halfspaces:
            b.lo.assign(dim_, -radius);
            b.hi.assign(dim_, radius);
            return b;
        case SetKind::dual_cone:
            if (base_->kind_ == SetKind::orthant) {
                b.lo.assign(dim_, 0.0);
                b.hi.assign(dim_, radius);
            } else if (base_->kind_ == SetKind::full) {
                b.lo.assign(dim_, 0.0);
                b.hi.assign(dim_, 0.0);
            } else {
                b.lo.assign(dim_, -radius);
                b.hi.assign(dim_, radius);
            }
            return b;
    }
    throw SetSpecError("unreachable set kind");
}

void SetSpec::validate_nonempty(double radius) const {
    switch (kind_) {
        case SetKind::box:
        case SetKind::orthant:
        case SetKind::full:
        case SetKind::dual_cone:
            return;  // each contains a point by construction
        case SetKind::halfspaces: {
            std::vector<double> zero(dim_, 0.0);
            if (contains(zero, 1e-9)) return;
            if (dim_ > 4)
                throw SetSpecError("could not verify non-emptiness of the halfspace system");
            const int per = 9;
            GridSpec scan;
            scan.box.lo.assign(dim_, -radius);
            scan.box.hi.assign(dim_, radius);
            scan.points_per_dim = per;
            long total = 1;
            for (int d = 0; d < dim_; ++d) total *= per;
            std::vector<double> p(dim_);
            for (long flat = 0; flat < total; ++flat) {
                long rest = flat;
                for (int d = dim_ - 1; d >= 0; --d) {
                    p[d] = scan.coord(static_cast<int>(rest % per), d);
                    rest /= per;
                }
                if (contains(p, 1e-9)) return;
            }
            throw SetSpecError("no point of the halfspace system found within the scan radius");
        }
    }
}

const Box& SetSpec::box() const {
    if (kind_ != SetKind::box) throw SetSpecError("not a box");
    return *box_;
}

const std::vector<Halfspace>& SetSpec::rows() const {
    if (kind_ != SetKind::halfspaces) throw SetSpecError("not a halfspace system");
    return rows_;
}

const SetSpec& SetSpec::base() const {
    if (kind_ != SetKind::dual_cone) throw SetSpecError("not a dual cone");
    return *base_;
}

std::string SetSpec::describe() const {
    char buf[64];
    switch (kind_) {
        case SetKind::box: {
            std::string s = "box";
            for (int d = 0; d < dim_; ++d) {
                std::snprintf(buf, sizeof buf, "%s[%.17g,%.17g]", d ? "x" : " ", box_->lo[d],
                              box_->hi[d]);
                s += buf;
            }
            return s;
        }
        case SetKind::orthant:
            std::snprintf(buf, sizeof buf, "orthant dim=%d", dim_);
            return buf;
        case SetKind::full:
            std::snprintf(buf, sizeof buf, "full dim=%d", dim_);
            return buf;
        case SetKind::halfspaces:
            std::snprintf(buf, sizeof buf, "halfspaces dim=%d rows=%zu", dim_, rows_.size());
            return buf;
        case SetKind::dual_cone:
            return "dual_cone of " + base_->describe();
    }
    return "?";
}

FilteredPoints points_in(const SetSpec& s, const GridSpec& grid, double tol) {
    if (static_cast<int>(grid.box.dim()) != s.dim())
        throw SetSpecError("grid dimension does not match the set");
    grid.validate(EngineLimits::defaults().point_cap);
    FilteredPoints out;
    const int dim = static_cast<int>(grid.box.dim());
    const int per = grid.points_per_dim;
    std::vector<int> idx(dim, 0);
    std::vector<double> p(dim);
    long flat = 0;
    while (true) {
        for (int d = 0; d < dim; ++d) p[d] = grid.coord(idx[d], d);
        if (s.contains(p, tol)) {
            out.flat_index.push_back(flat);
            out.pts.push_back(p);
        }
        int d = dim - 1;
        while (d >= 0 && ++idx[d] == per) idx[d--] = 0;
        if (d < 0) break;
        ++flat;
    }
    return out;
}

}  // namespace gcoup
