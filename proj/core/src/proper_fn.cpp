#include "gcoup/proper_fn.hpp"

#include <utility>

#include "gcoup/errors.hpp"

namespace gcoup {

ProperFn::ProperFn(int n, PointFn f, std::string name)
    : n_(n), f_(std::move(f)), name_(std::move(name)) {
    if (n_ < 1) throw Error("objective needs a positive dimension");
}

ProperFn ProperFn::from_expr(const ExprFn& e, std::optional<SetSpec> dom, std::string name) {
    ProperFn out(static_cast<int>(e.arity()), [e](std::span<const double> x) { return e.eval(x); },
                 std::move(name));
    out.dom_ = std::move(dom);
    return out;
}

ExtReal ProperFn::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw Error("point dimension does not match the objective");
    ExtReal v = f_(x);
    if (v.is_neg_inf()) throw EvalError("objective evaluated to -inf at a point");
    return v;
}

bool ProperFn::in_dom(std::span<const double> x) const {
    if (dom_) return dom_->contains(x);
    return eval(x).finite();
}

ProperFn ProperFn::with_dom(SetSpec dom) const {
    ProperFn out = *this;
    out.dom_ = std::move(dom);
    return out;
}

PropernessReport check_proper(const ProperFn& f, const GridSpec& grid) {
    grid.validate(EngineLimits::defaults().point_cap);
    PropernessReport rep;
    const int dim = static_cast<int>(grid.box.dim());
    if (dim != f.dim()) throw Error("grid dimension does not match the objective");
    const int per = grid.points_per_dim;
    std::vector<int> idx(dim, 0);
    std::vector<double> p(dim);
    while (true) {
        for (int d = 0; d < dim; ++d) p[d] = grid.coord(static_cast<std::size_t>(idx[d]),
                                                        static_cast<std::size_t>(d));
        ExtReal v{0.0};
        try {
            v = f.eval(p);
        } catch (const EvalError& e) {
            rep.proper = false;
            rep.detail = e.what();
            return rep;
        }
        if (v.finite()) ++rep.finite_points;
        int d = dim - 1;
        while (d >= 0 && ++idx[d] == per) idx[d--] = 0;
        if (d < 0) break;
    }
    rep.proper = rep.finite_points > 0;
    if (!rep.proper) rep.detail = "no finite value on the scan grid";
    return rep;
}

}  // namespace gcoup
