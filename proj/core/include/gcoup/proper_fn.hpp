#pragma once

#include <optional>
#include <span>
#include <string>

#include "gcoup/expr.hpp"
#include "gcoup/grid.hpp"
#include "gcoup/set_spec.hpp"

namespace gcoup {

// Extended-real objective on R^n. Evaluation throws EvalError if the wrapped
// callable produces -inf, since an objective that reaches -inf is outside
// everything this library computes. dom_hint is metadata: in_dom() prefers it,
// and otherwise falls back to "f(x) is finite".
class ProperFn {
public:
    ProperFn(int n, PointFn f, std::string name = "f");

    static ProperFn from_expr(const ExprFn& e, std::optional<SetSpec> dom = std::nullopt,
                              std::string name = "f");

    int dim() const { return n_; }
    ExtReal eval(std::span<const double> x) const;
    bool in_dom(std::span<const double> x) const;
    const std::optional<SetSpec>& dom_hint() const { return dom_; }
    ProperFn with_dom(SetSpec dom) const;
    const std::string& name() const { return name_; }

private:
    int n_;
    PointFn f_;
    std::optional<SetSpec> dom_;
    std::string name_;
};

struct PropernessReport {
    bool proper = false;
    long finite_points = 0;
    std::string detail;
};

// Scans the grid. Proper means at least one finite value and no -inf (the
// latter surfaces as an EvalError caught into the report).
PropernessReport check_proper(const ProperFn& f, const GridSpec& grid);

}  // namespace gcoup
