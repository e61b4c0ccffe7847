#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcoup/extreal.hpp"
#include "gcoup/grid.hpp"

namespace gcoup {

enum class SetKind { box, orthant, full, halfspaces, dual_cone };

// Row of a halfspace system, meaning <a, x> >= b.
struct Halfspace {
    std::vector<double> a;
    double b = 0.0;
};

// Closed subset of R^m with exact membership by construction. Halfspace
// systems describe the intersection of their rows. The dual_cone kind wraps a
// base set S and represents {p : <p, x> >= 0 for all x in S}; membership is
// evaluated in closed form (vertex tests for boxes, conic-combination solves
// for halfspace cones), so only bases where that is possible are accepted.
class SetSpec {
public:
    static SetSpec make_box(Box b);
    static SetSpec make_orthant(int dim);
    static SetSpec make_full(int dim);
    static SetSpec make_halfspaces(int dim, std::vector<Halfspace> rows);
    static SetSpec dual_cone_of(SetSpec base);

    SetKind kind() const { return kind_; }
    int dim() const { return dim_; }

    bool contains(std::span<const double> p, double tol = 1e-9) const;
    bool is_cone() const;

    // The recession cone, exact by kind. Bounded boxes give {0} (a degenerate
    // box), halfspace systems drop their offsets, cones return themselves.
    SetSpec recession_cone() const;

    // inf over the set of <xstar, .>, when a closed form exists for the kind.
    // Boxes always have one (vertex minimum), orthants and halfspace cones
    // give 0 or -inf by dual membership. nullopt means caller must fall back
    // to a grid search.
    std::optional<ExtReal> support_inf(std::span<const double> xstar) const;

    // Box to lay sampling grids over: the portion of the set within the given
    // radius of the origin, possibly with slack that contains() filters out.
    Box sampling_box(double radius) const;

    // Throws SetSpecError when a coarse scan finds no point. Box bounds are
    // checked exactly; halfspace systems are probed on a lattice.
    void validate_nonempty(double radius = 20.0) const;

    const Box& box() const;                        // box kind only
    const std::vector<Halfspace>& rows() const;    // halfspaces kind only
    const SetSpec& base() const;                   // dual_cone kind only

    std::string describe() const;

private:
    SetKind kind_ = SetKind::full;
    int dim_ = 1;
    std::optional<Box> box_;
    std::vector<Halfspace> rows_;
    std::shared_ptr<const SetSpec> base_;
};

// Grid points of grid.box that lie in s, in flat lexicographic order.
// Returned flat indices refer to the full grid.
struct FilteredPoints {
    std::vector<long> flat_index;
    std::vector<std::vector<double>> pts;
};
FilteredPoints points_in(const SetSpec& s, const GridSpec& grid, double tol = 1e-9);

}  // namespace gcoup
