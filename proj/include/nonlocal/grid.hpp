#ifndef NONLOCAL_GRID_HPP
#define NONLOCAL_GRID_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace nonlocal {

// Coordinates of a point in R^n, n <= 2. Unused trailing components are 0.
using Point = std::array<double, 2>;

enum class Geometry { bounded, torus };

struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    double length() const noexcept { return upper - lower; }
    bool contains(const Interval& other) const noexcept {
        return lower <= other.lower && other.upper <= upper;
    }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned box in R^1 or R^2, either with a boundary or periodic.
///
/// A bounded box may carry a "truncation" flag, meaning it stands for a
/// finite window of an unbounded domain (used by exhaustion sequences).
/// Periodic boxes cannot be truncations.
class Domain {
public:
    explicit Domain(std::vector<Interval> axes, Geometry geometry = Geometry::bounded,
                    bool truncation = false);

    static Domain interval(double lower, double upper, Geometry geometry = Geometry::bounded);
    static Domain box(Interval x, Interval y, Geometry geometry = Geometry::bounded);

    int dimension() const noexcept { return static_cast<int>(axes_.size()); }
    const Interval& axis(int d) const { return axes_.at(static_cast<std::size_t>(d)); }
    std::span<const Interval> axes() const noexcept { return axes_; }
    Geometry geometry() const noexcept { return geometry_; }
    bool is_torus() const noexcept { return geometry_ == Geometry::torus; }
    bool is_truncation() const noexcept { return truncation_; }

    double volume() const noexcept;
    double smallest_side() const noexcept;

    // Per-axis inclusion of the closed boxes.
    bool contains(const Domain& other) const noexcept;
    bool contains(const Point& p, double slack = 0.0) const noexcept;

    // Distance to the nearest face in the sup-norm sense (box geometry).
    double distance_to_boundary(const Point& p) const noexcept;

    // x - y, reduced to the minimal image on a torus.
    Point displacement(const Point& x, const Point& y) const noexcept;
    double distance(const Point& x, const Point& y) const noexcept;

    friend bool operator==(const Domain&, const Domain&) = default;

private:
    std::vector<Interval> axes_;
    Geometry geometry_;
    bool truncation_;
};

double norm(const Point& z, int dimension) noexcept;

/// Uniform tensor grid with quadrature weights.
///
/// Bounded domains get a closed grid (nodes on every face, trapezoid
/// weights). Tori get cell-centred nodes with equal (midpoint) weights and
/// an empty boundary set. Node index = ix + nx * iy.
class Grid {
public:
    Grid(Domain domain, std::array<int, 2> counts, std::array<double, 2> spacing,
         std::vector<Point> nodes, Eigen::VectorXd weights, std::vector<bool> boundary);

    const Domain& domain() const noexcept { return domain_; }
    int dimension() const noexcept { return domain_.dimension(); }
    std::size_t size() const noexcept { return nodes_.size(); }
    int count(int d) const { return counts_.at(static_cast<std::size_t>(d)); }
    double spacing(int d) const { return spacing_.at(static_cast<std::size_t>(d)); }
    double min_spacing() const noexcept;

    const Point& node(std::size_t i) const { return nodes_[i]; }
    std::span<const Point> nodes() const noexcept { return nodes_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }
    bool on_boundary(std::size_t i) const { return boundary_[i]; }
    const std::vector<bool>& boundary_mask() const noexcept { return boundary_; }
    std::size_t boundary_count() const noexcept;

    // Evaluate f at every node.
    template <class F>
    Eigen::VectorXd sample(F&& f) const {
        Eigen::VectorXd out(static_cast<Eigen::Index>(nodes_.size()));
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            out[static_cast<Eigen::Index>(i)] = f(nodes_[i]);
        return out;
    }

private:
    Domain domain_;
    std::array<int, 2> counts_;
    std::array<double, 2> spacing_;
    std::vector<Point> nodes_;
    Eigen::VectorXd weights_;
    std::vector<bool> boundary_;
};

Grid build_grid(const Domain& domain, int nodes_per_axis);
Grid build_grid(const Domain& domain, std::array<int, 2> counts);

// Sum of w_i * samples_i.
double integrate(const Grid& grid, std::span<const double> samples);
double integrate(const Grid& grid, const Eigen::VectorXd& samples);

/// Nodal weights of the measure dmu = dx / g^n.
struct MeasureWeights {
    Eigen::VectorXd dmu;
    std::vector<bool> degenerate; // g(x_i) < g_floor; dmu_i is set to 0 there
};

MeasureWeights measure_weights(const Grid& grid, const Eigen::VectorXd& g_values, double g_floor);

// Moves every face inward by theta. theta = 0 returns the domain unchanged.
Domain shrink_domain(const Domain& domain, double theta);

/// Description of R (n = 1) through a bounded core set and a sequence of
/// truncation radii.
struct UnboundedLine {
    Interval core;
    std::vector<double> radii;
};

// omega_k = (-R_k, R_k) for the first `count` radii.
std::vector<Domain> exhaustion_sequence(const UnboundedLine& line, std::size_t count);

} // namespace nonlocal

#endif
