#include "nonlocal/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nonlocal/error.hpp"

namespace nonlocal {

Domain::Domain(std::vector<Interval> axes, Geometry geometry, bool truncation)
    : axes_(std::move(axes)), geometry_(geometry), truncation_(truncation) {
    if (axes_.empty() || axes_.size() > 2)
        throw InvalidArgument("domain dimension must be 1 or 2, got " + std::to_string(axes_.size()));
    for (const auto& ax : axes_) {
        if (!std::isfinite(ax.lower) || !std::isfinite(ax.upper) || !(ax.lower < ax.upper))
            throw InvalidArgument("domain axis requires finite lower < upper");
    }
    if (truncation_ && geometry_ == Geometry::torus)
        throw InvalidArgument("a torus cannot be the truncation of an unbounded domain");
}

Domain Domain::interval(double lower, double upper, Geometry geometry) {
    return Domain({Interval{lower, upper}}, geometry);
}

Domain Domain::box(Interval x, Interval y, Geometry geometry) {
    return Domain({x, y}, geometry);
}

double Domain::volume() const noexcept {
    double v = 1.0;
    for (const auto& ax : axes_)
        v *= ax.length();
    return v;
}

double Domain::smallest_side() const noexcept {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& ax : axes_)
        s = std::min(s, ax.length());
    return s;
}

bool Domain::contains(const Domain& other) const noexcept {
    if (other.dimension() != dimension())
        return false;
    for (int d = 0; d < dimension(); ++d)
        if (!axis(d).contains(other.axis(d)))
            return false;
    return true;
}

bool Domain::contains(const Point& p, double slack) const noexcept {
    for (int d = 0; d < dimension(); ++d) {
        const auto& ax = axes_[static_cast<std::size_t>(d)];
        if (p[static_cast<std::size_t>(d)] < ax.lower - slack || p[static_cast<std::size_t>(d)] > ax.upper + slack)
            return false;
    }
    return true;
}

double Domain::distance_to_boundary(const Point& p) const noexcept {
    double dist = std::numeric_limits<double>::infinity();
    for (int d = 0; d < dimension(); ++d) {
        const auto& ax = axes_[static_cast<std::size_t>(d)];
        const double x = p[static_cast<std::size_t>(d)];
        dist = std::min({dist, x - ax.lower, ax.upper - x});
    }
    return std::max(dist, 0.0);
}

Point Domain::displacement(const Point& x, const Point& y) const noexcept {
    Point z{0.0, 0.0};
    for (int d = 0; d < dimension(); ++d) {
        const auto k = static_cast<std::size_t>(d);
        double dz = x[k] - y[k];
        if (geometry_ == Geometry::torus) {
            const double period = axes_[k].length();
            dz -= period * std::round(dz / period);
        }
        z[k] = dz;
    }
    return z;
}

double Domain::distance(const Point& x, const Point& y) const noexcept {
    return norm(displacement(x, y), dimension());
}

double norm(const Point& z, int dimension) noexcept {
    return dimension == 1 ? std::abs(z[0]) : std::hypot(z[0], z[1]);
}

Grid::Grid(Domain domain, std::array<int, 2> counts, std::array<double, 2> spacing,
           std::vector<Point> nodes, Eigen::VectorXd weights, std::vector<bool> boundary)
    : domain_(std::move(domain)), counts_(counts), spacing_(spacing), nodes_(std::move(nodes)),
      weights_(std::move(weights)), boundary_(std::move(boundary)) {}

double Grid::min_spacing() const noexcept {
    double h = spacing_[0];
    if (dimension() == 2)
        h = std::min(h, spacing_[1]);
    return h;
}

std::size_t Grid::boundary_count() const noexcept {
    return static_cast<std::size_t>(std::count(boundary_.begin(), boundary_.end(), true));
}

Grid build_grid(const Domain& domain, int nodes_per_axis) {
    return build_grid(domain, {nodes_per_axis, domain.dimension() == 2 ? nodes_per_axis : 1});
}

Grid build_grid(const Domain& domain, std::array<int, 2> counts) {
    const int dim = domain.dimension();
    for (int d = 0; d < dim; ++d)
        if (counts[static_cast<std::size_t>(d)] < 2)
            throw PreconditionError("grid needs at least 2 nodes per axis");
    if (dim == 1)
        counts[1] = 1;

    const bool torus = domain.is_torus();
    // 1D axis nodes and weights, then a tensor product.
    std::array<std::vector<double>, 2> coords;
    std::array<std::vector<double>, 2> axis_weights;
    std::array<std::vector<bool>, 2> axis_face;
    std::array<double, 2> spacing{0.0, 0.0};
    for (int d = 0; d < dim; ++d) {
        const auto k = static_cast<std::size_t>(d);
        const auto& ax = domain.axis(d);
        const int n = counts[k];
        coords[k].resize(static_cast<std::size_t>(n));
        axis_weights[k].resize(static_cast<std::size_t>(n));
        axis_face[k].assign(static_cast<std::size_t>(n), false);
        if (torus) {
            const double h = ax.length() / n;
            spacing[k] = h;
            for (int i = 0; i < n; ++i) {
                coords[k][static_cast<std::size_t>(i)] = ax.lower + (i + 0.5) * h;
                axis_weights[k][static_cast<std::size_t>(i)] = h;
            }
        } else {
            const double h = ax.length() / (n - 1);
            spacing[k] = h;
            for (int i = 0; i < n; ++i) {
                coords[k][static_cast<std::size_t>(i)] = i == n - 1 ? ax.upper : ax.lower + i * h;
                axis_weights[k][static_cast<std::size_t>(i)] = (i == 0 || i == n - 1) ? 0.5 * h : h;
            }
            axis_face[k].front() = true;
            axis_face[k].back() = true;
        }
    }
    if (dim == 1) {
        coords[1] = {0.0};
        axis_weights[1] = {1.0};
        axis_face[1] = {false};
    }

    const auto total = static_cast<std::size_t>(counts[0]) * static_cast<std::size_t>(counts[1]);
    std::vector<Point> nodes;
    nodes.reserve(total);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(total));
    std::vector<bool> boundary(total, false);
    std::size_t idx = 0;
    for (int iy = 0; iy < counts[1]; ++iy) {
        for (int ix = 0; ix < counts[0]; ++ix, ++idx) {
            const auto ux = static_cast<std::size_t>(ix);
            const auto uy = static_cast<std::size_t>(iy);
            nodes.push_back(Point{coords[0][ux], coords[1][uy]});
            weights[static_cast<Eigen::Index>(idx)] = axis_weights[0][ux] * axis_weights[1][uy];
            boundary[idx] = axis_face[0][ux] || axis_face[1][uy];
        }
    }
    return Grid(domain, counts, spacing, std::move(nodes), std::move(weights), std::move(boundary));
}

double integrate(const Grid& grid, std::span<const double> samples) {
    if (samples.size() != grid.size())
        throw InvalidArgument("integrate: " + std::to_string(samples.size()) + " samples for " +
                              std::to_string(grid.size()) + " nodes");
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i]))
            throw InvalidArgument("integrate: non-finite sample at node " + std::to_string(i));
        sum += grid.weights()[static_cast<Eigen::Index>(i)] * samples[i];
    }
    return sum;
}

double integrate(const Grid& grid, const Eigen::VectorXd& samples) {
    return integrate(grid, std::span<const double>(samples.data(), static_cast<std::size_t>(samples.size())));
}

MeasureWeights measure_weights(const Grid& grid, const Eigen::VectorXd& g_values, double g_floor) {
    if (static_cast<std::size_t>(g_values.size()) != grid.size())
        throw InvalidArgument("measure_weights: g sample count does not match grid");
    MeasureWeights m;
    m.dmu.resize(g_values.size());
    m.degenerate.assign(grid.size(), false);
    const int n = grid.dimension();
    for (Eigen::Index i = 0; i < g_values.size(); ++i) {
        const double g = g_values[i];
        if (!std::isfinite(g) || g < 0.0)
            throw InvalidArgument("measure_weights: g must be finite and nonnegative");
        if (g < g_floor) {
            m.degenerate[static_cast<std::size_t>(i)] = true;
            m.dmu[i] = 0.0;
        } else {
            m.dmu[i] = grid.weights()[i] / std::pow(g, n);
        }
    }
    return m;
}

Domain shrink_domain(const Domain& domain, double theta) {
    if (domain.is_torus())
        throw PreconditionError("shrink_domain needs a bounded domain");
    if (!(theta >= 0.0))
        throw PreconditionError("shrink_domain: theta must be nonnegative");
    if (theta >= 0.5 * domain.smallest_side())
        throw PreconditionError("shrink_domain: theta leaves an empty interior");
    std::vector<Interval> axes(domain.axes().begin(), domain.axes().end());
    for (auto& ax : axes) {
        ax.lower += theta;
        ax.upper -= theta;
    }
    return Domain(std::move(axes), Geometry::bounded, domain.is_truncation());
}

std::vector<Domain> exhaustion_sequence(const UnboundedLine& line, std::size_t count) {
    if (count < 2)
        throw PreconditionError("exhaustion_sequence needs at least 2 levels");
    if (line.radii.size() < count)
        throw PreconditionError("exhaustion_sequence: fewer radii than requested levels");
    for (std::size_t k = 0; k < count; ++k) {
        if (!(line.radii[k] > 0.0))
            throw PreconditionError("exhaustion_sequence: radii must be positive");
        if (k > 0 && !(line.radii[k] > line.radii[k - 1]))
            throw PreconditionError("exhaustion_sequence: radii must be strictly increasing");
    }
    const Interval first{-line.radii[0], line.radii[0]};
    if (!first.contains(line.core))
        throw PreconditionError("exhaustion_sequence: core set is not inside the first window");
    std::vector<Domain> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        out.emplace_back(std::vector<Interval>{{-line.radii[k], line.radii[k]}}, Geometry::bounded, true);
    return out;
}

} // namespace nonlocal
