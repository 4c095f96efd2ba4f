#include <cmath>
#include <vector>

#include "doctest.h"
#include "nonlocal/error.hpp"
#include "nonlocal/grid.hpp"

using namespace nonlocal;
using doctest::Approx;

TEST_CASE("closed trapezoid grid on [-1, 1]") {
    const Grid grid = build_grid(Domain::interval(-1.0, 1.0), 5);
    const std::vector<double> nodes{-1.0, -0.5, 0.0, 0.5, 1.0};
    const std::vector<double> weights{0.25, 0.5, 0.5, 0.5, 0.25};
    REQUIRE(grid.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(grid.node(i)[0] == Approx(nodes[i]).epsilon(1e-15));
        CHECK(grid.weights()[static_cast<Eigen::Index>(i)] == Approx(weights[i]).epsilon(1e-15));
    }
    CHECK(grid.weights().sum() == Approx(2.0).epsilon(1e-15));
    CHECK(grid.on_boundary(0));
    CHECK(grid.on_boundary(4));
    CHECK(grid.boundary_count() == 2);
}

TEST_CASE("cell-centred torus grid") {
    const Grid grid = build_grid(Domain::interval(0.0, 1.0, Geometry::torus), 4);
    const std::vector<double> nodes{0.125, 0.375, 0.625, 0.875};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(grid.node(i)[0] == Approx(nodes[i]).epsilon(1e-15));
        CHECK(grid.weights()[static_cast<Eigen::Index>(i)] == Approx(0.25).epsilon(1e-15));
    }
    CHECK(grid.boundary_count() == 0);
}

TEST_CASE("unit square, 3 nodes per axis") {
    const Grid grid = build_grid(Domain::box({0.0, 1.0}, {0.0, 1.0}), 3);
    CHECK(grid.size() == 9);
    CHECK(grid.weights().sum() == Approx(1.0).epsilon(1e-15));
    // Index = ix + nx * iy.
    CHECK(grid.node(5)[0] == Approx(1.0));
    CHECK(grid.node(5)[1] == Approx(0.5));
    CHECK(grid.boundary_count() == 8);
}

TEST_CASE("grid preconditions") {
    CHECK_THROWS_AS(build_grid(Domain::interval(-1.0, 1.0), 1), PreconditionError);
    CHECK_THROWS_AS(Domain::interval(1.0, -1.0), InvalidArgument);
}

TEST_CASE("trapezoid integration") {
    const Grid line = build_grid(Domain::interval(-1.0, 1.0), 33);
    CHECK(integrate(line, line.sample([](const Point&) { return 1.0; })) == Approx(2.0).epsilon(1e-14));
    const Grid unit = build_grid(Domain::interval(0.0, 1.0), 101);
    CHECK(std::abs(integrate(unit, unit.sample([](const Point& x) { return x[0]; })) - 0.5) <= 1e-12);
}

TEST_CASE("singular integrand: Richardson extrapolation recovers 4") {
    // int_{-1}^{1} |x|^{-1/2} dx = 4; the node at 0 is dropped, so the error is
    // dominated by a c h^{1/2} term.
    auto quad = [](int N) {
        const Grid g = build_grid(Domain::interval(-1.0, 1.0), N);
        return integrate(g, g.sample([](const Point& x) { return x[0] == 0.0 ? 0.0 : 1.0 / std::sqrt(std::abs(x[0])); }));
    };
    const double coarse = quad(201);
    const double fine = quad(401);
    const double r = std::sqrt(2.0);
    const double extrapolated = (r * fine - coarse) / (r - 1.0);
    CHECK(std::abs(fine - 4.0) > 0.05);
    CHECK(std::abs(extrapolated - 4.0) < 0.01);
}

TEST_CASE("refinement consistency for a smooth integrand") {
    auto quad = [](int N) {
        const Grid g = build_grid(Domain::interval(-1.0, 1.0), N);
        return integrate(g, g.sample([](const Point& x) { return std::cos(3.0 * x[0]); }));
    };
    const double exact = 2.0 * std::sin(3.0) / 3.0;
    double previous = std::abs(quad(17) - exact);
    for (int N : {33, 65, 129}) {
        const double err = std::abs(quad(N) - exact);
        CHECK(err < previous);
        previous = err;
    }
}

TEST_CASE("shrink_domain") {
    CHECK(shrink_domain(Domain::interval(-1.0, 1.0), 0.25) == Domain::interval(-0.75, 0.75));
    CHECK(shrink_domain(Domain::interval(-1.0, 1.0), 0.0) == Domain::interval(-1.0, 1.0));
    const Domain square = shrink_domain(Domain::box({0.0, 1.0}, {0.0, 1.0}), 0.4);
    CHECK(square.axis(0).lower == Approx(0.4));
    CHECK(square.axis(0).upper == Approx(0.6));
    CHECK(square.axis(1).lower == Approx(0.4));
    CHECK(square.axis(1).upper == Approx(0.6));
    CHECK_THROWS(shrink_domain(Domain::interval(-1.0, 1.0), 1.0));
}

TEST_CASE("exhaustion sequence") {
    const UnboundedLine line{{-1.0, 1.0}, {2.0, 3.0, 4.0}};
    const auto seq = exhaustion_sequence(line, 3);
    REQUIRE(seq.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(seq[k].axis(0).lower == Approx(-static_cast<double>(k + 2)));
        CHECK(seq[k].axis(0).upper == Approx(static_cast<double>(k + 2)));
        CHECK(seq[k].is_truncation());
        if (k > 0)
            CHECK(seq[k].contains(seq[k - 1]));
    }
    CHECK_THROWS_AS(exhaustion_sequence(line, 1), PreconditionError);
    CHECK_THROWS_AS(exhaustion_sequence(UnboundedLine{{-5.0, 5.0}, {2.0, 3.0}}, 2), PreconditionError);
    CHECK_THROWS_AS(exhaustion_sequence(UnboundedLine{{-1.0, 1.0}, {3.0, 2.0}}, 2), PreconditionError);
}

TEST_CASE("torus displacement uses the minimal image") {
    const Domain torus = Domain::interval(0.0, 1.0, Geometry::torus);
    CHECK(torus.displacement({0.95, 0.0}, {0.05, 0.0})[0] == Approx(-0.1));
    CHECK(torus.distance({0.05, 0.0}, {0.95, 0.0}) == Approx(0.1));
    const Domain line = Domain::interval(0.0, 1.0);
    CHECK(line.displacement({0.95, 0.0}, {0.05, 0.0})[0] == Approx(0.9));
    CHECK(line.distance_to_boundary({0.3, 0.0}) == Approx(0.3));
}

TEST_CASE("measure weights flag degenerate nodes") {
    const Grid grid = build_grid(Domain::interval(-1.0, 1.0), 5);
    Eigen::VectorXd g(5);
    g << 1.0, 0.5, 0.0, 0.5, 1.0;
    const MeasureWeights m = measure_weights(grid, g, 1e-8);
    CHECK(m.degenerate[2]);
    CHECK_FALSE(m.degenerate[1]);
    CHECK(m.dmu[2] == 0.0);
    CHECK(m.dmu[1] == Approx(1.0));
}
