#include "nonlocal/profiles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nonlocal/error.hpp"
#include "quadrature.hpp"

namespace nonlocal {

namespace {

constexpr double pi = std::numbers::pi;

void require_dimension(int dimension) {
    if (dimension != 1 && dimension != 2)
        throw InvalidArgument("kernel dimension must be 1 or 2");
}

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw InvalidArgument(std::string(what) + " must be positive and finite");
}

double radius_from(const Point& x, const Point& center) {
    return std::hypot(x[0] - center[0], x[1] - center[1]);
}

} // namespace

KernelJ::KernelJ(int dimension, KernelShape kind, Evaluator f, Radial radial, double support, double mass)
    : dimension_(dimension), kind_(kind), eval_(std::move(f)), radial_(std::move(radial)), support_(support),
      declared_mass_(mass) {}

KernelJ KernelJ::uniform(int dimension, double support, double mass) {
    require_dimension(dimension);
    require_positive(support, "kernel support");
    const double v = dimension == 1 ? mass / (2.0 * support) : mass / (pi * support * support);
    auto k = radial(dimension, [v, support](double r) { return r <= support ? v : 0.0; }, support, mass);
    k.kind_ = KernelShape::uniform;
    return k;
}

KernelJ KernelJ::triangular(int dimension, double support, double mass) {
    require_dimension(dimension);
    require_positive(support, "kernel support");
    const double j0 = dimension == 1 ? mass / support : 3.0 * mass / (pi * support * support);
    auto k = radial(
        dimension, [j0, support](double r) { return r < support ? j0 * (1.0 - r / support) : 0.0; }, support, mass);
    k.kind_ = KernelShape::triangular;
    return k;
}

KernelJ KernelJ::cosine_bump(int dimension, double support, double mass) {
    require_dimension(dimension);
    require_positive(support, "kernel support");
    const double scale =
        dimension == 1 ? mass / (2.0 * support) : mass / (support * support * (pi - 4.0 / pi));
    auto k = radial(
        dimension,
        [scale, support](double r) { return r < support ? scale * (1.0 + std::cos(pi * r / support)) : 0.0; },
        support, mass);
    k.kind_ = KernelShape::cosine_bump;
    return k;
}

KernelJ KernelJ::shape(KernelShape shape, int dimension, double support, double mass) {
    switch (shape) {
    case KernelShape::uniform: return uniform(dimension, support, mass);
    case KernelShape::triangular: return triangular(dimension, support, mass);
    case KernelShape::cosine_bump: return cosine_bump(dimension, support, mass);
    case KernelShape::custom: break;
    }
    throw InvalidArgument("custom kernels need an evaluator");
}

KernelJ KernelJ::radial(int dimension, Radial profile, double support, double declared_mass) {
    require_dimension(dimension);
    require_positive(support, "kernel support");
    Evaluator f = [profile, dimension](const Point& z) { return profile(norm(z, dimension)); };
    return KernelJ(dimension, KernelShape::custom, std::move(f), std::move(profile), support, declared_mass);
}

KernelJ KernelJ::custom(int dimension, Evaluator f, double support, double declared_mass) {
    require_dimension(dimension);
    require_positive(support, "kernel support");
    return KernelJ(dimension, KernelShape::custom, std::move(f), {}, support, declared_mass);
}

double KernelJ::operator()(const Point& z) const { return eval_(z); }

double KernelJ::value_at_origin() const { return eval_(Point{0.0, 0.0}); }

double KernelJ::sup_norm() const {
    double best = value_at_origin();
    constexpr int samples = 200;
    for (int i = -samples; i <= samples; ++i) {
        const double u = support_ * i / samples;
        if (dimension_ == 1) {
            best = std::max(best, eval_(Point{u, 0.0}));
            continue;
        }
        for (int j = -samples; j <= samples; j += 4)
            best = std::max(best, eval_(Point{u, support_ * j / samples}));
    }
    return best;
}

double KernelJ::numeric_mass() const {
    const double s = support_;
    if (radial_) {
        if (dimension_ == 1)
            return 2.0 * detail::composite_gauss(radial_, 0.0, s, {}, 16);
        return 2.0 * pi * detail::composite_gauss([this](double r) { return r * radial_(r); }, 0.0, s, {}, 16);
    }
    return box_mass(Point{-s, -s}, Point{s, s});
}

double KernelJ::box_mass(const Point& lower, const Point& upper) const {
    const double s = support_;
    const double x0 = std::max(lower[0], -s);
    const double x1 = std::min(upper[0], s);
    if (!(x1 > x0))
        return 0.0;
    if (dimension_ == 1)
        return detail::composite_gauss([this](double x) { return eval_(Point{x, 0.0}); }, x0, x1, {0.0}, 8);

    const double y0 = std::max(lower[1], -s);
    const double y1 = std::min(upper[1], s);
    if (!(y1 > y0))
        return 0.0;
    auto inner = [&](double x) {
        double lo = y0;
        double hi = y1;
        if (radial_) {
            // Clip to the support disc so the inner integrand has no kink at r = s.
            const double half = std::sqrt(std::max(0.0, s * s - x * x));
            lo = std::max(lo, -half);
            hi = std::min(hi, half);
        }
        if (!(hi > lo))
            return 0.0;
        return detail::composite_gauss([&](double y) { return eval_(Point{x, y}); }, lo, hi, {0.0}, 4);
    };
    return detail::composite_gauss(inner, x0, x1, {0.0}, 8);
}

void KernelJ::validate() const {
    if (!(value_at_origin() > 0.0))
        throw InvalidArgument("kernel must satisfy J(0) > 0");
    const double s = support_;
    constexpr int samples = 120;
    for (int i = -samples; i <= samples; ++i) {
        const double u = 1.5 * s * i / samples;
        for (int j = (dimension_ == 1 ? 0 : -samples); j <= (dimension_ == 1 ? 0 : samples); j += 3) {
            const Point z{u, dimension_ == 1 ? 0.0 : 1.5 * s * j / samples};
            const double v = eval_(z);
            if (!std::isfinite(v) || v < 0.0)
                throw InvalidArgument("kernel takes a negative or non-finite value");
            if (norm(z, dimension_) > s * (1.0 + 1e-12) && v != 0.0)
                throw InvalidArgument("kernel is nonzero outside its declared support");
        }
    }
    const double mass = numeric_mass();
    if (std::abs(mass - declared_mass_) > 1e-3)
        throw InvalidArgument("kernel mass " + std::to_string(mass) + " differs from declared " +
                              std::to_string(declared_mass_));
}

DispersalG DispersalG::constant(double value) {
    require_positive(value, "constant g");
    DispersalG g;
    g.kind_ = DispersalShape::constant;
    g.eval_ = [value](const Point&) { return value; };
    g.alpha_ = value;
    g.beta_ = value;
    return g;
}

DispersalG DispersalG::affine(double intercept, double slope, const Domain& domain) {
    const auto& ax = domain.axis(0);
    const double lo = intercept + slope * ax.lower;
    const double hi = intercept + slope * ax.upper;
    DispersalG g;
    g.kind_ = DispersalShape::affine;
    g.eval_ = [intercept, slope](const Point& x) { return intercept + slope * x[0]; };
    g.alpha_ = std::min(lo, hi);
    g.beta_ = std::max(lo, hi);
    if (!(g.alpha_ > 0.0))
        throw InvalidArgument("affine g must stay positive on the domain");
    return g;
}

DispersalG DispersalG::power_degenerate(double exponent, double cap, Point center) {
    if (!(exponent > 0.0 && exponent < 1.0))
        throw InvalidArgument("degenerate g exponent must lie in (0, 1) so that 1/g^n is in L^p, p > 1");
    require_positive(cap, "degenerate g cap");
    DispersalG g;
    g.kind_ = DispersalShape::power_degenerate;
    g.eval_ = [exponent, cap, center](const Point& x) {
        return std::min(std::pow(radius_from(x, center), exponent), cap);
    };
    g.alpha_ = 0.0;
    g.beta_ = cap;
    g.degenerate_ = true;
    g.exponent_ = exponent;
    g.zero_set_ = {center};
    return g;
}

DispersalG DispersalG::custom(Evaluator f, double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta >= alpha))
        throw InvalidArgument("custom g needs 0 < alpha <= beta");
    DispersalG g;
    g.eval_ = std::move(f);
    g.alpha_ = alpha;
    g.beta_ = beta;
    return g;
}

std::optional<double> DispersalG::lp_exponent(int) const {
    if (!degenerate_)
        return std::nullopt;
    // |x|^(-e n) is locally in L^p iff p < 1/e in every dimension; take the midpoint of (1, 1/e).
    return 0.5 * (1.0 + 1.0 / exponent_);
}

void DispersalG::validate(const Grid& grid) const {
    const double tol = 1e-12;
    for (const auto& x : grid.nodes()) {
        const double v = eval_(x);
        if (!std::isfinite(v))
            throw InvalidArgument("g is not finite at a grid node");
        if (!degenerate_) {
            if (v < alpha_ - tol || v > beta_ + tol)
                throw InvalidArgument("sampled g leaves its declared bounds [alpha, beta]");
            continue;
        }
        if (v < 0.0 || v > beta_ + tol)
            throw InvalidArgument("sampled degenerate g is negative or above its cap");
        if (v == 0.0) {
            bool declared = false;
            for (const auto& z : zero_set_)
                declared = declared || radius_from(x, z) <= tol;
            if (!declared)
                throw InvalidArgument("g vanishes outside its declared zero set");
        }
    }
}

CoefficientA CoefficientA::constant(double value) {
    CoefficientA a;
    a.kind_ = CoefficientShape::constant;
    a.eval_ = [value](const Point&) { return value; };
    a.sigma_ = value;
    a.plateau_ = Plateau{{0.0, 0.0}, std::numeric_limits<double>::infinity()};
    return a;
}

CoefficientA CoefficientA::quadratic_well(double sigma, double c, Point center) {
    auto a = power_contact(sigma, 2.0, c, center);
    a.kind_ = CoefficientShape::quadratic_well;
    return a;
}

CoefficientA CoefficientA::power_contact(double sigma, double gamma, double c, Point center) {
    require_positive(gamma, "contact exponent");
    require_positive(c, "contact constant");
    CoefficientA a;
    a.kind_ = CoefficientShape::power_contact;
    a.eval_ = [sigma, gamma, c, center](const Point& x) { return sigma - c * std::pow(radius_from(x, center), gamma); };
    a.sigma_ = sigma;
    a.maximizers_ = {center};
    a.contact_ = ContactProfile{gamma, c};
    return a;
}

CoefficientA CoefficientA::plateau(double sigma, double radius, double c, double gamma, Point center) {
    require_positive(radius, "plateau radius");
    require_positive(c, "plateau falloff constant");
    require_positive(gamma, "plateau falloff exponent");
    CoefficientA a;
    a.kind_ = CoefficientShape::plateau;
    a.eval_ = [sigma, radius, c, gamma, center](const Point& x) {
        return sigma - c * std::pow(std::max(0.0, radius_from(x, center) - radius), gamma);
    };
    a.sigma_ = sigma;
    a.maximizers_ = {center};
    a.plateau_ = Plateau{center, radius};
    return a;
}

CoefficientA CoefficientA::saturating_well(double sigma, double c, Point center) {
    require_positive(c, "well depth");
    CoefficientA a;
    a.kind_ = CoefficientShape::saturating_well;
    a.eval_ = [sigma, c, center](const Point& x) {
        const double r2 = std::pow(radius_from(x, center), 2);
        return sigma - c * r2 / (1.0 + r2);
    };
    a.sigma_ = sigma;
    a.maximizers_ = {center};
    a.contact_ = ContactProfile{2.0, c};
    return a;
}

CoefficientA CoefficientA::custom(Evaluator f, double sigma, std::optional<ContactProfile> contact,
                                  std::optional<Plateau> plateau) {
    CoefficientA a;
    a.eval_ = std::move(f);
    a.sigma_ = sigma;
    a.contact_ = contact;
    a.plateau_ = plateau;
    return a;
}

void CoefficientA::validate(const Grid& grid) const {
    for (const auto& x : grid.nodes()) {
        const double v = eval_(x);
        if (!std::isfinite(v))
            throw InvalidArgument("a is not finite at a grid node");
        if (v > sigma_ + 1e-12)
            throw InvalidArgument("sampled a exceeds its declared supremum");
        if (plateau_ && radius_from(x, plateau_->center) < plateau_->radius && std::abs(v - sigma_) > 1e-12)
            throw InvalidArgument("a is not constant on its declared plateau");
    }
}

} // namespace nonlocal
