#ifndef NONLOCAL_PROFILES_HPP
#define NONLOCAL_PROFILES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nonlocal/grid.hpp"

namespace nonlocal {

enum class KernelShape { uniform, triangular, cosine_bump, custom };

/// Dispersal kernel J: nonnegative, compactly supported in the ball of
/// radius `support`, J(0) > 0.
class KernelJ {
public:
    using Evaluator = std::function<double(const Point&)>;
    using Radial = std::function<double(double)>;

    static KernelJ uniform(int dimension, double support, double mass = 1.0);
    static KernelJ triangular(int dimension, double support, double mass = 1.0);
    static KernelJ cosine_bump(int dimension, double support, double mass = 1.0);
    static KernelJ shape(KernelShape shape, int dimension, double support, double mass = 1.0);

    // J(z) = profile(|z|). `profile` must vanish beyond `support`.
    static KernelJ radial(int dimension, Radial profile, double support, double declared_mass);
    static KernelJ custom(int dimension, Evaluator f, double support, double declared_mass);

    double operator()(const Point& z) const;
    int dimension() const noexcept { return dimension_; }
    double support() const noexcept { return support_; }
    double value_at_origin() const;
    double declared_mass() const noexcept { return declared_mass_; }
    KernelShape kind() const noexcept { return kind_; }
    bool is_radial() const noexcept { return static_cast<bool>(radial_); }

    // Sampled supremum over the support ball.
    double sup_norm() const;
    double numeric_mass() const;
    // Integral of J over the box prod_d [lower_d, upper_d] (clipped to the support).
    double box_mass(const Point& lower, const Point& upper) const;

    // Throws InvalidArgument if J < 0 somewhere, J(0) <= 0, J leaks outside
    // the support, or the numeric mass misses the declared one by > 1e-3.
    void validate() const;

private:
    KernelJ(int dimension, KernelShape kind, Evaluator f, Radial radial, double support, double mass);

    int dimension_;
    KernelShape kind_;
    Evaluator eval_;
    Radial radial_;
    double support_;
    double declared_mass_;
};

enum class DispersalShape { constant, affine, power_degenerate, custom };

/// Dispersal budget g. Regular mode: alpha <= g <= beta with alpha > 0.
/// Degenerate mode: g >= 0 vanishing only on a declared finite zero set,
/// with 1/g^n in L^p for the declared p > 1.
class DispersalG {
public:
    using Evaluator = std::function<double(const Point&)>;

    static DispersalG constant(double value);
    // g(x) = intercept + slope * x_0 on `domain`; bounds taken from the endpoints.
    static DispersalG affine(double intercept, double slope, const Domain& domain);
    // g(x) = min(|x - center|^exponent, cap); exponent in (0, 1).
    static DispersalG power_degenerate(double exponent, double cap, Point center = {0.0, 0.0});
    static DispersalG custom(Evaluator f, double alpha, double beta);

    double operator()(const Point& x) const { return eval_(x); }
    DispersalShape kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    bool degenerate() const noexcept { return degenerate_; }
    // Declared p with 1/g^n in L^p_loc (degenerate mode only).
    std::optional<double> lp_exponent(int dimension) const;
    const std::vector<Point>& zero_set() const noexcept { return zero_set_; }
    double exponent() const noexcept { return exponent_; }

    void validate(const Grid& grid) const;

private:
    DispersalShape kind_ = DispersalShape::custom;
    Evaluator eval_;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    bool degenerate_ = false;
    double exponent_ = 0.0;
    std::vector<Point> zero_set_;
};

enum class CoefficientShape { constant, quadratic_well, power_contact, plateau, saturating_well, custom };

// a(x) ~ sigma - c * d(x, Gamma)^gamma near the maximum set.
struct ContactProfile {
    double gamma;
    double constant;
};

// a == sigma on the ball of `radius` around `center` (infinite radius: everywhere).
struct Plateau {
    Point center;
    double radius;
};

/// Zero-order coefficient a = -b with its analytic metadata.
class CoefficientA {
public:
    using Evaluator = std::function<double(const Point&)>;

    static CoefficientA constant(double value);
    // sigma - c |x - center|^2
    static CoefficientA quadratic_well(double sigma, double c, Point center = {0.0, 0.0});
    // sigma - c |x - center|^gamma
    static CoefficientA power_contact(double sigma, double gamma, double c, Point center = {0.0, 0.0});
    // sigma - c max(0, |x - center| - radius)^gamma
    static CoefficientA plateau(double sigma, double radius, double c, double gamma, Point center = {0.0, 0.0});
    // sigma - c r^2 / (1 + r^2), r = |x - center|
    static CoefficientA saturating_well(double sigma, double c, Point center = {0.0, 0.0});
    static CoefficientA custom(Evaluator f, double sigma, std::optional<ContactProfile> contact = std::nullopt,
                               std::optional<Plateau> plateau = std::nullopt);

    double operator()(const Point& x) const { return eval_(x); }
    CoefficientShape kind() const noexcept { return kind_; }
    double sigma() const noexcept { return sigma_; }
    const std::vector<Point>& maximizers() const noexcept { return maximizers_; }
    const std::optional<ContactProfile>& contact() const noexcept { return contact_; }
    const std::optional<Plateau>& plateau_set() const noexcept { return plateau_; }

    void validate(const Grid& grid) const;

private:
    CoefficientShape kind_ = CoefficientShape::custom;
    Evaluator eval_;
    double sigma_ = 0.0;
    std::vector<Point> maximizers_;
    std::optional<ContactProfile> contact_;
    std::optional<Plateau> plateau_;
};

} // namespace nonlocal

#endif
