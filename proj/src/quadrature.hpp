#ifndef NONLOCAL_SRC_QUADRATURE_HPP
#define NONLOCAL_SRC_QUADRATURE_HPP

#include <algorithm>
#include <initializer_list>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace nonlocal::detail {

// Composite 20-point Gauss-Legendre on [a, b] with `pieces` equal panels per
// segment between consecutive breakpoints. Breakpoints outside (a, b) are ignored.
template <class F>
double composite_gauss(F&& f, double a, double b, std::initializer_list<double> breaks, int pieces = 4) {
    if (!(b > a))
        return 0.0;
    std::vector<double> cuts{a};
    for (double c : breaks)
        if (c > a && c < b)
            cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double width = (cuts[s + 1] - cuts[s]) / pieces;
        for (int p = 0; p < pieces; ++p) {
            const double lo = cuts[s] + p * width;
            total += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, lo + width);
        }
    }
    return total;
}

} // namespace nonlocal::detail

#endif
