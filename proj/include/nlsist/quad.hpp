#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "nlsist/types.hpp"

namespace nlsist {

// Adaptive Simpson quadrature with absolute tolerance, complex-valued
// integrand. Throws NumericalError("quadrature") if the depth limit is hit
// before the tolerance is met.
Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b,
                         double abs_tol, int max_depth = 48);

// Natural cubic spline through (x_i, y_i) with uniform or non-uniform knots.
// Evaluation outside the knot range clamps to the boundary value.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, m_; // knots, values, second derivatives
};

} // namespace nlsist
