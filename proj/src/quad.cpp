#include "nlsist/quad.hpp"

#include <cmath>

#include "nlsist/errors.hpp"

namespace nlsist {

namespace {

Complex simpson_rec(const std::function<Complex(double)>& f, double a, double b,
                    Complex fa, Complex fm, Complex fb, Complex whole, double tol,
                    int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Complex flm = f(lm);
    const Complex frm = f(rm);
    const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-14 * (1.0 + std::abs(m)))
        return left + right + delta / 15.0;
    if (depth >= max_depth)
        throw NumericalError("quadrature", "adaptive quadrature hit the depth limit");
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b,
                         double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0};
    const double m = 0.5 * (a + b);
    const Complex fa = f(a), fm = f(m), fb = f(b);
    const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, 0, max_depth);
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n != y_.size() || n < 3)
        throw ValidationError("invalid-grid", "spline needs at least 3 nodes");
    // natural spline: tridiagonal solve for second derivatives
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double mu = h0 / (h0 + h1);
        const double lam = 1.0 - mu;
        const double rhs =
            6.0 / (h0 + h1) * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        const double denom = 2.0 - mu * c[i - 1];
        c[i] = lam / denom;
        d[i] = (rhs - mu * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = d[i] - c[i] * m_[i + 1];
        if (i == 1) break;
    }
}

double CubicSpline::operator()(double t) const {
    if (t <= x_.front()) return y_.front();
    if (t >= x_.back()) return y_.back();
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (x_[mid] <= t ? lo : hi) = mid;
    }
    const double h = x_[hi] - x_[lo];
    const double A = (x_[hi] - t) / h;
    const double B = 1.0 - A;
    return A * y_[lo] + B * y_[hi] +
           ((A * A * A - A) * m_[lo] + (B * B * B - B) * m_[hi]) * h * h / 6.0;
}

} // namespace nlsist
