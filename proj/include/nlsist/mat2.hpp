#pragma once

#include <cmath>
#include <complex>

namespace nlsist {

using Complex = std::complex<double>;

// Small fixed-size complex 2x2 matrix and 2-vector. Used by the transfer-matrix
// integrator and the contour collocation solver where Eigen would be overkill
// in inner loops.
struct Vec2 {
    Complex a{0.0, 0.0};
    Complex b{0.0, 0.0};
};

struct Mat2 {
    Complex m11{0.0, 0.0}, m12{0.0, 0.0};
    Complex m21{0.0, 0.0}, m22{0.0, 0.0};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }

    Mat2 operator+(const Mat2& o) const {
        return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
    }
    Mat2 operator*(const Mat2& o) const {
        return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
                m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
    }
    Vec2 operator*(const Vec2& v) const {
        return {m11 * v.a + m12 * v.b, m21 * v.a + m22 * v.b};
    }
    Mat2 operator*(Complex s) const { return {s * m11, s * m12, s * m21, s * m22}; }

    Complex det() const { return m11 * m22 - m12 * m21; }
    Complex trace() const { return m11 + m22; }

    Mat2 inverse() const {
        const Complex d = det();
        return {m22 / d, -m12 / d, -m21 / d, m11 / d};
    }

    // max absolute entry
    double norm_inf() const {
        return std::max(std::max(std::abs(m11), std::abs(m12)),
                        std::max(std::abs(m21), std::abs(m22)));
    }
};

inline Mat2 operator*(Complex s, const Mat2& m) { return m * s; }

inline Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }

// exp(M) for traceless M via Cayley-Hamilton: M^2 = -det(M) I, hence
// exp(M) = cos(w) I + sinc(w) M with w = sqrt(det M) (branch irrelevant,
// cos and sinc are even).
inline Mat2 exp_traceless(const Mat2& m) {
    const Complex w = std::sqrt(m.det());
    Complex c, s; // cos(w), sin(w)/w
    if (std::abs(w) < 1e-8) {
        const Complex w2 = w * w;
        c = 1.0 - w2 / 2.0 + w2 * w2 / 24.0;
        s = 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
    } else {
        c = std::cos(w);
        s = std::sin(w) / w;
    }
    Mat2 r = m * s;
    r.m11 += c;
    r.m22 += c;
    return r;
}

} // namespace nlsist
