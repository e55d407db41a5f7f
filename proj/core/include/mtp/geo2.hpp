#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace mtp {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }

    Vec2 normalized() const {
        double n = norm();
        if (n == 0.0) throw std::domain_error("Vec2::normalized: zero vector");
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Dense 2x2 matrix, row-major. Small enough that everything is by value.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }

    Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }

    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    Mat2 sym() const { return {a11, 0.5 * (a12 + a21), 0.5 * (a12 + a21), a22}; }

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    double norm_inf() const {
        return std::max(std::abs(a11) + std::abs(a12), std::abs(a21) + std::abs(a22));
    }
    double max_abs() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)), std::max(std::abs(a21), std::abs(a22)));
    }

    bool is_symmetric(double tol) const { return std::abs(a12 - a21) <= tol; }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

/// Eigenvalues of a symmetric 2x2 matrix, ascending. Uses the off-diagonal mean,
/// so slightly asymmetric inputs are symmetrized first.
inline std::array<double, 2> sym_eigenvalues(const Mat2& m) {
    double b = 0.5 * (m.a12 + m.a21);
    double mean = 0.5 * (m.a11 + m.a22);
    double d = std::hypot(0.5 * (m.a11 - m.a22), b);
    return {mean - d, mean + d};
}

/// PSD test with a relative floor: eigenvalues above -tol*(1+max|entry|) count as nonnegative.
inline bool is_psd(const Mat2& m, double tol = 1e-12) {
    double floor = -tol * (1.0 + m.max_abs());
    return sym_eigenvalues(m)[0] >= floor;
}

}  // namespace mtp
