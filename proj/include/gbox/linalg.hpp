#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "gbox/errors.hpp"

namespace gbox {

/// Fixed-size column vector, N = 2 or 3.
template <int N>
struct Vec {
    std::array<double, N> v{};

    double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
};

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <int N>
inline Vec<N> operator+(const Vec<N>& a, const Vec<N>& b) {
    Vec<N> r;
    for (int i = 0; i < N; ++i) r[i] = a[i] + b[i];
    return r;
}

template <int N>
inline Vec<N> operator-(const Vec<N>& a, const Vec<N>& b) {
    Vec<N> r;
    for (int i = 0; i < N; ++i) r[i] = a[i] - b[i];
    return r;
}

template <int N>
inline Vec<N> operator*(double s, const Vec<N>& a) {
    Vec<N> r;
    for (int i = 0; i < N; ++i) r[i] = s * a[i];
    return r;
}

template <int N>
inline double dot(const Vec<N>& a, const Vec<N>& b) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <int N>
inline double squared_norm(const Vec<N>& a) {
    return dot(a, a);
}

/// Fixed-size square matrix, row major.
template <int N>
struct Mat {
    std::array<double, static_cast<std::size_t>(N) * N> m{};

    double& operator()(int r, int c) { return m[static_cast<std::size_t>(r * N + c)]; }
    double operator()(int r, int c) const { return m[static_cast<std::size_t>(r * N + c)]; }

    static Mat identity() {
        Mat id;
        for (int i = 0; i < N; ++i) id(i, i) = 1.0;
        return id;
    }
};

using Mat2 = Mat<2>;
using Mat3 = Mat<3>;

template <int N>
inline Mat<N> operator+(const Mat<N>& a, const Mat<N>& b) {
    Mat<N> r;
    for (std::size_t i = 0; i < a.m.size(); ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
}

template <int N>
inline Mat<N> operator-(const Mat<N>& a, const Mat<N>& b) {
    Mat<N> r;
    for (std::size_t i = 0; i < a.m.size(); ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
}

template <int N>
inline Mat<N> operator*(double s, const Mat<N>& a) {
    Mat<N> r;
    for (std::size_t i = 0; i < a.m.size(); ++i) r.m[i] = s * a.m[i];
    return r;
}

template <int N>
inline Mat<N> operator*(const Mat<N>& a, const Mat<N>& b) {
    Mat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            for (int k = 0; k < N; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

template <int N>
inline Vec<N> operator*(const Mat<N>& a, const Vec<N>& x) {
    Vec<N> r;
    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (int k = 0; k < N; ++k) s += a(i, k) * x[k];
        r[i] = s;
    }
    return r;
}

template <int N>
inline Mat<N> transpose(const Mat<N>& a) {
    Mat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) r(i, j) = a(j, i);
    return r;
}

template <int N>
inline double trace(const Mat<N>& a) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += a(i, i);
    return s;
}

template <int N>
inline Mat<N> outer(const Vec<N>& a, const Vec<N>& b) {
    Mat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) r(i, j) = a[i] * b[j];
    return r;
}

template <int N>
inline double determinant(const Mat<N>& a) {
    if constexpr (N == 2) {
        return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    } else {
        static_assert(N == 3);
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
               a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
               a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    }
}

template <int N>
inline Mat<N> inverse(const Mat<N>& a) {
    const double det = determinant(a);
    if (det == 0.0 || !std::isfinite(det)) throw NonSpd("matrix is singular");
    Mat<N> r;
    if constexpr (N == 2) {
        const double inv = 1.0 / det;
        r(0, 0) = a(1, 1) * inv;
        r(0, 1) = -a(0, 1) * inv;
        r(1, 0) = -a(1, 0) * inv;
        r(1, 1) = a(0, 0) * inv;
    } else {
        static_assert(N == 3);
        const double inv = 1.0 / det;
        r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) * inv;
        r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) * inv;
        r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) * inv;
        r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) * inv;
        r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) * inv;
        r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) * inv;
        r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) * inv;
        r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) * inv;
        r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) * inv;
    }
    return r;
}

/// 2x2 planar rotation.
inline Mat2 rotation2(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Mat2 r;
    r(0, 0) = c;
    r(0, 1) = -s;
    r(1, 0) = s;
    r(1, 1) = c;
    return r;
}

/// 3x3 yaw rotation about the z axis.
inline Mat3 rotation3_yaw(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Mat3 r;
    r(0, 0) = c;
    r(0, 1) = -s;
    r(1, 0) = s;
    r(1, 1) = c;
    r(2, 2) = 1.0;
    return r;
}

template <int N>
inline bool is_symmetric(const Mat<N>& a, double tol = 1e-12) {
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    return true;
}

/// Sylvester criterion on leading principal minors.
template <int N>
inline bool is_positive_definite(const Mat<N>& a) {
    if (a(0, 0) <= 0.0) return false;
    const double m2 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if (m2 <= 0.0) return false;
    if constexpr (N == 3) {
        if (determinant(a) <= 0.0) return false;
    }
    return true;
}

template <int N>
inline void require_spd(const Mat<N>& a, double sym_tol = 1e-9) {
    if (!is_symmetric(a, sym_tol)) throw NonSpd("covariance is not symmetric");
    if (!is_positive_definite(a)) throw NonSpd("covariance is not positive definite");
}

struct Eigen2 {
    double lambda_max = 0.0;  ///< larger eigenvalue
    double lambda_min = 0.0;
    double angle_max = 0.0;  ///< direction of the lambda_max eigenvector
};

/// Closed-form eigendecomposition of a symmetric 2x2 matrix.
inline Eigen2 sym_eigen(const Mat2& a) {
    const double half_tr = 0.5 * (a(0, 0) + a(1, 1));
    const double half_diff = 0.5 * (a(0, 0) - a(1, 1));
    const double b = 0.5 * (a(0, 1) + a(1, 0));
    const double disc = std::hypot(half_diff, b);
    Eigen2 e;
    e.lambda_max = half_tr + disc;
    e.lambda_min = half_tr - disc;
    e.angle_max = 0.5 * std::atan2(2.0 * b, 2.0 * half_diff);
    return e;
}

struct Eigen3 {
    Vec3 values;   ///< unsorted
    Mat3 vectors;  ///< columns are the eigenvectors
};

/// Cyclic Jacobi iteration for a symmetric 3x3 matrix.
inline Eigen3 sym_eigen(const Mat3& input) {
    Mat3 a = input;
    Mat3 v = Mat3::identity();
    double scale = 1e-300;
    for (double e : a.m) scale += e * e;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) off += a(p, q) * a(p, q);
        if (off <= 1e-28 * scale) break;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = 0.5 * (a(q, q) - a(p, p)) / a(p, q);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Mat3 rot = Mat3::identity();
                rot(p, p) = c;
                rot(q, q) = c;
                rot(p, q) = s;
                rot(q, p) = -s;
                a = transpose(rot) * a * rot;
                v = v * rot;
            }
        }
    }
    Eigen3 e;
    for (int i = 0; i < 3; ++i) e.values[i] = a(i, i);
    e.vectors = v;
    return e;
}

/// Principal square root of an SPD matrix. 2x2 uses the closed form
/// sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)); 3x3 goes
/// through the eigendecomposition.
template <int N>
inline Mat<N> sym_sqrt(const Mat<N>& a) {
    if constexpr (N == 2) {
        const double det = determinant(a);
        if (det <= 0.0) throw NonSpd("sqrt of non-SPD matrix");
        const double s = std::sqrt(det);
        const double t = trace(a) + 2.0 * s;
        if (t <= 0.0) throw NonSpd("sqrt of non-SPD matrix");
        const double inv = 1.0 / std::sqrt(t);
        Mat2 r;
        r(0, 0) = (a(0, 0) + s) * inv;
        r(0, 1) = a(0, 1) * inv;
        r(1, 0) = a(1, 0) * inv;
        r(1, 1) = (a(1, 1) + s) * inv;
        return r;
    } else {
        static_assert(N == 3);
        const Eigen3 e = sym_eigen(a);
        for (int i = 0; i < 3; ++i)
            if (e.values[i] <= 0.0) throw NonSpd("sqrt of non-SPD matrix");
        Mat3 d;
        for (int i = 0; i < 3; ++i) d(i, i) = std::sqrt(e.values[i]);
        return e.vectors * d * transpose(e.vectors);
    }
}

/// Frobenius inner product.
template <int N>
inline double frobenius_dot(const Mat<N>& a, const Mat<N>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.m.size(); ++i) s += a.m[i] * b.m[i];
    return s;
}

template <int N>
inline double frobenius_norm(const Mat<N>& a) {
    return std::sqrt(frobenius_dot(a, a));
}

}  // namespace gbox
