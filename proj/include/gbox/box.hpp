#pragma once

#include <cmath>

#include "gbox/angles.hpp"
#include "gbox/errors.hpp"
#include "gbox/linalg.hpp"

namespace gbox {

/// Minimum edge length; shorter edges raise DegenerateBox instead of being
/// clamped, so covariances stay invertible.
inline constexpr double kMinEdge = 1e-6;

/// Angle convention of a rotated box.
///
/// OpenCv: theta in [-pi/2, 0] is the angle between the w edge and the x
/// axis. The interval is closed at both ends: theta = 0 and theta = -pi/2
/// are the two equivalent axis-aligned forms (they share one Gaussian).
/// LongEdge: theta in [-pi/2, pi/2) is the angle of the long edge (w >= h).
enum class BoxDefinition { OpenCv, LongEdge };

/// Rotated 2-D box: center, edge lengths, rotation of the w edge, convention.
struct RBox2D {
    double x = 0.0;
    double y = 0.0;
    double w = 1.0;
    double h = 1.0;
    double theta = 0.0;
    BoxDefinition def = BoxDefinition::LongEdge;
};

/// Yaw-only 3-D box; w, h span the BEV footprint, l is the vertical extent.
struct RBox3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double w = 1.0;
    double h = 1.0;
    double l = 1.0;
    double theta = 0.0;
};

using Cube3D = RBox3D;

/// Anchor box; theta_a is 0 for the horizontal anchors used throughout.
struct AnchorBox {
    double x = 0.0;
    double y = 0.0;
    double w = 1.0;
    double h = 1.0;
    double theta = 0.0;
};

template <int N>
struct Gaussian {
    Vec<N> mu;
    Mat<N> sigma;
};

using Gaussian2 = Gaussian<2>;
using Gaussian3 = Gaussian<3>;

inline void require_edges(double w, double h) {
    if (!(w >= kMinEdge) || !(h >= kMinEdge))
        throw DegenerateBox("box edge below minimum length 1e-6");
}

inline void require_edges(const RBox2D& b) { require_edges(b.w, b.h); }

inline void require_edges(const RBox3D& b) {
    require_edges(b.w, b.h);
    if (!(b.l >= kMinEdge)) throw DegenerateBox("box edge below minimum length 1e-6");
}

inline bool angle_in_range(double theta, BoxDefinition def, double tol = 1e-12) {
    if (def == BoxDefinition::OpenCv)
        return theta >= -kHalfPi - tol && theta <= tol;
    return theta >= -kHalfPi - tol && theta < kHalfPi + tol;
}

inline bool is_valid(const RBox2D& b) {
    if (!(b.w >= kMinEdge) || !(b.h >= kMinEdge)) return false;
    if (!angle_in_range(b.theta, b.def)) return false;
    if (b.def == BoxDefinition::LongEdge && b.w < b.h - 1e-12) return false;
    return true;
}

/// Canonicalize a box into its own definition's range. The rectangle (vertex
/// set) is preserved; only the (w, h, theta) parameterization may change.
inline RBox2D normalized(const RBox2D& b) {
    require_edges(b);
    RBox2D r = b;
    if (b.def == BoxDefinition::LongEdge) {
        if (r.w < r.h) {
            std::swap(r.w, r.h);
            r.theta += kHalfPi;
        }
        r.theta = wrap_to_half_pi(r.theta);
    } else {
        const double a = wrap_to_half_pi(r.theta);
        if (a > 0.0) {
            std::swap(r.w, r.h);
            r.theta = a - kHalfPi;
        } else {
            r.theta = a;
        }
    }
    return r;
}

/// Convert between the two angle conventions; the vertex set is unchanged.
inline RBox2D convert_definition(const RBox2D& box, BoxDefinition target) {
    const RBox2D b = normalized(box);
    if (b.def == target) return b;
    RBox2D r = b;
    r.def = target;
    if (target == BoxDefinition::LongEdge) {
        if (b.w >= b.h) {
            // already long-edge-first
        } else {
            std::swap(r.w, r.h);
            r.theta = b.theta + kHalfPi;
        }
        r.theta = wrap_to_half_pi(r.theta);
    } else {
        if (b.theta >= -kHalfPi && b.theta < 0.0) {
            // angle already in the OpenCV range
        } else {
            std::swap(r.w, r.h);
            r.theta = b.theta - kHalfPi;
        }
    }
    return r;
}

/// Box -> Gaussian: mu = center, sigma = R diag(w^2/4, h^2/4) R^T.
/// Total in theta; equivalent parameterizations map to the same Gaussian.
inline Gaussian2 to_gaussian(const RBox2D& box) {
    require_edges(box);
    const double c = std::cos(box.theta), s = std::sin(box.theta);
    const double a = box.w * box.w / 4.0;
    const double b = box.h * box.h / 4.0;
    Gaussian2 g;
    g.mu[0] = box.x;
    g.mu[1] = box.y;
    g.sigma(0, 0) = a * c * c + b * s * s;
    g.sigma(0, 1) = (a - b) * c * s;
    g.sigma(1, 0) = g.sigma(0, 1);
    g.sigma(1, 1) = a * s * s + b * c * c;
    return g;
}

inline Gaussian3 to_gaussian(const RBox3D& cube) {
    require_edges(cube);
    const double c = std::cos(cube.theta), s = std::sin(cube.theta);
    const double a = cube.w * cube.w / 4.0;
    const double b = cube.h * cube.h / 4.0;
    Gaussian3 g;
    g.mu[0] = cube.x;
    g.mu[1] = cube.y;
    g.mu[2] = cube.z;
    g.sigma(0, 0) = a * c * c + b * s * s;
    g.sigma(0, 1) = (a - b) * c * s;
    g.sigma(1, 0) = g.sigma(0, 1);
    g.sigma(1, 1) = a * s * s + b * c * c;
    g.sigma(2, 2) = cube.l * cube.l / 4.0;
    return g;
}

/// Gaussian -> box via eigendecomposition. Isotropic covariances (eigenvalue
/// gap <= 1e-9) lose orientation and decode as theta = 0 with w = h.
inline RBox2D from_gaussian(const Gaussian2& g, BoxDefinition target) {
    require_spd(g.sigma, 1e-12);
    const Eigen2 e = sym_eigen(g.sigma);
    if (e.lambda_min <= 0.0) throw NonSpd("covariance is not positive definite");
    RBox2D r;
    r.x = g.mu[0];
    r.y = g.mu[1];
    r.def = target;
    if (e.lambda_max - e.lambda_min <= 1e-9) {
        const double edge = 2.0 * std::sqrt(0.5 * (e.lambda_max + e.lambda_min));
        r.w = edge;
        r.h = edge;
        r.theta = 0.0;
        return r;
    }
    const double major = 2.0 * std::sqrt(e.lambda_max);
    const double minor = 2.0 * std::sqrt(e.lambda_min);
    const double alpha = wrap_to_half_pi(e.angle_max);
    if (target == BoxDefinition::LongEdge) {
        r.w = major;
        r.h = minor;
        r.theta = alpha;
    } else if (alpha <= 0.0) {
        r.w = major;
        r.h = minor;
        r.theta = alpha;
    } else {
        r.w = minor;
        r.h = major;
        r.theta = alpha - kHalfPi;
    }
    return r;
}

}  // namespace gbox
