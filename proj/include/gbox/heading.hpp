#pragma once

#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "gbox/angles.hpp"
#include "gbox/box.hpp"
#include "gbox/errors.hpp"

namespace gbox {

/// Predicted heading vector, unnormalized.
struct HeadingVector {
    double dx = 0.0;
    double dy = 0.0;
};

struct PostProcConfig {
    double ratio_threshold = 1.1;  ///< footprints within 10% of square count as square
    std::set<std::string> long_side_classes = {"vehicle", "cyclist"};
};

/// True iff the BEV footprint is square-like: 1/r < w/h < r.
inline bool is_square_like(const RBox3D& cube, double r) {
    require_edges(cube);
    if (!(r > 1.0)) throw InvalidConfig("ratio threshold must exceed 1");
    const double ratio = cube.w / cube.h;
    return ratio > 1.0 / r && ratio < r;
}

namespace detail {

/// Round to nearest with ties to even (what "select the closer heading"
/// requires; floor would pick the wrong multiple half the time).
inline long long nearest_int(double x) {
    return static_cast<long long>(std::llround(std::nearbyint(x)));
}

inline int positive_mod(long long n, int m) {
    return static_cast<int>(((n % m) + m) % m);
}

}  // namespace detail

/// Heading disambiguation for Gaussian-based 3-D detections.
///
/// Note the angle decode is atan2(d_x, d_y) — arguments in that order, so
/// the angle is measured from the +y axis, unlike the usual atan2(y, x).
///
/// Square-like cubes take the decoded heading directly (the Gaussian lost
/// the orientation); long-side classes snap theta to the pi-multiple closest
/// to the decoded heading; all other cubes snap to the closest pi/2 multiple,
/// swapping w and h on odd quarter turns to keep the footprint unchanged.
inline RBox3D post_process_heading(const RBox3D& cube, const HeadingVector& hv,
                                   const std::string& cls, const PostProcConfig& cfg) {
    require_edges(cube);
    if (std::hypot(hv.dx, hv.dy) < 1e-9) throw ZeroHeading("heading vector is (near) zero");
    const double theta_d = std::atan2(hv.dx, hv.dy);
    RBox3D out = cube;
    if (is_square_like(cube, cfg.ratio_threshold)) {
        out.theta = theta_d;
        out.w = std::max(cube.w, cube.h);
        out.h = out.w;
    }
    if (cfg.long_side_classes.count(cls) > 0) {
        // heading is constrained to the long edge of the BEV footprint
        if (out.w < out.h) {
            out.theta += kHalfPi;
            std::swap(out.w, out.h);
        }
        const long long n = detail::nearest_int((theta_d - out.theta) / kPi);
        out.theta = limit_period(out.theta + kPi * detail::positive_mod(n, 2), -kPi, kTwoPi);
    } else {
        const long long n = detail::nearest_int((theta_d - out.theta) / kHalfPi);
        out.theta =
            limit_period(out.theta + kHalfPi * detail::positive_mod(n, 4), -kPi, kTwoPi);
        if (detail::positive_mod(n, 2) == 1) std::swap(out.w, out.h);
    }
    return out;
}

}  // namespace gbox
