#pragma once

#include <cmath>

#include "gbox/angles.hpp"
#include "gbox/box.hpp"
#include "gbox/errors.hpp"

namespace gbox {

enum class AngleEncoding { DirectAngle, SinCos };

/// Anchor-relative regression targets. The angle part is either the wrapped
/// offset t_theta (DirectAngle) or the unit pair (t_sin, t_cos) of the
/// anchor-relative angle (SinCos).
struct OffsetEncoding {
    double tx = 0.0;
    double ty = 0.0;
    double tw = 0.0;
    double th = 0.0;
    AngleEncoding mode = AngleEncoding::DirectAngle;
    double t_theta = 0.0;
    double t_sin = 0.0;
    double t_cos = 1.0;
};

/// Scale a raw (sin, cos) prediction onto the unit circle.
inline void normalize_sin_cos(double& s, double& c) {
    const double n = std::hypot(s, c);
    if (!(n > 0.0)) throw InvalidConfig("sin/cos pair has zero magnitude");
    s /= n;
    c /= n;
}

inline OffsetEncoding encode_offsets(const RBox2D& box, const AnchorBox& anchor,
                                     AngleEncoding mode) {
    require_edges(box);
    require_edges(anchor.w, anchor.h);
    OffsetEncoding e;
    e.tx = (box.x - anchor.x) / anchor.w;
    e.ty = (box.y - anchor.y) / anchor.h;
    e.tw = std::log(box.w / anchor.w);
    e.th = std::log(box.h / anchor.h);
    e.mode = mode;
    const double rel = box.theta - anchor.theta;
    if (mode == AngleEncoding::DirectAngle) {
        e.t_theta = wrap_to_pi(rel);
    } else {
        e.t_sin = std::sin(rel);
        e.t_cos = std::cos(rel);
        normalize_sin_cos(e.t_sin, e.t_cos);
    }
    return e;
}

/// Inverse of encode_offsets. The decoded box is not canonicalized (that
/// would break the encode/decode round trip); `def` only tags the result.
inline RBox2D decode_offsets(const OffsetEncoding& e, const AnchorBox& anchor,
                             BoxDefinition def = BoxDefinition::LongEdge) {
    RBox2D b;
    b.x = e.tx * anchor.w + anchor.x;
    b.y = e.ty * anchor.h + anchor.y;
    b.w = anchor.w * std::exp(e.tw);
    b.h = anchor.h * std::exp(e.th);
    b.def = def;
    if (e.mode == AngleEncoding::DirectAngle) {
        b.theta = anchor.theta + e.t_theta;
    } else {
        b.theta = anchor.theta + std::atan2(e.t_sin, e.t_cos);
    }
    return b;
}

}  // namespace gbox
