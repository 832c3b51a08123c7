#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gbox/box.hpp"
#include "gbox/linalg.hpp"

namespace gbox {

/// Counter-clockwise convex polygon; empty means empty region.
struct ConvexPolygon {
    std::vector<Vec2> vertices;
};

inline double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

/// Shoelace area; polygons with fewer than 3 vertices have area 0.
inline double polygon_area(const ConvexPolygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % v.size()];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::abs(twice);
}

/// Corner positions of a rotated box, counter-clockwise.
inline ConvexPolygon box_vertices(const RBox2D& box) {
    require_edges(box);
    const double c = std::cos(box.theta), s = std::sin(box.theta);
    const double hw = box.w / 2.0, hh = box.h / 2.0;
    ConvexPolygon poly;
    poly.vertices.reserve(4);
    const double lx[4] = {hw, -hw, -hw, hw};
    const double ly[4] = {hh, hh, -hh, -hh};
    for (int i = 0; i < 4; ++i) {
        Vec2 p;
        p[0] = box.x + lx[i] * c - ly[i] * s;
        p[1] = box.y + lx[i] * s + ly[i] * c;
        poly.vertices.push_back(p);
    }
    return poly;
}

/// Sutherland-Hodgman clipping of one convex polygon by another. Points
/// within 1e-12 of a clip edge count as inside so shared edges do not
/// produce spurious empty intersections.
inline ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip) {
    constexpr double kEdgeTol = 1e-12;
    std::vector<Vec2> output = subject.vertices;
    const auto& cv = clip.vertices;
    for (std::size_t e = 0; e < cv.size() && !output.empty(); ++e) {
        const Vec2 a = cv[e];
        const Vec2 b = cv[(e + 1) % cv.size()];
        const Vec2 dir = b - a;
        std::vector<Vec2> input;
        input.swap(output);
        const auto side = [&](const Vec2& p) { return cross(dir, p - a); };
        Vec2 prev = input.back();
        double prev_side = side(prev);
        for (const Vec2& cur : input) {
            const double cur_side = side(cur);
            const bool cur_in = cur_side >= -kEdgeTol;
            const bool prev_in = prev_side >= -kEdgeTol;
            if (cur_in != prev_in) {
                const double denom = prev_side - cur_side;
                if (std::abs(denom) > 0.0) {
                    const double t = prev_side / denom;
                    output.push_back(prev + t * (cur - prev));
                }
            }
            if (cur_in) output.push_back(cur);
            prev = cur;
            prev_side = cur_side;
        }
    }
    return ConvexPolygon{std::move(output)};
}

/// Exact IoU between two rotated rectangles.
inline double skew_iou_2d(const RBox2D& a, const RBox2D& b) {
    const ConvexPolygon pa = box_vertices(a);
    const ConvexPolygon pb = box_vertices(b);
    const double inter = polygon_area(clip_convex(pa, pb));
    const double area_a = a.w * a.h;
    const double area_b = b.w * b.h;
    const double uni = area_a + area_b - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

/// Yaw-only 3-D IoU: BEV polygon overlap times vertical overlap.
inline double iou_3d_yaw(const RBox3D& a, const RBox3D& b) {
    require_edges(a);
    require_edges(b);
    const RBox2D bev_a{a.x, a.y, a.w, a.h, a.theta, BoxDefinition::LongEdge};
    const RBox2D bev_b{b.x, b.y, b.w, b.h, b.theta, BoxDefinition::LongEdge};
    const double bev_inter = polygon_area(clip_convex(box_vertices(bev_a), box_vertices(bev_b)));
    const double z_lo = std::max(a.z - a.l / 2.0, b.z - b.l / 2.0);
    const double z_hi = std::min(a.z + a.l / 2.0, b.z + b.l / 2.0);
    const double z_overlap = std::max(0.0, z_hi - z_lo);
    const double inter = bev_inter * z_overlap;
    const double vol_a = a.w * a.h * a.l;
    const double vol_b = b.w * b.h * b.l;
    const double uni = vol_a + vol_b - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

/// Monte-Carlo IoU estimate by rasterizing the joint bounding region.
/// Deterministic for a fixed seed; used as a validation oracle.
inline double skew_iou_2d_monte_carlo(const RBox2D& a, const RBox2D& b,
                                      std::uint64_t samples, std::uint64_t seed) {
    const ConvexPolygon pa = box_vertices(a);
    const ConvexPolygon pb = box_vertices(b);
    double min_x = pa.vertices[0][0], max_x = min_x;
    double min_y = pa.vertices[0][1], max_y = min_y;
    for (const auto& poly : {pa, pb}) {
        for (const Vec2& p : poly.vertices) {
            min_x = std::min(min_x, p[0]);
            max_x = std::max(max_x, p[0]);
            min_y = std::min(min_y, p[1]);
            max_y = std::max(max_y, p[1]);
        }
    }
    const auto inside = [](const RBox2D& box, double px, double py) {
        const double c = std::cos(box.theta), s = std::sin(box.theta);
        const double dx = px - box.x, dy = py - box.y;
        const double u = dx * c + dy * s;
        const double v = -dx * s + dy * c;
        return std::abs(u) <= box.w / 2.0 && std::abs(v) <= box.h / 2.0;
    };
    // splitmix64; fixed-increment so the stream is stable across platforms
    std::uint64_t state = seed;
    const auto next_unit = [&state]() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    };
    std::uint64_t hit_inter = 0, hit_union = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double px = min_x + (max_x - min_x) * next_unit();
        const double py = min_y + (max_y - min_y) * next_unit();
        const bool in_a = inside(a, px, py);
        const bool in_b = inside(b, px, py);
        if (in_a && in_b) ++hit_inter;
        if (in_a || in_b) ++hit_union;
    }
    if (hit_union == 0) return 0.0;
    return static_cast<double>(hit_inter) / static_cast<double>(hit_union);
}

}  // namespace gbox
