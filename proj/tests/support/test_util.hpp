#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gbox/box.hpp"
#include "gbox/polygon.hpp"

namespace gbox::test {

/// Deterministic box generator for property tests.
class RandomBoxes {
  public:
    explicit RandomBoxes(std::uint64_t seed) : rng_(seed) {}

    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

    RBox2D box(BoxDefinition def = BoxDefinition::LongEdge) {
        return {range(-10.0, 10.0), range(-10.0, 10.0), range(0.5, 8.0),
                range(0.5, 8.0),    range(-kPi, kPi),   def};
    }

    /// Box pair with bounded center separation (keeps IoU often nonzero).
    std::pair<RBox2D, RBox2D> nearby_pair() {
        RBox2D a = box();
        RBox2D b = box();
        b.x = a.x + range(-2.0, 2.0);
        b.y = a.y + range(-2.0, 2.0);
        return {a, b};
    }

    RBox2D horizontal_box() {
        RBox2D b = box();
        b.theta = unit() < 0.5 ? 0.0 : kPi;
        return b;
    }

    RBox3D cube() {
        return {range(-10.0, 10.0), range(-10.0, 10.0), range(-2.0, 2.0), range(0.5, 6.0),
                range(0.5, 6.0),    range(0.5, 4.0),    range(-kPi, kPi)};
    }

    std::mt19937_64& engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

inline double max_gaussian_diff(const Gaussian2& a, const Gaussian2& b) {
    double m = 0.0;
    for (int i = 0; i < 2; ++i) {
        m = std::max(m, std::abs(a.mu[i] - b.mu[i]));
        for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a.sigma(i, j) - b.sigma(i, j)));
    }
    return m;
}

inline double max_gaussian_diff(const Gaussian3& a, const Gaussian3& b) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) {
        m = std::max(m, std::abs(a.mu[i] - b.mu[i]));
        for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a.sigma(i, j) - b.sigma(i, j)));
    }
    return m;
}

/// Max vertex distance between polygons, minimized over cyclic shifts and
/// winding direction.
inline double vertex_set_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
    if (a.vertices.size() != b.vertices.size()) return 1e9;
    const int n = static_cast<int>(a.vertices.size());
    double best = 1e9;
    for (int dir = 0; dir < 2; ++dir) {
        for (int shift = 0; shift < n; ++shift) {
            double worst = 0.0;
            for (int i = 0; i < n; ++i) {
                const int j = dir == 0 ? (shift + i) % n : ((shift - i) % n + n) % n;
                const Vec2 d = a.vertices[static_cast<std::size_t>(i)] -
                               b.vertices[static_cast<std::size_t>(j)];
                worst = std::max(worst, std::hypot(d[0], d[1]));
            }
            best = std::min(best, worst);
        }
    }
    return best;
}

/// Spearman rank correlation with tie-averaged ranks.
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(xs);
    const std::vector<double> ry = ranks(ys);
    const double n = static_cast<double>(rx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace gbox::test
