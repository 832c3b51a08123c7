#pragma once

#include <cmath>
#include <map>
#include <string>

#include "gbox/angles.hpp"
#include "gbox/box.hpp"
#include "gbox/errors.hpp"
#include "gbox/linalg.hpp"

namespace gbox {

enum class Metric { Gwd, KldPt, KldTp, Jeffreys, JsdApprox, Bcd };

inline const char* metric_name(Metric m) {
    switch (m) {
        case Metric::Gwd: return "gwd";
        case Metric::KldPt: return "kld";
        case Metric::KldTp: return "kld-tp";
        case Metric::Jeffreys: return "jeffreys";
        case Metric::JsdApprox: return "jsd";
        case Metric::Bcd: return "bcd";
    }
    return "?";
}

/// Scalar divergence value plus metric identity and named components.
struct DistanceResult {
    double value = 0.0;
    Metric metric = Metric::Gwd;
    std::map<std::string, double> terms;
};

namespace detail {

/// Floating-point noise within 1e-12 of zero clamps to 0.
inline double clamp_tiny_negative(double v) {
    return (v < 0.0 && v >= -1e-12) ? 0.0 : v;
}

}  // namespace detail

/// Squared 2-Wasserstein distance between two Gaussians:
/// ||mu_p - mu_t||^2 + Tr(S_p + S_t - 2 (S_p^1/2 S_t S_p^1/2)^1/2).
template <int N>
DistanceResult gwd_squared(const Gaussian<N>& p, const Gaussian<N>& t) {
    require_spd(p.sigma);
    require_spd(t.sigma);
    const double center = squared_norm(p.mu - t.mu);
    const Mat<N> root_p = sym_sqrt(p.sigma);
    const Mat<N> cross = sym_sqrt(root_p * t.sigma * root_p);
    const double shape =
        detail::clamp_tiny_negative(trace(p.sigma) + trace(t.sigma) - 2.0 * trace(cross));
    DistanceResult r;
    r.metric = Metric::Gwd;
    r.value = detail::clamp_tiny_negative(center + shape);
    r.terms = {{"center", center}, {"shape", shape}};
    return r;
}

/// KLD(p||t) in closed form; swap arguments for the opposite direction.
/// The terms map carries the quadratic / trace / log-det split (each with
/// its 1/2 weight) plus the -d/2 constant, so the entries sum to the value.
template <int N>
DistanceResult kld(const Gaussian<N>& p, const Gaussian<N>& t,
                   Metric direction = Metric::KldPt) {
    if (direction == Metric::KldTp) {
        DistanceResult r = kld(t, p, Metric::KldPt);
        r.metric = Metric::KldTp;
        return r;
    }
    require_spd(p.sigma);
    require_spd(t.sigma);
    const Mat<N> t_inv = inverse(t.sigma);
    const Vec<N> u = p.mu - t.mu;
    const double quad = 0.5 * dot(u, t_inv * u);
    const double tr = 0.5 * trace(t_inv * p.sigma);
    const double log_det = 0.5 * std::log(determinant(t.sigma) / determinant(p.sigma));
    const double constant = -0.5 * N;
    DistanceResult r;
    r.metric = Metric::KldPt;
    r.value = detail::clamp_tiny_negative(quad + tr + log_det + constant);
    r.terms = {{"quadratic", quad}, {"trace", tr}, {"log_det", log_det}, {"constant", constant}};
    return r;
}

/// Symmetrized KLD: D_kl(p||t) + D_kl(t||p).
template <int N>
DistanceResult jeffreys(const Gaussian<N>& p, const Gaussian<N>& t) {
    const DistanceResult pt = kld(p, t, Metric::KldPt);
    const DistanceResult tp = kld(p, t, Metric::KldTp);
    DistanceResult r;
    r.metric = Metric::Jeffreys;
    r.value = detail::clamp_tiny_negative(pt.value + tp.value);
    r.terms = {{"kld_pt", pt.value}, {"kld_tp", tp.value}};
    return r;
}

/// Jensen-Shannon divergence with the Gaussian mixture approximated by the
/// parameter-averaged Gaussian (the mixture itself has no closed form).
template <int N>
DistanceResult jsd_approx(const Gaussian<N>& p, const Gaussian<N>& t) {
    Gaussian<N> mid;
    mid.mu = 0.5 * (p.mu + t.mu);
    mid.sigma = 0.5 * (p.sigma + t.sigma);
    const DistanceResult t_to_mid = kld(t, mid, Metric::KldPt);
    const DistanceResult p_to_mid = kld(p, mid, Metric::KldPt);
    DistanceResult r;
    r.metric = Metric::JsdApprox;
    r.value = detail::clamp_tiny_negative(0.5 * (t_to_mid.value + p_to_mid.value));
    r.terms = {{"kld_t_mid", t_to_mid.value}, {"kld_p_mid", p_to_mid.value}};
    return r;
}

/// Bhattacharyya distance with S = (S_p + S_t)/2.
template <int N>
DistanceResult bcd(const Gaussian<N>& p, const Gaussian<N>& t) {
    require_spd(p.sigma);
    require_spd(t.sigma);
    const Mat<N> mix = 0.5 * (p.sigma + t.sigma);
    const Mat<N> mix_inv = inverse(mix);
    const Vec<N> u = p.mu - t.mu;
    const double maha = dot(u, mix_inv * u) / 8.0;
    const double log_det =
        0.5 * std::log(determinant(mix) /
                       std::sqrt(determinant(p.sigma) * determinant(t.sigma)));
    DistanceResult r;
    r.metric = Metric::Bcd;
    r.value = detail::clamp_tiny_negative(maha + log_det);
    r.terms = {{"mahalanobis", maha}, {"log_det", log_det}};
    return r;
}

template <int N>
DistanceResult distance(Metric metric, const Gaussian<N>& p, const Gaussian<N>& t) {
    switch (metric) {
        case Metric::Gwd: return gwd_squared(p, t);
        case Metric::KldPt: return kld(p, t, Metric::KldPt);
        case Metric::KldTp: return kld(p, t, Metric::KldTp);
        case Metric::Jeffreys: return jeffreys(p, t);
        case Metric::JsdApprox: return jsd_approx(p, t);
        case Metric::Bcd: return bcd(p, t);
    }
    throw InvalidConfig("unknown metric");
}

namespace detail {

inline void require_horizontal(const RBox2D& b) {
    if (std::abs(wrap_to_half_pi(b.theta)) > 1e-9)
        throw NotHorizontal("box angle must be 0 mod pi");
}

}  // namespace detail

/// Horizontal special case of the squared GWD:
/// dx^2 + dy^2 + (dw^2 + dh^2)/4. Cross-check for the matrix form.
inline double gwd_horizontal_closed_form(const RBox2D& a, const RBox2D& b) {
    detail::require_horizontal(a);
    detail::require_horizontal(b);
    require_edges(a);
    require_edges(b);
    const double dx = a.x - b.x, dy = a.y - b.y;
    const double dw = a.w - b.w, dh = a.h - b.h;
    return dx * dx + dy * dy + (dw * dw + dh * dh) / 4.0;
}

/// Horizontal special case of KLD(p||t).
inline double kld_horizontal_closed_form(const RBox2D& p_box, const RBox2D& t_box) {
    detail::require_horizontal(p_box);
    detail::require_horizontal(t_box);
    require_edges(p_box);
    require_edges(t_box);
    const double dx = p_box.x - t_box.x, dy = p_box.y - t_box.y;
    const double wp2 = p_box.w * p_box.w, hp2 = p_box.h * p_box.h;
    const double wt2 = t_box.w * t_box.w, ht2 = t_box.h * t_box.h;
    return 0.5 * (wp2 / wt2 + hp2 / ht2 + 4.0 * dx * dx / wt2 + 4.0 * dy * dy / ht2 +
                  std::log(wt2 / wp2) + std::log(ht2 / hp2) - 2.0);
}

}  // namespace gbox
