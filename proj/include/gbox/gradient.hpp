#pragma once

#include <cmath>

#include "gbox/angles.hpp"
#include "gbox/box.hpp"
#include "gbox/divergence.hpp"
#include "gbox/errors.hpp"
#include "gbox/loss.hpp"

namespace gbox {

/// Partials of a scalar objective with respect to the five box parameters.
/// When log_edges is set, d_w and d_h are taken with respect to ln w, ln h.
struct ParamGradient {
    double d_x = 0.0;
    double d_y = 0.0;
    double d_w = 0.0;
    double d_h = 0.0;
    double d_theta = 0.0;
    bool log_edges = true;
};

enum class GradientOf { RawDistance, NormalizedLoss };

namespace detail {

struct MuSigmaGrad {
    Vec2 d_mu;
    Mat2 d_sigma;
};

/// Partials of KL(q || m) with respect to both argument Gaussians.
struct KlSideGrads {
    Vec2 d_mu_q, d_mu_m;
    Mat2 d_sigma_q, d_sigma_m;
};

inline KlSideGrads kl_grads(const Gaussian2& q, const Gaussian2& m) {
    const Mat2 m_inv = inverse(m.sigma);
    const Mat2 q_inv = inverse(q.sigma);
    const Vec2 w = q.mu - m.mu;
    const Vec2 miw = m_inv * w;
    KlSideGrads g;
    g.d_mu_q = miw;
    g.d_mu_m = -1.0 * miw;
    g.d_sigma_q = 0.5 * (m_inv - q_inv);
    g.d_sigma_m = 0.5 * (m_inv - m_inv * (outer(w, w) + q.sigma) * m_inv);
    return g;
}

inline Mat2 symmetrized(const Mat2& a) { return 0.5 * (a + transpose(a)); }

/// Gradient of the raw metric with respect to (mu_p, Sigma_p).
inline MuSigmaGrad metric_grad(Metric metric, const Gaussian2& p, const Gaussian2& t) {
    MuSigmaGrad g;
    const Vec2 u = p.mu - t.mu;
    switch (metric) {
        case Metric::Gwd: {
            g.d_mu = 2.0 * u;
            const Mat2 root_p = sym_sqrt(p.sigma);
            const Mat2 root_p_inv = inverse(root_p);
            const Mat2 cross = sym_sqrt(root_p * t.sigma * root_p);
            const Mat2 transport = symmetrized(root_p_inv * cross * root_p_inv);
            g.d_sigma = Mat2::identity() - transport;
            return g;
        }
        case Metric::KldPt: {
            const KlSideGrads k = kl_grads(p, t);
            g.d_mu = k.d_mu_q;
            g.d_sigma = k.d_sigma_q;
            return g;
        }
        case Metric::KldTp: {
            const KlSideGrads k = kl_grads(t, p);
            g.d_mu = k.d_mu_m;
            g.d_sigma = k.d_sigma_m;
            return g;
        }
        case Metric::Jeffreys: {
            const MuSigmaGrad a = metric_grad(Metric::KldPt, p, t);
            const MuSigmaGrad b = metric_grad(Metric::KldTp, p, t);
            g.d_mu = a.d_mu + b.d_mu;
            g.d_sigma = a.d_sigma + b.d_sigma;
            return g;
        }
        case Metric::JsdApprox: {
            Gaussian2 mid;
            mid.mu = 0.5 * (p.mu + t.mu);
            mid.sigma = 0.5 * (p.sigma + t.sigma);
            const KlSideGrads kp = kl_grads(p, mid);
            const KlSideGrads kt = kl_grads(t, mid);
            g.d_mu = 0.5 * (kp.d_mu_q + 0.5 * (kp.d_mu_m + kt.d_mu_m));
            g.d_sigma = 0.5 * (kp.d_sigma_q + 0.5 * (kp.d_sigma_m + kt.d_sigma_m));
            return g;
        }
        case Metric::Bcd: {
            const Mat2 mix_inv = inverse(Mat2(0.5 * (p.sigma + t.sigma)));
            const Vec2 v = mix_inv * u;
            g.d_mu = 0.25 * v;
            g.d_sigma = 0.25 * mix_inv - 0.25 * inverse(p.sigma) - (1.0 / 16.0) * outer(v, v);
            return g;
        }
    }
    throw InvalidConfig("unknown metric");
}

/// Chain a (mu, Sigma) gradient back to the box parameters.
inline ParamGradient chain_to_box(const RBox2D& pred, const MuSigmaGrad& g, bool log_edges) {
    const double c = std::cos(pred.theta), s = std::sin(pred.theta);
    // dSigma/dw = R diag(w/2, 0) R^T, likewise for h
    Mat2 dw, dh;
    dw(0, 0) = pred.w / 2.0 * c * c;
    dw(0, 1) = pred.w / 2.0 * c * s;
    dw(1, 0) = dw(0, 1);
    dw(1, 1) = pred.w / 2.0 * s * s;
    dh(0, 0) = pred.h / 2.0 * s * s;
    dh(0, 1) = -pred.h / 2.0 * c * s;
    dh(1, 0) = dh(0, 1);
    dh(1, 1) = pred.h / 2.0 * c * c;
    // dSigma/dtheta = J Sigma - Sigma J with J the rotation generator
    const Gaussian2 gp = to_gaussian(pred);
    Mat2 j;
    j(0, 1) = -1.0;
    j(1, 0) = 1.0;
    const Mat2 dtheta = j * gp.sigma - gp.sigma * j;

    ParamGradient out;
    out.log_edges = log_edges;
    out.d_x = g.d_mu[0];
    out.d_y = g.d_mu[1];
    out.d_w = frobenius_dot(g.d_sigma, dw);
    out.d_h = frobenius_dot(g.d_sigma, dh);
    out.d_theta = frobenius_dot(g.d_sigma, dtheta);
    if (log_edges) {
        out.d_w *= pred.w;
        out.d_h *= pred.h;
    }
    return out;
}

/// d(normalized loss)/d(distance). Defined as 0 at the minimum.
inline double loss_chain_factor(double dist, const LossConfig& cfg) {
    if (dist <= 0.0) return 0.0;
    if (cfg.f == NormalizeFn::Sqrt) {
        const double root = std::sqrt(dist);
        const double denom = cfg.tau + root;
        return 1.0 / (2.0 * root * denom * denom);
    }
    const double denom = cfg.tau + std::log1p(dist);
    return 1.0 / ((1.0 + dist) * denom * denom);
}

}  // namespace detail

/// Analytic gradient of the raw distance or of the normalized loss with
/// respect to the prediction box parameters.
inline ParamGradient analytic_gradient(const RBox2D& pred, const RBox2D& target,
                                       const LossConfig& cfg,
                                       GradientOf of = GradientOf::NormalizedLoss,
                                       bool log_edges = true) {
    require_edges(pred);
    require_edges(target);
    const Gaussian2 gp = to_gaussian(pred);
    const Gaussian2 gt = to_gaussian(target);
    const detail::MuSigmaGrad g = detail::metric_grad(cfg.metric, gp, gt);
    ParamGradient out = detail::chain_to_box(pred, g, log_edges);
    if (of == GradientOf::NormalizedLoss) {
        if (!(cfg.tau >= 1.0)) throw InvalidConfig("tau must be >= 1");
        const double dist = distance(cfg.metric, gp, gt).value;
        const double factor = detail::loss_chain_factor(dist, cfg);
        out.d_x *= factor;
        out.d_y *= factor;
        out.d_w *= factor;
        out.d_h *= factor;
        out.d_theta *= factor;
    }
    return out;
}

/// Central-difference oracle for analytic_gradient.
inline ParamGradient finite_difference_gradient(const RBox2D& pred, const RBox2D& target,
                                                const LossConfig& cfg, double step = 1e-5,
                                                GradientOf of = GradientOf::NormalizedLoss,
                                                bool log_edges = true) {
    if (!(step > 0.0)) throw InvalidConfig("step must be positive");
    require_edges(pred);
    const auto eval = [&](const RBox2D& b) {
        const double d = distance(cfg.metric, to_gaussian(b), to_gaussian(target)).value;
        return of == GradientOf::RawDistance ? d : normalize_loss(d, cfg);
    };
    const auto central = [&](auto bump) {
        RBox2D hi = pred, lo = pred;
        bump(hi, step);
        bump(lo, -step);
        return (eval(hi) - eval(lo)) / (2.0 * step);
    };
    ParamGradient out;
    out.log_edges = log_edges;
    out.d_x = central([](RBox2D& b, double e) { b.x += e; });
    out.d_y = central([](RBox2D& b, double e) { b.y += e; });
    if (log_edges) {
        out.d_w = central([](RBox2D& b, double e) { b.w *= std::exp(e); });
        out.d_h = central([](RBox2D& b, double e) { b.h *= std::exp(e); });
    } else {
        out.d_w = central([](RBox2D& b, double e) { b.w += e; });
        out.d_h = central([](RBox2D& b, double e) { b.h += e; });
    }
    out.d_theta = central([](RBox2D& b, double e) { b.theta += e; });
    return out;
}

/// Closed-form partials of the raw KLD(p||t) for a horizontal target
/// (theta_t == 0 mod pi). The theta partial keeps the 1/2 prefactor of the
/// KLD trace term; the finite-difference oracle pins this form.
inline ParamGradient kld_pt_closed_form_gradient(const RBox2D& pred, const RBox2D& target) {
    require_edges(pred);
    require_edges(target);
    if (std::abs(wrap_to_half_pi(target.theta)) > 1e-12)
        throw NotHorizontal("closed-form KLD partials require theta_t == 0 mod pi");
    const double dx = pred.x - target.x, dy = pred.y - target.y;
    const double dtheta = pred.theta - target.theta;
    const double c = std::cos(dtheta), s = std::sin(dtheta);
    const double wp2 = pred.w * pred.w, hp2 = pred.h * pred.h;
    const double wt2 = target.w * target.w, ht2 = target.h * target.h;
    ParamGradient g;
    g.log_edges = true;
    g.d_x = 4.0 * dx / wt2;
    g.d_y = 4.0 * dy / ht2;
    g.d_w = wp2 / wt2 * c * c + wp2 / ht2 * s * s - 1.0;
    g.d_h = hp2 / ht2 * c * c + hp2 / wt2 * s * s - 1.0;
    g.d_theta = 0.5 * ((hp2 - wp2) / wt2 + (wp2 - hp2) / ht2) * std::sin(2.0 * dtheta);
    return g;
}

}  // namespace gbox
