#pragma once

#include <cmath>

#include "gbox/box.hpp"
#include "gbox/divergence.hpp"
#include "gbox/errors.hpp"
#include "gbox/offsets.hpp"

namespace gbox {

/// Nonlinear transform applied to the raw distance before the affinity wrap.
enum class NormalizeFn { Sqrt, Log1p };

/// Loss shape L = 1 - 1/(tau + f(D)). Defaults are the best ablation row:
/// f = sqrt, tau = 2.
struct LossConfig {
    Metric metric = Metric::KldPt;
    NormalizeFn f = NormalizeFn::Sqrt;
    double tau = 2.0;
};

inline const char* normalize_fn_name(NormalizeFn f) {
    return f == NormalizeFn::Sqrt ? "sqrt" : "log1p";
}

inline double apply_normalize_fn(NormalizeFn f, double distance) {
    return f == NormalizeFn::Sqrt ? std::sqrt(distance) : std::log1p(distance);
}

/// Bounded regression loss from a raw distance; monotone nondecreasing,
/// range [1 - 1/tau, 1).
inline double normalize_loss(double distance, const LossConfig& cfg) {
    if (!(cfg.tau >= 1.0)) throw InvalidConfig("tau must be >= 1");
    if (distance < 0.0) {
        if (distance < -1e-12) throw InvalidConfig("distance must be nonnegative");
        distance = 0.0;
    }
    return 1.0 - 1.0 / (cfg.tau + apply_normalize_fn(cfg.f, distance));
}

/// Full pipeline: boxes -> Gaussians -> metric -> normalized loss.
inline double gaussian_box_loss(const RBox2D& pred, const RBox2D& target,
                                const LossConfig& cfg) {
    return normalize_loss(distance(cfg.metric, to_gaussian(pred), to_gaussian(target)).value,
                          cfg);
}

inline double gaussian_box_loss(const RBox3D& pred, const RBox3D& target,
                                const LossConfig& cfg) {
    return normalize_loss(distance(cfg.metric, to_gaussian(pred), to_gaussian(target)).value,
                          cfg);
}

/// Conventional detection default for the Smooth-L1 transition point.
inline constexpr double kSmoothL1Beta = 1.0 / 9.0;

inline double smooth_l1_term(double diff, double beta) {
    const double a = std::abs(diff);
    return a < beta ? 0.5 * a * a / beta : a - 0.5 * beta;
}

/// The affinity normalization applied to the Smooth-L1 sum (ablation
/// combination; cfg.metric is ignored).
inline double normalized_smooth_l1_loss(const OffsetEncoding& pred,
                                        const OffsetEncoding& target, const LossConfig& cfg,
                                        double beta = kSmoothL1Beta);

/// Smooth-L1 over offset encodings, summed across components.
inline double smooth_l1_loss(const OffsetEncoding& pred, const OffsetEncoding& target,
                             double beta = kSmoothL1Beta) {
    if (pred.mode != target.mode)
        throw ModeMismatch("offset encodings use different angle modes");
    if (!(beta > 0.0)) throw InvalidConfig("beta must be positive");
    double loss = smooth_l1_term(pred.tx - target.tx, beta) +
                  smooth_l1_term(pred.ty - target.ty, beta) +
                  smooth_l1_term(pred.tw - target.tw, beta) +
                  smooth_l1_term(pred.th - target.th, beta);
    if (pred.mode == AngleEncoding::DirectAngle) {
        loss += smooth_l1_term(pred.t_theta - target.t_theta, beta);
    } else {
        loss += smooth_l1_term(pred.t_sin - target.t_sin, beta) +
                smooth_l1_term(pred.t_cos - target.t_cos, beta);
    }
    return loss;
}

inline double normalized_smooth_l1_loss(const OffsetEncoding& pred,
                                        const OffsetEncoding& target, const LossConfig& cfg,
                                        double beta) {
    return normalize_loss(smooth_l1_loss(pred, target, beta), cfg);
}

}  // namespace gbox
