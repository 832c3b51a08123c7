#pragma once

#include <cmath>
#include <vector>

#include "gbox/box.hpp"
#include "gbox/errors.hpp"
#include "gbox/gradient.hpp"
#include "gbox/loss.hpp"
#include "gbox/offsets.hpp"
#include "gbox/polygon.hpp"

namespace gbox {

enum class ParamSpace { Raw, LogEdges };

/// Objective driving the toy descent: the Gaussian loss, or the Smooth-L1
/// baseline over DirectAngle offsets with the init box as anchor.
enum class FitObjective { GaussianLoss, SmoothL1DirectAngle };

struct FitConfig {
    double step_xy = 0.1;
    double step_edges = 0.05;
    double step_theta = 0.05;
    int max_steps = 2000;
    double stop_iou = 0.9;
    LossConfig loss;
    ParamSpace space = ParamSpace::LogEdges;
    FitObjective objective = FitObjective::GaussianLoss;
    double smooth_l1_beta = kSmoothL1Beta;
};

struct FitStep {
    int step = 0;
    RBox2D box;
    double loss = 0.0;
    double skew_iou = 0.0;
};

namespace detail {

/// Smooth-L1 derivative per component.
inline double smooth_l1_slope(double diff, double beta) {
    return std::abs(diff) < beta ? diff / beta : (diff > 0.0 ? 1.0 : -1.0);
}

inline ParamGradient smooth_l1_offset_gradient(const RBox2D& pred, const RBox2D& target,
                                               const AnchorBox& anchor, double beta,
                                               bool log_edges) {
    const OffsetEncoding ep = encode_offsets(pred, anchor, AngleEncoding::DirectAngle);
    const OffsetEncoding et = encode_offsets(target, anchor, AngleEncoding::DirectAngle);
    ParamGradient g;
    g.log_edges = log_edges;
    g.d_x = smooth_l1_slope(ep.tx - et.tx, beta) / anchor.w;
    g.d_y = smooth_l1_slope(ep.ty - et.ty, beta) / anchor.h;
    // d tw / d ln w = 1; in raw space divide by the edge
    g.d_w = smooth_l1_slope(ep.tw - et.tw, beta);
    g.d_h = smooth_l1_slope(ep.th - et.th, beta);
    if (!log_edges) {
        g.d_w /= pred.w;
        g.d_h /= pred.h;
    }
    g.d_theta = smooth_l1_slope(ep.t_theta - et.t_theta, beta);
    return g;
}

}  // namespace detail

/// Fixed-step gradient descent of a prediction box onto a target, recording
/// (box, loss, IoU) per step. Edges move in log space by default, keeping
/// them positive without projection; theta is re-wrapped into the box
/// definition range after every step.
inline std::vector<FitStep> fit_box(const RBox2D& init, const RBox2D& target,
                                    const FitConfig& cfg) {
    if (cfg.max_steps < 1) throw InvalidConfig("max_steps must be >= 1");
    if (!(cfg.stop_iou > 0.0 && cfg.stop_iou <= 1.0))
        throw InvalidConfig("stop_iou must lie in (0, 1]");
    require_edges(init);
    require_edges(target);
    const AnchorBox baseline_anchor{init.x, init.y, init.w, init.h, init.theta};
    const bool log_edges = cfg.space == ParamSpace::LogEdges;

    const auto eval_loss = [&](const RBox2D& b) {
        if (cfg.objective == FitObjective::GaussianLoss)
            return gaussian_box_loss(b, target, cfg.loss);
        return smooth_l1_loss(encode_offsets(b, baseline_anchor, AngleEncoding::DirectAngle),
                              encode_offsets(target, baseline_anchor, AngleEncoding::DirectAngle),
                              cfg.smooth_l1_beta);
    };
    const auto eval_grad = [&](const RBox2D& b) {
        if (cfg.objective == FitObjective::GaussianLoss)
            return analytic_gradient(b, target, cfg.loss, GradientOf::NormalizedLoss, log_edges);
        return detail::smooth_l1_offset_gradient(b, target, baseline_anchor,
                                                 cfg.smooth_l1_beta, log_edges);
    };

    std::vector<FitStep> trajectory;
    RBox2D box = init;
    // Persistent backtracking scale: when a full step would raise the loss
    // (the fixed steps are too long near the minimum), halve until it does
    // not. This keeps the recorded loss sequence nonincreasing.
    double scale = 1.0;
    for (int step = 0; step <= cfg.max_steps; ++step) {
        const double loss = eval_loss(box);
        if (!std::isfinite(loss)) throw DivergedFit("loss became non-finite");
        const double iou = skew_iou_2d(box, target);
        trajectory.push_back({step, box, loss, iou});
        if (iou >= cfg.stop_iou || step == cfg.max_steps) break;

        const ParamGradient g = eval_grad(box);
        const auto advance = [&](double s) {
            RBox2D next = box;
            next.x -= s * cfg.step_xy * g.d_x;
            next.y -= s * cfg.step_xy * g.d_y;
            if (log_edges) {
                next.w *= std::exp(-s * cfg.step_edges * g.d_w);
                next.h *= std::exp(-s * cfg.step_edges * g.d_h);
            } else {
                next.w -= s * cfg.step_edges * g.d_w;
                next.h -= s * cfg.step_edges * g.d_h;
            }
            next.theta -= s * cfg.step_theta * g.d_theta;
            return next;
        };
        bool accepted = false;
        for (int attempt = 0; attempt < 48 && !accepted; ++attempt) {
            const RBox2D next = advance(scale);
            if (next.w >= kMinEdge && next.h >= kMinEdge && eval_loss(next) <= loss) {
                box = next;
                accepted = true;
            } else {
                scale *= 0.5;
            }
        }
        if (!accepted) break;  // step length exhausted at a plateau
        if (cfg.objective == FitObjective::GaussianLoss) box = normalized(box);
    }
    return trajectory;
}

}  // namespace gbox
