#pragma once

#include <string>
#include <vector>

#include "gbox/box.hpp"
#include "gbox/loss.hpp"
#include "gbox/polygon.hpp"

namespace gbox {

/// Loss-behavior sweeps. Default geometry: 1:4 aspect ratio, unit short
/// edge; override the scenario fields for other shapes.
enum class SweepKind { AngleDiff, AspectRatio, CenterShift, TargetHeight, Scale };

struct SweepScenario {
    SweepKind kind = SweepKind::AngleDiff;
    RBox2D target{0.0, 0.0, 4.0, 1.0, 0.0, BoxDefinition::LongEdge};
    RBox2D pred{0.0, 0.0, 4.0, 1.0, 0.0, BoxDefinition::LongEdge};
    std::vector<double> grid;
    double fixed_angle_offset = kPi / 18.0;  ///< used by AspectRatio/TargetHeight
};

struct SweepRow {
    double grid_value = 0.0;
    std::string metric = "";
    double distance = 0.0;  ///< raw metric value (shows e.g. the s^2 scaling)
    double loss = 0.0;      ///< normalized loss
    double skew_iou = 0.0;
};

inline const char* sweep_kind_name(SweepKind k) {
    switch (k) {
        case SweepKind::AngleDiff: return "angle";
        case SweepKind::AspectRatio: return "aspect";
        case SweepKind::CenterShift: return "center";
        case SweepKind::TargetHeight: return "target-height";
        case SweepKind::Scale: return "scale";
    }
    return "?";
}

inline std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        g.push_back(lo);
        return g;
    }
    for (int i = 0; i < count; ++i)
        g.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return g;
}

inline SweepScenario make_default_scenario(SweepKind kind) {
    SweepScenario s;
    s.kind = kind;
    switch (kind) {
        case SweepKind::AngleDiff:
            s.grid = linspace(-kHalfPi, kHalfPi, 181);
            break;
        case SweepKind::AspectRatio:
            s.grid = linspace(1.0, 8.0, 29);
            s.fixed_angle_offset = kPi / 18.0;
            break;
        case SweepKind::CenterShift:
            s.grid = linspace(-3.0, 3.0, 121);
            break;
        case SweepKind::TargetHeight:
            s.target = RBox2D{0.0, 0.0, 1.0, 1.0, 0.0, BoxDefinition::LongEdge};
            s.grid = {1.0, 2.0, 3.0, 4.0};
            s.fixed_angle_offset = kPi / 8.0;
            break;
        case SweepKind::Scale:
            s.target = RBox2D{0.0, 0.0, 4.0, 2.0, 0.0, BoxDefinition::LongEdge};
            s.pred = RBox2D{0.5, 0.3, 3.0, 2.5, kPi / 12.0, BoxDefinition::LongEdge};
            s.grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
            break;
    }
    return s;
}

/// Instantiate the (pred, target) pair at one grid point.
inline std::pair<RBox2D, RBox2D> sweep_boxes_at(const SweepScenario& s, double g) {
    RBox2D target = s.target;
    RBox2D pred = s.pred;
    switch (s.kind) {
        case SweepKind::AngleDiff:
            pred = target;
            pred.theta = target.theta + g;
            break;
        case SweepKind::AspectRatio:
            target.w = g * target.h;
            pred = target;
            pred.theta = target.theta + s.fixed_angle_offset;
            break;
        case SweepKind::CenterShift:
            pred = target;
            pred.x = target.x + g;
            break;
        case SweepKind::TargetHeight:
            // target x=0, y=0, w=1, theta=0 with h controlling the aspect ratio
            target.h = g;
            pred = target;
            pred.theta = target.theta + s.fixed_angle_offset;
            break;
        case SweepKind::Scale:
            target.x *= g;
            target.y *= g;
            target.w *= g;
            target.h *= g;
            pred.x *= g;
            pred.y *= g;
            pred.w *= g;
            pred.h *= g;
            break;
    }
    return {pred, target};
}

/// One row per (grid point, metric), in grid order then metric order.
inline std::vector<SweepRow> run_sweep(const SweepScenario& scenario,
                                       const std::vector<LossConfig>& metrics) {
    if (scenario.grid.empty()) throw InvalidConfig("sweep grid is empty");
    std::vector<SweepRow> rows;
    rows.reserve(scenario.grid.size() * metrics.size());
    for (double g : scenario.grid) {
        const auto [pred, target] = sweep_boxes_at(scenario, g);
        const double iou = skew_iou_2d(pred, target);
        const Gaussian2 gp = to_gaussian(pred);
        const Gaussian2 gt = to_gaussian(target);
        for (const LossConfig& cfg : metrics) {
            SweepRow row;
            row.grid_value = g;
            row.metric = metric_name(cfg.metric);
            row.distance = distance(cfg.metric, gp, gt).value;
            row.loss = normalize_loss(row.distance, cfg);
            row.skew_iou = iou;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace gbox
