#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "gbox/box.hpp"
#include "gbox/divergence.hpp"
#include "gbox/errors.hpp"
#include "gbox/polygon.hpp"

namespace gbox {

/// Synthetic multi-level anchor set.
struct AnchorGrid {
    std::vector<AnchorBox> anchors;
    std::vector<int> level_of;  ///< pyramid level per anchor, in [0, levels)
    int levels = 1;
};

enum class AssignStrategy { MaxIoU, Atss };
enum class AffinityMetric { Iou, Kld, Bcd, Gwd };

struct AssignConfig {
    AssignStrategy strategy = AssignStrategy::Atss;
    AffinityMetric metric = AffinityMetric::Kld;
    int k = 9;          ///< candidates per level (ATSS)
    double tau = 2.0;   ///< affinity modulation for Gaussian metrics
    double pos_thresh = 0.5;  ///< MaxIoU only
    double neg_thresh = 0.4;  ///< MaxIoU only
    /// Classic ATSS also filters candidates whose centers fall outside the
    /// GT; off by default here since Gaussian affinities already decay fast.
    bool center_inside_filter = false;
};

struct AnchorAssignment {
    enum class Kind { Positive, Negative, Ignore };
    Kind kind = Kind::Negative;
    int gt = -1;  ///< GT index for positives
};

struct AssignResult {
    std::vector<AnchorAssignment> labels;    ///< one per anchor
    std::vector<double> thresholds;          ///< one per GT (ATSS; NaN for MaxIoU)
    std::vector<double> affinities;          ///< anchor affinity to its assigned GT (positives)
};

inline RBox2D anchor_as_box(const AnchorBox& a, BoxDefinition def = BoxDefinition::LongEdge) {
    return RBox2D{a.x, a.y, a.w, a.h, a.theta, def};
}

/// Affinity between a GT and an anchor: SkewIoU, or 1/(tau + D) for a
/// Gaussian metric D (anchor plays the prediction role of the divergence).
inline double affinity(const RBox2D& gt, const RBox2D& anchor_box, AffinityMetric metric,
                       double tau) {
    if (metric == AffinityMetric::Iou) return skew_iou_2d(gt, anchor_box);
    if (!(tau >= 1.0)) throw InvalidConfig("tau must be >= 1");
    Metric m = Metric::KldPt;
    if (metric == AffinityMetric::Bcd) m = Metric::Bcd;
    if (metric == AffinityMetric::Gwd) m = Metric::Gwd;
    const double d = distance(m, to_gaussian(anchor_box), to_gaussian(gt)).value;
    return 1.0 / (tau + d);
}

inline double affinity(const RBox2D& gt, const AnchorBox& anchor, const AssignConfig& cfg) {
    return affinity(gt, anchor_as_box(anchor, gt.def), cfg.metric, cfg.tau);
}

struct AtssThreshold {
    double threshold = 0.0;
    std::vector<int> candidates;  ///< anchor indices, k nearest per level
};

/// Dynamic threshold: mean + population standard deviation of the candidate
/// affinities, with candidates the k center-nearest anchors per level.
inline AtssThreshold atss_threshold(const RBox2D& gt, const AnchorGrid& grid,
                                    const AssignConfig& cfg) {
    if (grid.anchors.empty()) throw EmptyGrid("anchor grid is empty");
    if (cfg.k < 1) throw InvalidConfig("k must be >= 1");
    AtssThreshold out;
    for (int level = 0; level < grid.levels; ++level) {
        std::vector<std::pair<double, int>> dists;
        for (std::size_t i = 0; i < grid.anchors.size(); ++i) {
            if (grid.level_of[i] != level) continue;
            const AnchorBox& a = grid.anchors[i];
            const double dx = a.x - gt.x, dy = a.y - gt.y;
            dists.emplace_back(dx * dx + dy * dy, static_cast<int>(i));
        }
        // ties broken by anchor index (pair ordering is stable for that)
        std::sort(dists.begin(), dists.end());
        const std::size_t take = std::min<std::size_t>(dists.size(), static_cast<std::size_t>(cfg.k));
        for (std::size_t j = 0; j < take; ++j) out.candidates.push_back(dists[j].second);
    }
    if (cfg.center_inside_filter) {
        std::vector<int> kept;
        const ConvexPolygon poly = box_vertices(gt);
        for (int idx : out.candidates) {
            const AnchorBox& a = grid.anchors[static_cast<std::size_t>(idx)];
            const RBox2D probe{a.x, a.y, kMinEdge, kMinEdge, 0.0, gt.def};
            if (polygon_area(clip_convex(box_vertices(probe), poly)) > 0.0) kept.push_back(idx);
        }
        if (!kept.empty()) out.candidates = kept;
    }
    if (out.candidates.empty()) throw EmptyGrid("no anchors on any level");
    double mean = 0.0;
    std::vector<double> values;
    values.reserve(out.candidates.size());
    for (int idx : out.candidates) {
        values.push_back(affinity(gt, grid.anchors[static_cast<std::size_t>(idx)], cfg));
        mean += values.back();
    }
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    out.threshold = mean + std::sqrt(var);
    return out;
}

namespace detail {

/// Give every GT at least one positive: claim best candidates in affinity
/// order, stealing an anchor only when its owner keeps another positive.
inline void force_positives(const std::vector<std::vector<std::pair<double, int>>>& wishes,
                            std::vector<AnchorAssignment>& labels,
                            std::vector<double>& affinities,
                            std::vector<int>& positives_per_gt) {
    for (std::size_t g = 0; g < wishes.size(); ++g) {
        if (positives_per_gt[g] > 0) continue;
        for (const auto& [aff, anchor] : wishes[g]) {
            const AnchorAssignment cur = labels[static_cast<std::size_t>(anchor)];
            if (cur.kind == AnchorAssignment::Kind::Positive) {
                if (positives_per_gt[static_cast<std::size_t>(cur.gt)] <= 1) continue;
                --positives_per_gt[static_cast<std::size_t>(cur.gt)];
            }
            labels[static_cast<std::size_t>(anchor)] = {AnchorAssignment::Kind::Positive,
                                                        static_cast<int>(g)};
            affinities[static_cast<std::size_t>(anchor)] = aff;
            ++positives_per_gt[g];
            break;
        }
    }
}

}  // namespace detail

inline AssignResult assign_labels(const std::vector<RBox2D>& gts, const AnchorGrid& grid,
                                  const AssignConfig& cfg) {
    if (grid.anchors.empty()) throw EmptyGrid("anchor grid is empty");
    const std::size_t num_anchors = grid.anchors.size();
    AssignResult result;
    result.labels.assign(num_anchors, {});
    result.affinities.assign(num_anchors, 0.0);
    result.thresholds.assign(gts.size(), std::numeric_limits<double>::quiet_NaN());
    if (gts.empty()) return result;

    if (cfg.strategy == AssignStrategy::Atss) {
        // best (affinity, gt) per anchor among passing candidate sets
        std::vector<std::pair<double, int>> best(num_anchors, {-1.0, -1});
        std::vector<std::vector<std::pair<double, int>>> wishes(gts.size());
        for (std::size_t g = 0; g < gts.size(); ++g) {
            const AtssThreshold t = atss_threshold(gts[g], grid, cfg);
            result.thresholds[g] = t.threshold;
            for (int idx : t.candidates) {
                const double aff = affinity(gts[g], grid.anchors[static_cast<std::size_t>(idx)], cfg);
                wishes[g].emplace_back(aff, idx);
                if (aff >= t.threshold && aff > best[static_cast<std::size_t>(idx)].first) {
                    best[static_cast<std::size_t>(idx)] = {aff, static_cast<int>(g)};
                }
            }
            std::sort(wishes[g].begin(), wishes[g].end(),
                      [](const auto& a, const auto& b) {
                          return a.first != b.first ? a.first > b.first : a.second < b.second;
                      });
        }
        std::vector<int> positives_per_gt(gts.size(), 0);
        for (std::size_t i = 0; i < num_anchors; ++i) {
            if (best[i].second >= 0) {
                result.labels[i] = {AnchorAssignment::Kind::Positive, best[i].second};
                result.affinities[i] = best[i].first;
                ++positives_per_gt[static_cast<std::size_t>(best[i].second)];
            }
        }
        detail::force_positives(wishes, result.labels, result.affinities, positives_per_gt);
        return result;
    }

    // MaxIoU: threshold on the per-anchor best affinity, then force each
    // GT's best anchor positive.
    if (!(cfg.neg_thresh >= 0.0 && cfg.neg_thresh <= cfg.pos_thresh && cfg.pos_thresh <= 1.0))
        throw InvalidConfig("MaxIoU thresholds must satisfy 0 <= neg <= pos <= 1");
    std::vector<std::vector<std::pair<double, int>>> wishes(gts.size());
    for (std::size_t i = 0; i < num_anchors; ++i) {
        double best_aff = -1.0;
        int best_gt = -1;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            const double aff = affinity(gts[g], grid.anchors[i], cfg);
            wishes[g].emplace_back(aff, static_cast<int>(i));
            if (aff > best_aff) {
                best_aff = aff;
                best_gt = static_cast<int>(g);
            }
        }
        result.affinities[i] = best_aff;
        if (best_aff >= cfg.pos_thresh) {
            result.labels[i] = {AnchorAssignment::Kind::Positive, best_gt};
        } else if (best_aff >= cfg.neg_thresh) {
            result.labels[i] = {AnchorAssignment::Kind::Ignore, -1};
        }
    }
    std::vector<int> positives_per_gt(gts.size(), 0);
    for (std::size_t i = 0; i < num_anchors; ++i)
        if (result.labels[i].kind == AnchorAssignment::Kind::Positive)
            ++positives_per_gt[static_cast<std::size_t>(result.labels[i].gt)];
    for (auto& w : wishes)
        std::sort(w.begin(), w.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
    detail::force_positives(wishes, result.labels, result.affinities, positives_per_gt);
    return result;
}

/// Regular multi-level anchor grid over an image: one square anchor of side
/// scale*stride at each cell center.
inline AnchorGrid make_anchor_grid(double image_w, double image_h,
                                   const std::vector<int>& strides, double scale) {
    if (strides.empty()) throw InvalidConfig("at least one stride required");
    AnchorGrid grid;
    grid.levels = static_cast<int>(strides.size());
    for (int level = 0; level < grid.levels; ++level) {
        const double s = strides[static_cast<std::size_t>(level)];
        if (!(s > 0.0)) throw InvalidConfig("strides must be positive");
        const int nx = static_cast<int>(image_w / s);
        const int ny = static_cast<int>(image_h / s);
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                grid.anchors.push_back({(ix + 0.5) * s, (iy + 0.5) * s, scale * s, scale * s, 0.0});
                grid.level_of.push_back(level);
            }
    }
    return grid;
}

}  // namespace gbox
