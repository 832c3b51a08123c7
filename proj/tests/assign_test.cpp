#include "gbox/assign.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "support/test_util.hpp"

namespace gbox {
namespace {

using test::RandomBoxes;

AnchorGrid single_level(std::vector<AnchorBox> anchors) {
    AnchorGrid g;
    g.anchors = std::move(anchors);
    g.level_of.assign(g.anchors.size(), 0);
    g.levels = 1;
    return g;
}

TEST(Affinity, IdenticalBoxes) {
    const RBox2D b{3, 4, 5, 2, 0.3, BoxDefinition::LongEdge};
    EXPECT_NEAR(affinity(b, b, AffinityMetric::Iou, 2.0), 1.0, 1e-12);
    EXPECT_NEAR(affinity(b, b, AffinityMetric::Kld, 2.0), 0.5, 1e-12);
}

TEST(Affinity, KnownDistanceArithmetic) {
    // KLD distance 2 at tau 2 gives 1/(2+2); a unit x-shift of a 2x2 box has
    // KLD 0.5, giving 0.4.
    const RBox2D gt{0, 0, 2, 2, 0, BoxDefinition::LongEdge};
    RBox2D anchor = gt;
    anchor.x = 1;
    EXPECT_NEAR(affinity(gt, anchor, AffinityMetric::Kld, 2.0), 0.4, 1e-12);
    anchor.x = 2;
    EXPECT_NEAR(affinity(gt, anchor, AffinityMetric::Kld, 2.0), 0.25, 1e-12);
}

TEST(AtssThreshold, SpecAffinitiesViaConstructedGrid) {
    // Anchors placed so the candidate affinities are exactly
    // {0.5, 0.4, 0.3, 0.2}: KLD of a pure x-shift of a 2x2 box is dx^2/2,
    // so dx = sqrt(2 (1/a - 2)).
    const RBox2D gt{0, 0, 2, 2, 0, BoxDefinition::LongEdge};
    const AnchorGrid grid = single_level({{0, 0, 2, 2, 0},
                                          {1.0, 0, 2, 2, 0},
                                          {1.632993161855452, 0, 2, 2, 0},
                                          {2.449489742783178, 0, 2, 2, 0}});
    AssignConfig cfg;
    cfg.k = 4;
    cfg.metric = AffinityMetric::Kld;
    cfg.tau = 2.0;
    const AtssThreshold t = atss_threshold(gt, grid, cfg);
    ASSERT_EQ(t.candidates.size(), 4u);
    EXPECT_NEAR(t.threshold, 0.461803398875, 1e-6);
}

TEST(AtssThreshold, IdenticalAffinitiesGiveZeroDeviation) {
    const RBox2D gt{0, 0, 2, 2, 0, BoxDefinition::LongEdge};
    const AnchorGrid grid = single_level(
        {{1, 0, 2, 2, 0}, {-1, 0, 2, 2, 0}, {0, 1, 2, 2, 0}, {0, -1, 2, 2, 0}});
    AssignConfig cfg;
    cfg.k = 4;
    const AtssThreshold t = atss_threshold(gt, grid, cfg);
    EXPECT_NEAR(t.threshold, 0.4, 1e-12);
}

TEST(AtssThreshold, KLargerThanGridTakesEverything) {
    const RBox2D gt{0, 0, 2, 2, 0, BoxDefinition::LongEdge};
    const AnchorGrid grid = single_level({{0, 0, 2, 2, 0}, {1, 0, 2, 2, 0}});
    AssignConfig cfg;
    cfg.k = 50;
    EXPECT_EQ(atss_threshold(gt, grid, cfg).candidates.size(), 2u);
}

TEST(AtssThreshold, EmptyGridThrows) {
    AssignConfig cfg;
    EXPECT_THROW(atss_threshold(RBox2D{}, AnchorGrid{}, cfg), EmptyGrid);
}

TEST(AssignLabels, CoincidentAnchorMaxIou) {
    const RBox2D gt{0, 0, 4, 2, 0, BoxDefinition::LongEdge};
    const AnchorGrid grid = single_level({{0, 0, 4, 2, 0}, {20, 20, 4, 2, 0}});
    AssignConfig cfg;
    cfg.strategy = AssignStrategy::MaxIoU;
    cfg.metric = AffinityMetric::Iou;
    const AssignResult res = assign_labels({gt}, grid, cfg);
    EXPECT_EQ(res.labels[0].kind, AnchorAssignment::Kind::Positive);
    EXPECT_EQ(res.labels[0].gt, 0);
    EXPECT_DOUBLE_EQ(res.affinities[0], 1.0);
    EXPECT_EQ(res.labels[1].kind, AnchorAssignment::Kind::Negative);
}

TEST(AssignLabels, BestAnchorForcingWhenAllBelowThreshold) {
    const RBox2D gt{0, 0, 2, 2, 0, BoxDefinition::LongEdge};
    // all anchors far from the GT: best-anchor forcing must still yield one
    const AnchorGrid grid = single_level({{8, 8, 2, 2, 0}, {9, 9, 2, 2, 0}, {12, 0, 2, 2, 0}});
    AssignConfig cfg;
    cfg.strategy = AssignStrategy::MaxIoU;
    cfg.metric = AffinityMetric::Iou;
    const AssignResult res = assign_labels({gt}, grid, cfg);
    int positives = 0;
    for (const auto& l : res.labels)
        if (l.kind == AnchorAssignment::Kind::Positive) ++positives;
    EXPECT_EQ(positives, 1);
}

TEST(AssignLabels, MaxIouIgnoreBand) {
    const RBox2D gt{0, 0, 4, 4, 0, BoxDefinition::LongEdge};
    // IoU of a (1,0) shift of a 4x4 box: inter 12, union 20 -> 0.6;
    // (3,0) shift: inter 4, union 28 -> 1/7.
    const AnchorGrid grid =
        single_level({{0, 0, 4, 4, 0}, {1, 0, 4, 4, 0}, {3, 0, 4, 4, 0}, {30, 0, 4, 4, 0}});
    AssignConfig cfg;
    cfg.strategy = AssignStrategy::MaxIoU;
    cfg.metric = AffinityMetric::Iou;
    cfg.pos_thresh = 0.7;
    cfg.neg_thresh = 0.2;
    const AssignResult res = assign_labels({gt}, grid, cfg);
    EXPECT_EQ(res.labels[0].kind, AnchorAssignment::Kind::Positive);  // 1.0
    EXPECT_EQ(res.labels[1].kind, AnchorAssignment::Kind::Ignore);    // 0.6
    EXPECT_EQ(res.labels[2].kind, AnchorAssignment::Kind::Negative);  // 1/7
    EXPECT_EQ(res.labels[3].kind, AnchorAssignment::Kind::Negative);
}

TEST(AssignLabels, HandTracedTwoLevelAtss) {
    // Candidates (k=2 per level): level 0 affinities {0.5, 0.4}; level 1
    // scale-doubled anchors give KLD 3 - ln 4 (affinity 0.276724) and
    // 5 - ln 4 (affinity 0.178135). Threshold = mean + population std
    // = 0.460573; only the coincident anchor passes.
    const RBox2D gt{0, 0, 2, 2, 0, BoxDefinition::LongEdge};
    AnchorGrid grid;
    grid.anchors = {{0, 0, 2, 2, 0}, {1, 0, 2, 2, 0}, {7, 0, 2, 2, 0},
                    {0, 0, 4, 4, 0}, {2, 0, 4, 4, 0}, {9, 0, 4, 4, 0}};
    grid.level_of = {0, 0, 0, 1, 1, 1};
    grid.levels = 2;
    AssignConfig cfg;
    cfg.strategy = AssignStrategy::Atss;
    cfg.metric = AffinityMetric::Kld;
    cfg.k = 2;
    cfg.tau = 2.0;
    const AtssThreshold t = atss_threshold(gt, grid, cfg);
    ASSERT_EQ(t.candidates.size(), 4u);
    EXPECT_NEAR(t.threshold, 0.46057278042497524, 1e-9);
    const AssignResult res = assign_labels({gt}, grid, cfg);
    EXPECT_EQ(res.labels[0].kind, AnchorAssignment::Kind::Positive);
    for (std::size_t i = 1; i < grid.anchors.size(); ++i)
        EXPECT_EQ(res.labels[i].kind, AnchorAssignment::Kind::Negative) << i;
}

TEST(AssignLabels, ContestedAnchorGoesToHighestAffinityGt) {
    // one anchor coincides with gt1 and overlaps gt0 less
    const RBox2D gt0{1.5, 0, 2, 2, 0, BoxDefinition::LongEdge};
    const RBox2D gt1{0, 0, 2, 2, 0, BoxDefinition::LongEdge};
    const AnchorGrid grid = single_level({{0, 0, 2, 2, 0}, {1.5, 0, 2, 2, 0}});
    AssignConfig cfg;
    cfg.strategy = AssignStrategy::Atss;
    cfg.metric = AffinityMetric::Kld;
    cfg.k = 2;
    const AssignResult res = assign_labels({gt0, gt1}, grid, cfg);
    EXPECT_EQ(res.labels[0].kind, AnchorAssignment::Kind::Positive);
    EXPECT_EQ(res.labels[0].gt, 1);
    EXPECT_EQ(res.labels[1].kind, AnchorAssignment::Kind::Positive);
    EXPECT_EQ(res.labels[1].gt, 0);
}

TEST(AssignLabels, EveryGtGetsAPositive) {
    RandomBoxes gen(91);
    for (int scene = 0; scene < 50; ++scene) {
        const AnchorGrid grid = make_anchor_grid(64, 64, {8, 16}, 4.0);
        std::vector<RBox2D> gts;
        const int count = 1 + static_cast<int>(gen.range(0, 4));
        for (int g = 0; g < count; ++g) {
            RBox2D b{gen.range(8, 56), gen.range(8, 56),   gen.range(4, 24),
                     gen.range(4, 24), gen.range(-kPi, kPi), BoxDefinition::LongEdge};
            gts.push_back(normalized(b));
        }
        for (AssignStrategy strategy : {AssignStrategy::Atss, AssignStrategy::MaxIoU}) {
            for (AffinityMetric metric :
                 {AffinityMetric::Iou, AffinityMetric::Kld, AffinityMetric::Bcd}) {
                AssignConfig cfg;
                cfg.strategy = strategy;
                cfg.metric = metric;
                const AssignResult res = assign_labels(gts, grid, cfg);
                std::vector<int> counts(gts.size(), 0);
                for (const auto& l : res.labels)
                    if (l.kind == AnchorAssignment::Kind::Positive)
                        ++counts[static_cast<std::size_t>(l.gt)];
                for (std::size_t g = 0; g < counts.size(); ++g)
                    EXPECT_GE(counts[g], 1) << "scene " << scene << " gt " << g;
            }
        }
    }
}

TEST(AssignLabels, PositiveAffinityMeetsThreshold) {
    RandomBoxes gen(92);
    const AnchorGrid grid = make_anchor_grid(64, 64, {8, 16}, 4.0);
    for (int scene = 0; scene < 20; ++scene) {
        std::vector<RBox2D> gts;
        for (int g = 0; g < 3; ++g) {
            RBox2D b{gen.range(8, 56), gen.range(8, 56),   gen.range(6, 20),
                     gen.range(6, 20), gen.range(-kPi, kPi), BoxDefinition::LongEdge};
            gts.push_back(normalized(b));
        }
        AssignConfig cfg;
        const AssignResult res = assign_labels(gts, grid, cfg);
        // forced positives may sit below the threshold, but each GT's best
        // positive must reach it whenever any candidate passed
        std::vector<double> best(gts.size(), 0.0);
        for (std::size_t i = 0; i < res.labels.size(); ++i)
            if (res.labels[i].kind == AnchorAssignment::Kind::Positive)
                best[static_cast<std::size_t>(res.labels[i].gt)] =
                    std::max(best[static_cast<std::size_t>(res.labels[i].gt)],
                             res.affinities[i]);
        for (std::size_t g = 0; g < gts.size(); ++g) EXPECT_GT(best[g], 0.0);
    }
}

TEST(AssignLabels, MonotoneAffinityNeverFlipsPositiveToNegative) {
    // Slide an anchor toward the GT center: under MaxIoU with fixed
    // thresholds its label can only improve (Negative -> Ignore -> Positive).
    const RBox2D gt{0, 0, 4, 2, 0, BoxDefinition::LongEdge};
    AssignConfig cfg;
    cfg.strategy = AssignStrategy::MaxIoU;
    cfg.metric = AffinityMetric::Iou;
    cfg.pos_thresh = 0.5;
    cfg.neg_thresh = 0.2;
    int best_rank = 0;  // 0 negative, 1 ignore, 2 positive
    for (double x = 6.0; x >= 0.0; x -= 0.25) {
        const AnchorGrid grid = single_level({{x, 0, 4, 2, 0}, {0, 0, 4, 2, 0}});
        const AssignResult res = assign_labels({gt}, grid, cfg);
        const int rank = res.labels[0].kind == AnchorAssignment::Kind::Positive ? 2
                         : res.labels[0].kind == AnchorAssignment::Kind::Ignore ? 1
                                                                                : 0;
        EXPECT_GE(rank, best_rank);
        best_rank = std::max(best_rank, rank);
    }
    EXPECT_EQ(best_rank, 2);
}

TEST(AssignLabels, Deterministic) {
    RandomBoxes gen(93);
    const AnchorGrid grid = make_anchor_grid(32, 32, {8}, 4.0);
    std::vector<RBox2D> gts;
    for (int g = 0; g < 3; ++g)
        gts.push_back(normalized(RBox2D{gen.range(4, 28), gen.range(4, 28), gen.range(4, 12),
                                        gen.range(4, 12), gen.range(-kPi, kPi),
                                        BoxDefinition::LongEdge}));
    AssignConfig cfg;
    const AssignResult a = assign_labels(gts, grid, cfg);
    const AssignResult b = assign_labels(gts, grid, cfg);
    ASSERT_EQ(a.labels.size(), b.labels.size());
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        EXPECT_EQ(a.labels[i].kind, b.labels[i].kind);
        EXPECT_EQ(a.labels[i].gt, b.labels[i].gt);
        EXPECT_DOUBLE_EQ(a.affinities[i], b.affinities[i]);
    }
}

TEST(MakeAnchorGrid, CountsAndLevels) {
    const AnchorGrid grid = make_anchor_grid(64, 64, {8, 16}, 4.0);
    EXPECT_EQ(grid.levels, 2);
    EXPECT_EQ(grid.anchors.size(), 64u + 16u);
    EXPECT_EQ(grid.level_of.size(), grid.anchors.size());
    EXPECT_DOUBLE_EQ(grid.anchors[0].x, 4.0);
    EXPECT_DOUBLE_EQ(grid.anchors[0].w, 32.0);
}

}  // namespace
}  // namespace gbox
