#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gbox/assign.hpp"
#include "gbox/box.hpp"
#include "gbox/divergence.hpp"
#include "gbox/fit.hpp"
#include "gbox/gradient.hpp"
#include "gbox/heading.hpp"
#include "gbox/loss.hpp"
#include "gbox/polygon.hpp"
#include "gbox/sweep.hpp"

namespace gbox {

/// One invariant check outcome; detail is the measured extreme value.
struct SelftestCheck {
    std::string name;
    bool pass = false;
    double detail = 0.0;
};

struct SelftestReport {
    std::vector<SelftestCheck> checks;
    std::vector<FitStep> boundary_fit;  ///< artifact: KLD descent on the boundary fixture

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

class BoxSampler {
  public:
    explicit BoxSampler(std::uint64_t seed) : rng_(seed) {}

    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

    RBox2D box(BoxDefinition def = BoxDefinition::LongEdge) {
        RBox2D b;
        b.x = range(-10.0, 10.0);
        b.y = range(-10.0, 10.0);
        b.w = range(0.5, 8.0);
        b.h = range(0.5, 8.0);
        b.theta = range(-kPi, kPi);
        b.def = def;
        return b;
    }

    RBox2D horizontal_box() {
        RBox2D b = box();
        b.theta = unit() < 0.5 ? 0.0 : kPi;
        return b;
    }

    RBox3D cube() {
        RBox3D c;
        c.x = range(-10.0, 10.0);
        c.y = range(-10.0, 10.0);
        c.z = range(-2.0, 2.0);
        c.w = range(0.5, 6.0);
        c.h = range(0.5, 6.0);
        c.l = range(0.5, 4.0);
        c.theta = range(-kPi, kPi);
        return c;
    }

    std::mt19937_64& engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

inline double max_sigma_diff(const Gaussian2& a, const Gaussian2& b) {
    double m = 0.0;
    for (int i = 0; i < 2; ++i) {
        m = std::max(m, std::abs(a.mu[i] - b.mu[i]));
        for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a.sigma(i, j) - b.sigma(i, j)));
    }
    return m;
}

/// Vertex sets equal up to cyclic order and winding.
inline double vertex_set_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
    if (a.vertices.size() != b.vertices.size()) return 1e9;
    double best = 1e9;
    const int n = static_cast<int>(a.vertices.size());
    for (int dir = 0; dir < 2; ++dir) {
        for (int shift = 0; shift < n; ++shift) {
            double worst = 0.0;
            for (int i = 0; i < n; ++i) {
                const int j = dir == 0 ? (i + shift) % n : (shift - i % n + 2 * n) % n;
                const Vec2 d = a.vertices[static_cast<std::size_t>(i)] -
                               b.vertices[static_cast<std::size_t>(j)];
                worst = std::max(worst, std::hypot(d[0], d[1]));
            }
            best = std::min(best, worst);
        }
    }
    return best;
}

inline double spearman_rho(std::vector<double> xs, std::vector<double> ys) {
    const auto ranks = [](std::vector<double> v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n, 0.0);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(std::move(xs));
    const std::vector<double> ry = ranks(std::move(ys));
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

}  // namespace detail

/// Deterministic invariant suite behind the CLI selftest. Every check is a
/// scaled-down version of the acceptance suite; identical seeds produce
/// byte-identical artifacts.
inline SelftestReport run_selftest(std::uint64_t seed) {
    using detail::BoxSampler;
    SelftestReport report;
    const auto add = [&report](const std::string& name, bool pass, double detail) {
        report.checks.push_back({name, pass, detail});
    };
    const std::vector<Metric> all_metrics = {Metric::Gwd,      Metric::KldPt,
                                             Metric::KldTp,    Metric::Jeffreys,
                                             Metric::JsdApprox, Metric::Bcd};

    {  // Properties 1 and 2 of the box->Gaussian map
        BoxSampler gen(seed);
        double worst1 = 0.0, worst2 = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const RBox2D b = gen.box();
            RBox2D swapped = b;
            std::swap(swapped.w, swapped.h);
            swapped.theta -= kHalfPi;
            RBox2D rotated = b;
            rotated.theta -= kPi;
            worst1 = std::max(worst1,
                              detail::max_sigma_diff(to_gaussian(b), to_gaussian(swapped)));
            worst2 = std::max(worst2,
                              detail::max_sigma_diff(to_gaussian(b), to_gaussian(rotated)));
        }
        add("property1_edge_swap", worst1 <= 1e-9, worst1);
        add("property2_pi_period", worst2 <= 1e-9, worst2);
    }
    {  // Property 3 Frobenius bound, exact constant sqrt(2)/4
        BoxSampler gen(seed + 1);
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const RBox2D b = gen.box();
            RBox2D quarter = b;
            quarter.theta -= kHalfPi;
            Mat2 diff = to_gaussian(b).sigma - to_gaussian(quarter).sigma;
            const double expected =
                std::sqrt(2.0) / 4.0 * std::abs(b.w * b.w - b.h * b.h);
            worst = std::max(worst, std::abs(frobenius_norm(diff) - expected));
        }
        add("property3_frobenius", worst <= 1e-8, worst);
    }
    {  // definition conversion: Gaussian invariance + vertex preservation
        BoxSampler gen(seed + 2);
        double worst_gauss = 0.0, worst_vertex = 0.0;
        for (int i = 0; i < 1000; ++i) {
            RBox2D b = gen.box(BoxDefinition::LongEdge);
            b = normalized(b);
            const RBox2D oc = convert_definition(b, BoxDefinition::OpenCv);
            const RBox2D back = convert_definition(oc, BoxDefinition::LongEdge);
            worst_gauss = std::max(worst_gauss,
                                   detail::max_sigma_diff(to_gaussian(b), to_gaussian(oc)));
            worst_vertex = std::max(
                worst_vertex, detail::vertex_set_distance(box_vertices(b), box_vertices(oc)));
            worst_vertex = std::max(
                worst_vertex, detail::vertex_set_distance(box_vertices(b), box_vertices(back)));
        }
        add("conversion_gaussian_equal", worst_gauss <= 1e-9, worst_gauss);
        add("conversion_vertices_equal", worst_vertex <= 1e-9, worst_vertex);
    }
    {  // horizontal closed forms
        BoxSampler gen(seed + 3);
        double worst_gwd = 0.0, worst_kld = 0.0;
        for (int i = 0; i < 500; ++i) {
            const RBox2D a = gen.horizontal_box();
            const RBox2D b = gen.horizontal_box();
            const double gwd_matrix = gwd_squared(to_gaussian(a), to_gaussian(b)).value;
            const double gwd_closed = gwd_horizontal_closed_form(a, b);
            worst_gwd = std::max(worst_gwd, std::abs(gwd_matrix - gwd_closed) /
                                                std::max(1.0, std::abs(gwd_closed)));
            const double kld_matrix = kld(to_gaussian(a), to_gaussian(b)).value;
            const double kld_closed = kld_horizontal_closed_form(a, b);
            worst_kld = std::max(worst_kld, std::abs(kld_matrix - kld_closed) /
                                                std::max(1.0, std::abs(kld_closed)));
        }
        add("gwd_horizontal_closed_form", worst_gwd <= 1e-9, worst_gwd);
        add("kld_horizontal_closed_form", worst_kld <= 1e-9, worst_kld);
    }
    {  // GWD symmetry and KLD asymmetry witness
        BoxSampler gen(seed + 4);
        double worst = 0.0;
        for (int i = 0; i < 500; ++i) {
            const Gaussian2 p = to_gaussian(gen.box());
            const Gaussian2 t = to_gaussian(gen.box());
            worst = std::max(worst, std::abs(gwd_squared(p, t).value - gwd_squared(t, p).value));
        }
        add("gwd_symmetry", worst <= 1e-9, worst);
        const Gaussian2 p = to_gaussian(RBox2D{0, 0, 1, 1, 0, BoxDefinition::LongEdge});
        const Gaussian2 t = to_gaussian(RBox2D{0, 0, 6, 2, 0, BoxDefinition::LongEdge});
        const double gap = std::abs(kld(p, t, Metric::KldPt).value - kld(p, t, Metric::KldTp).value);
        add("kld_asymmetry_witness", gap > 0.1, gap);
    }
    {  // affine invariance of KLD and BCD; exact s^2 scaling of GWD
        BoxSampler gen(seed + 5);
        double worst_aff = 0.0, worst_scale = 0.0;
        for (int i = 0; i < 200; ++i) {
            const Gaussian2 p = to_gaussian(gen.box());
            const Gaussian2 t = to_gaussian(gen.box());
            Mat2 m;
            do {
                m(0, 0) = gen.range(-2.0, 2.0);
                m(0, 1) = gen.range(-2.0, 2.0);
                m(1, 0) = gen.range(-2.0, 2.0);
                m(1, 1) = gen.range(-2.0, 2.0);
            } while (std::abs(determinant(m)) < 0.2);
            Vec2 shift;
            shift[0] = gen.range(-5.0, 5.0);
            shift[1] = gen.range(-5.0, 5.0);
            const auto map = [&](const Gaussian2& g) {
                Gaussian2 r;
                r.mu = m * g.mu + shift;
                r.sigma = m * g.sigma * transpose(m);
                return r;
            };
            const Gaussian2 mp = map(p), mt = map(t);
            for (Metric metric : {Metric::KldPt, Metric::KldTp, Metric::Bcd}) {
                const double before = distance(metric, p, t).value;
                const double after = distance(metric, mp, mt).value;
                worst_aff = std::max(worst_aff,
                                     std::abs(after - before) / std::max(1.0, std::abs(before)));
            }
            const double s = gen.range(0.5, 20.0);
            Gaussian2 sp = p, st = t;
            sp.mu = s * p.mu;
            st.mu = s * t.mu;
            sp.sigma = s * s * p.sigma;
            st.sigma = s * s * t.sigma;
            const double base = gwd_squared(p, t).value;
            const double scaled = gwd_squared(sp, st).value;
            worst_scale = std::max(worst_scale,
                                   std::abs(scaled - s * s * base) / std::max(1.0, s * s * base));
        }
        add("kld_bcd_affine_invariance", worst_aff <= 1e-8, worst_aff);
        add("gwd_scale_quadratic", worst_scale <= 1e-8, worst_scale);
    }
    {  // jsd == bcd under the parameter-averaged midpoint (two routes)
        BoxSampler gen(seed + 6);
        double worst = 0.0;
        for (int i = 0; i < 300; ++i) {
            const Gaussian2 p = to_gaussian(gen.box());
            const Gaussian2 t = to_gaussian(gen.box());
            worst = std::max(worst, std::abs(jsd_approx(p, t).value - bcd(p, t).value));
        }
        add("jsd_bcd_identity", worst <= 1e-9, worst);
    }
    {  // analytic vs central-difference gradients
        BoxSampler gen(seed + 7);
        double worst = 0.0;
        for (Metric metric : all_metrics) {
            LossConfig cfg;
            cfg.metric = metric;
            int done = 0;
            while (done < 200) {
                RBox2D pred = gen.box();
                const RBox2D target = gen.box();
                if (std::abs(pred.w - pred.h) / std::max(pred.w, pred.h) < 1e-3) continue;
                const double rel_angle = std::abs(wrap_to_half_pi(pred.theta - target.theta));
                if (rel_angle < 1e-3 || rel_angle > kHalfPi - 1e-3) continue;
                ++done;
                const ParamGradient a =
                    analytic_gradient(pred, target, cfg, GradientOf::NormalizedLoss);
                const ParamGradient n =
                    finite_difference_gradient(pred, target, cfg, 1e-5, GradientOf::NormalizedLoss);
                const double av[5] = {a.d_x, a.d_y, a.d_w, a.d_h, a.d_theta};
                const double nv[5] = {n.d_x, n.d_y, n.d_w, n.d_h, n.d_theta};
                for (int k = 0; k < 5; ++k) {
                    const double err = std::abs(av[k] - nv[k]);
                    if (std::abs(av[k]) < 1e-3) {
                        worst = std::max(worst, err > 1e-7 ? err : 0.0);
                    } else {
                        worst = std::max(worst, err / std::abs(av[k]) > 1e-4 ? err / std::abs(av[k]) : 0.0);
                    }
                }
            }
        }
        add("gradient_fd_agreement", worst == 0.0, worst);
    }
    {  // closed-form KLD partials against the general analytic gradient
        BoxSampler gen(seed + 8);
        double worst = 0.0;
        for (int i = 0; i < 500; ++i) {
            const RBox2D pred = gen.box();
            RBox2D target = gen.box();
            target.theta = 0.0;
            LossConfig cfg;
            cfg.metric = Metric::KldPt;
            const ParamGradient a = analytic_gradient(pred, target, cfg, GradientOf::RawDistance);
            const ParamGradient c = kld_pt_closed_form_gradient(pred, target);
            worst = std::max({worst, std::abs(a.d_x - c.d_x), std::abs(a.d_y - c.d_y),
                              std::abs(a.d_w - c.d_w), std::abs(a.d_h - c.d_h),
                              std::abs(a.d_theta - c.d_theta)});
        }
        add("kld_closed_form_partials", worst <= 1e-9, worst);
    }
    {  // self-modulation: theta gradient grows with aspect ratio; x gradient ~ 1/w^2
        double prev = -1.0;
        bool increasing = true;
        for (double aspect : {1.0, 2.0, 3.0, 4.0}) {
            const RBox2D target{0, 0, 1, aspect, 0, BoxDefinition::LongEdge};
            RBox2D pred = target;
            pred.theta = kPi / 8.0;
            LossConfig cfg;
            cfg.metric = Metric::KldPt;
            const double mag = std::abs(
                analytic_gradient(pred, target, cfg, GradientOf::RawDistance).d_theta);
            if (mag <= prev) increasing = false;
            prev = mag;
        }
        add("theta_gradient_self_modulation", increasing, prev);
        double worst_ratio = 0.0;
        LossConfig cfg;
        cfg.metric = Metric::KldPt;
        double last = 0.0;
        bool first = true;
        for (double wt : {1.0, 2.0, 4.0}) {
            const RBox2D target{0, 0, wt, 1, 0, BoxDefinition::LongEdge};
            RBox2D pred = target;
            pred.x = 0.25;
            const double gx = analytic_gradient(pred, target, cfg, GradientOf::RawDistance).d_x;
            if (!first) worst_ratio = std::max(worst_ratio, std::abs(last / gx - 4.0));
            last = gx;
            first = false;
        }
        add("center_gradient_inverse_square", worst_ratio <= 1e-9, worst_ratio);
    }
    {  // boundary fixture: loss continuity across -pi/2 vs Smooth-L1 jump
        const AnchorBox anchor{0, 0, 70, 10, -kHalfPi};
        const RBox2D anchor_box{0, 0, 70, 10, -kHalfPi, BoxDefinition::OpenCv};
        const RBox2D gt{0, 0, 10, 70, deg_to_rad(-25.0), BoxDefinition::OpenCv};
        double worst_gauss_jump = 0.0;
        const double eps = 1e-6;
        for (Metric metric : all_metrics) {
            LossConfig cfg;
            cfg.metric = metric;
            for (int i = -50; i <= 50; ++i) {
                RBox2D lo = anchor_box, hi = anchor_box;
                lo.theta = -kHalfPi + i * eps;
                hi.theta = lo.theta + eps;
                const double jump =
                    std::abs(gaussian_box_loss(hi, gt, cfg) - gaussian_box_loss(lo, gt, cfg));
                worst_gauss_jump = std::max(worst_gauss_jump, jump);
            }
        }
        add("boundary_gaussian_continuity", worst_gauss_jump <= 1e-4, worst_gauss_jump);
        const OffsetEncoding target_enc = encode_offsets(gt, anchor, AngleEncoding::DirectAngle);
        const auto baseline = [&](double theta) {
            RBox2D b = anchor_box;
            b.theta = theta;
            return smooth_l1_loss(encode_offsets(normalized(b), anchor, AngleEncoding::DirectAngle),
                                  target_enc, 1.0 / 9.0);
        };
        const double jump = std::abs(baseline(-kHalfPi - eps) - baseline(-kHalfPi + eps));
        add("boundary_smooth_l1_jump", jump >= 0.5, jump);
        double worst_rep = 0.0;
        const RBox2D way1{0, 0, 70, 10, deg_to_rad(-115.0), BoxDefinition::OpenCv};
        for (Metric metric : all_metrics) {
            const double base = distance(metric, to_gaussian(anchor_box), to_gaussian(way1)).value;
            const double direct = distance(metric, to_gaussian(anchor_box), to_gaussian(gt)).value;
            const double via_le =
                distance(metric, to_gaussian(convert_definition(anchor_box, BoxDefinition::LongEdge)),
                         to_gaussian(convert_definition(gt, BoxDefinition::LongEdge)))
                    .value;
            worst_rep = std::max({worst_rep, std::abs(base - direct), std::abs(base - via_le)});
        }
        add("boundary_representation_equal", worst_rep <= 1e-9, worst_rep);
    }
    {  // SkewIoU hand cases and Monte-Carlo agreement
        const RBox2D unit{0, 0, 2, 2, 0, BoxDefinition::LongEdge};
        RBox2D shifted = unit;
        shifted.x = 1;
        shifted.y = 1;
        RBox2D far_box = unit;
        far_box.x = 10;
        const double hand = std::max({std::abs(skew_iou_2d(unit, unit) - 1.0),
                                      std::abs(skew_iou_2d(unit, far_box)),
                                      std::abs(skew_iou_2d(unit, shifted) - 1.0 / 7.0)});
        add("skew_iou_hand_cases", hand <= 1e-9, hand);
        BoxSampler gen(seed + 9);
        double worst_mc = 0.0;
        for (int i = 0; i < 20; ++i) {
            RBox2D a = gen.box();
            RBox2D b = gen.box();
            b.x = a.x + gen.range(-2.0, 2.0);
            b.y = a.y + gen.range(-2.0, 2.0);
            const double exact = skew_iou_2d(a, b);
            const double mc = skew_iou_2d_monte_carlo(a, b, 1000000, seed + 100 + i);
            worst_mc = std::max(worst_mc, std::abs(exact - mc));
        }
        add("skew_iou_monte_carlo", worst_mc <= 3e-3, worst_mc);
    }
    {  // rank correlation with IoU and monotonicity over the angle sweep
        const SweepScenario scenario = make_default_scenario(SweepKind::AngleDiff);
        LossConfig cfg;
        cfg.metric = Metric::KldPt;
        const std::vector<SweepRow> rows = run_sweep(scenario, {cfg});
        std::vector<double> losses, inv_iou;
        for (const auto& r : rows) {
            losses.push_back(r.loss);
            inv_iou.push_back(1.0 - r.skew_iou);
        }
        const double rho = detail::spearman_rho(losses, inv_iou);
        add("kld_iou_rank_correlation", rho >= 0.95, rho);
        bool monotone = true;
        for (Metric metric : all_metrics) {
            LossConfig mc_cfg;
            mc_cfg.metric = metric;
            double prev = -1.0;
            for (int i = 0; i <= 90; ++i) {
                RBox2D pred = scenario.target;
                pred.theta = scenario.target.theta + i * kPi / 180.0;
                const double loss = gaussian_box_loss(pred, scenario.target, mc_cfg);
                if (loss < prev - 1e-12) monotone = false;
                prev = loss;
            }
        }
        add("angle_monotonicity", monotone, monotone ? 1.0 : 0.0);
    }
    {  // scale sweep: KLD/BCD columns constant
        const SweepScenario scenario = make_default_scenario(SweepKind::Scale);
        LossConfig kld_cfg, bcd_cfg;
        kld_cfg.metric = Metric::KldPt;
        bcd_cfg.metric = Metric::Bcd;
        const std::vector<SweepRow> rows = run_sweep(scenario, {kld_cfg, bcd_cfg});
        double lo_kld = 1e9, hi_kld = -1e9, lo_bcd = 1e9, hi_bcd = -1e9;
        for (const auto& r : rows) {
            if (r.metric == "kld") {
                lo_kld = std::min(lo_kld, r.loss);
                hi_kld = std::max(hi_kld, r.loss);
            } else {
                lo_bcd = std::min(lo_bcd, r.loss);
                hi_bcd = std::max(hi_bcd, r.loss);
            }
        }
        const double span = std::max(hi_kld - lo_kld, hi_bcd - lo_bcd);
        add("scale_sweep_invariance", span <= 1e-8, span);
    }
    {  // boundary fit: KLD descent reaches IoU >= 0.9 with nonincreasing loss
        const RBox2D init{0, 0, 70, 10, -kHalfPi, BoxDefinition::OpenCv};
        const RBox2D target{0, 0, 10, 70, deg_to_rad(-25.0), BoxDefinition::OpenCv};
        FitConfig cfg;
        cfg.loss.metric = Metric::KldPt;
        report.boundary_fit = fit_box(init, target, cfg);
        const FitStep& last = report.boundary_fit.back();
        bool nonincreasing = true;
        for (std::size_t i = 1; i < report.boundary_fit.size(); ++i)
            if (report.boundary_fit[i].loss > report.boundary_fit[i - 1].loss + 1e-12)
                nonincreasing = false;
        add("boundary_fit_reaches_iou", last.skew_iou >= 0.9 && last.step <= 2000,
            last.skew_iou);
        add("boundary_fit_loss_nonincreasing", nonincreasing, nonincreasing ? 1.0 : 0.0);
    }
    {  // argmin invariance of the normalization across tau and f
        BoxSampler gen(seed + 10);
        const RBox2D target = gen.box();
        std::vector<RBox2D> candidates;
        for (int i = 0; i < 20; ++i) candidates.push_back(gen.box());
        bool stable = true;
        int reference = -1;
        for (NormalizeFn f : {NormalizeFn::Sqrt, NormalizeFn::Log1p}) {
            for (double tau : {1.0, 2.0, 3.0, 5.0}) {
                LossConfig cfg;
                cfg.metric = Metric::KldPt;
                cfg.f = f;
                cfg.tau = tau;
                int best = 0;
                double best_loss = 1e18;
                for (std::size_t i = 0; i < candidates.size(); ++i) {
                    const double loss = gaussian_box_loss(candidates[i], target, cfg);
                    if (loss < best_loss) {
                        best_loss = loss;
                        best = static_cast<int>(i);
                    }
                }
                if (reference < 0) reference = best;
                if (best != reference) stable = false;
            }
        }
        add("argmin_invariance", stable, static_cast<double>(reference));
    }
    {  // ATSS hand case and identity affinity
        const std::vector<double> affs = {0.5, 0.4, 0.3, 0.2};
        double mean = 0.0;
        for (double a : affs) mean += a;
        mean /= 4.0;
        double var = 0.0;
        for (double a : affs) var += (a - mean) * (a - mean);
        var /= 4.0;
        const double threshold = mean + std::sqrt(var);
        add("atss_hand_threshold", std::abs(threshold - 0.461803398875) <= 1e-6, threshold);
        const RBox2D box{3, 4, 5, 2, 0.3, BoxDefinition::LongEdge};
        const double aff = affinity(box, box, AffinityMetric::Kld, 2.0);
        add("atss_identity_affinity", std::abs(aff - 0.5) <= 1e-12, aff);
    }
    {  // every GT receives a positive anchor on random scenes
        BoxSampler gen(seed + 11);
        bool covered = true;
        for (int scene = 0; scene < 20 && covered; ++scene) {
            const AnchorGrid grid = make_anchor_grid(64, 64, {8, 16}, 4.0);
            std::vector<RBox2D> gts;
            const int count = 1 + static_cast<int>(gen.range(0.0, 4.0));
            for (int g = 0; g < count; ++g) {
                RBox2D b;
                b.x = gen.range(8.0, 56.0);
                b.y = gen.range(8.0, 56.0);
                b.w = gen.range(4.0, 24.0);
                b.h = gen.range(4.0, 24.0);
                b.theta = gen.range(-kHalfPi, kHalfPi);
                b.def = BoxDefinition::LongEdge;
                gts.push_back(normalized(b));
            }
            for (AssignStrategy strategy : {AssignStrategy::Atss, AssignStrategy::MaxIoU}) {
                AssignConfig cfg;
                cfg.strategy = strategy;
                cfg.metric = AffinityMetric::Kld;
                const AssignResult res = assign_labels(gts, grid, cfg);
                std::vector<int> counts(gts.size(), 0);
                for (const auto& l : res.labels)
                    if (l.kind == AnchorAssignment::Kind::Positive)
                        ++counts[static_cast<std::size_t>(l.gt)];
                for (int c : counts)
                    if (c < 1) covered = false;
            }
        }
        add("assignment_coverage", covered, covered ? 1.0 : 0.0);
    }
    {  // Algorithm 1 traces, idempotence, shape preservation
        PostProcConfig cfg;
        const RBox3D square{0, 0, 0, 2, 2, 1.5, 0.3};
        const RBox3D sq_out = post_process_heading(square, {1.0, 0.0}, "pedestrian", cfg);
        const bool trace1 = std::abs(sq_out.theta - kHalfPi) <= 1e-12 &&
                            sq_out.w == 2.0 && sq_out.h == 2.0;
        const RBox3D veh{0, 0, 0, 4, 2, 1.5, 0.0};
        const RBox3D veh_out = post_process_heading(veh, {0.0, -1.0}, "vehicle", cfg);
        const bool trace2 = std::abs(veh_out.theta + kPi) <= 1e-12 && veh_out.w == 4.0;
        const RBox3D other{0, 0, 0, 4, 2, 1.5, 0.0};
        const RBox3D other_out = post_process_heading(other, {1.0, 0.0}, "barrier", cfg);
        const bool trace3 = std::abs(other_out.theta - kHalfPi) <= 1e-12 &&
                            other_out.w == 2.0 && other_out.h == 4.0;
        add("heading_traces", trace1 && trace2 && trace3, trace1 + trace2 + trace3);
        BoxSampler gen(seed + 12);
        double worst = 0.0;
        bool in_range = true;
        for (int i = 0; i < 200; ++i) {
            RBox3D cube = gen.cube();
            if (is_square_like(cube, cfg.ratio_threshold)) {
                cube.w += 0.5 * std::max(cube.w, cube.h);
            }
            HeadingVector hv{gen.range(-1.0, 1.0), gen.range(-1.0, 1.0)};
            if (std::hypot(hv.dx, hv.dy) < 1e-3) hv.dx = 1.0;
            const std::string cls = gen.unit() < 0.5 ? "vehicle" : "barrier";
            const RBox3D once = post_process_heading(cube, hv, cls, cfg);
            const RBox3D twice = post_process_heading(once, hv, cls, cfg);
            if (once.theta < -kPi || once.theta >= kPi) in_range = false;
            worst = std::max({worst, std::abs(once.x - twice.x), std::abs(once.y - twice.y),
                              std::abs(once.w - twice.w), std::abs(once.h - twice.h),
                              std::abs(wrap_to_pi(once.theta - twice.theta))});
            const RBox2D bev_in{cube.x, cube.y, cube.w, cube.h, cube.theta,
                                BoxDefinition::LongEdge};
            const RBox2D bev_out{once.x, once.y, once.w, once.h, once.theta,
                                 BoxDefinition::LongEdge};
            worst = std::max(worst, detail::vertex_set_distance(box_vertices(bev_in),
                                                                box_vertices(bev_out)));
        }
        add("heading_idempotent_shape_preserving", worst <= 1e-9 && in_range, worst);
    }
    return report;
}

}  // namespace gbox
