// Command-line surface over the gbox library: batch conversion, distances,
// losses, IoU, behavior sweeps, gradient checks, toy fits, label assignment,
// 3-D heading post-processing, and the deterministic selftest.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbox/gbox.hpp"
#include "gbox/selftest.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNumericError = 2;
constexpr int kExitSelftestFailure = 3;

gbox::Metric parse_metric(const std::string& name) {
    if (name == "gwd") return gbox::Metric::Gwd;
    if (name == "kld" || name == "kld-pt") return gbox::Metric::KldPt;
    if (name == "kld-tp") return gbox::Metric::KldTp;
    if (name == "jeffreys") return gbox::Metric::Jeffreys;
    if (name == "jsd") return gbox::Metric::JsdApprox;
    if (name == "bcd") return gbox::Metric::Bcd;
    throw gbox::InvalidConfig("unknown metric: " + name);
}

gbox::NormalizeFn parse_normalize_fn(const std::string& name) {
    if (name == "sqrt") return gbox::NormalizeFn::Sqrt;
    if (name == "log1p") return gbox::NormalizeFn::Log1p;
    throw gbox::InvalidConfig("unknown normalization: " + name);
}

std::vector<json> read_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gbox::InvalidConfig("cannot open input file: " + path);
    return gbox::read_jsonl(in);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gbox::InvalidConfig("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw gbox::InvalidConfig("cannot open output file: " + path);
    return out;
}

struct PairRecord {
    gbox::RBox2D pred;
    gbox::RBox2D target;
};

PairRecord parse_pair(const json& j, bool degrees) {
    PairRecord p;
    if (j.contains("pred") && j.contains("target")) {
        p.pred = gbox::box2d_from_json(j.at("pred"), degrees);
        p.target = gbox::box2d_from_json(j.at("target"), degrees);
    } else if (j.contains("a") && j.contains("b")) {
        p.pred = gbox::box2d_from_json(j.at("a"), degrees);
        p.target = gbox::box2d_from_json(j.at("b"), degrees);
    } else {
        throw gbox::InvalidConfig("pair record needs pred/target (or a/b) objects");
    }
    return p;
}

void summary(const std::string& sub, const std::string& detail) {
    std::cout << "gbox-" << sub << " status=ok " << detail << "\n";
}

// ---- subcommand bodies ----------------------------------------------------

int run_convert(const std::string& in_path, const std::string& out_path,
                const std::string& target_def, bool degrees, bool csv) {
    const gbox::BoxDefinition target = gbox::parse_definition(target_def);
    const auto records = read_jsonl_file(in_path);
    auto out = open_output(out_path);
    if (csv) out << "# def=" << gbox::definition_name(target) << "\nx,y,w,h,theta\n";
    for (const json& j : records) {
        const gbox::RBox2D converted =
            gbox::convert_definition(gbox::box2d_from_json(j, degrees), target);
        if (csv)
            out << gbox::box2d_csv_row(converted) << "\n";
        else
            out << gbox::to_json(converted).dump() << "\n";
    }
    summary("convert", "records=" + std::to_string(records.size()) + " out=" + out_path);
    return kExitOk;
}

int run_distance(const std::string& pairs_path, const std::string& out_path,
                 const std::string& metric_name, bool degrees, bool with_terms) {
    const gbox::Metric metric = parse_metric(metric_name);
    const auto records = read_jsonl_file(pairs_path);
    auto out = open_output(out_path);
    out << (with_terms ? "index,metric,value,terms\n" : "index,metric,value\n");
    std::size_t index = 0;
    for (const json& j : records) {
        const PairRecord p = parse_pair(j, degrees);
        const gbox::DistanceResult r =
            gbox::distance(metric, gbox::to_gaussian(p.pred), gbox::to_gaussian(p.target));
        out << index << "," << gbox::metric_name(r.metric) << ","
            << gbox::format_double(r.value);
        if (with_terms) {
            out << ",";
            bool first = true;
            for (const auto& [k, v] : r.terms) {
                out << (first ? "" : ";") << k << "=" << gbox::format_double(v);
                first = false;
            }
        }
        out << "\n";
        ++index;
    }
    summary("distance", "metric=" + std::string(gbox::metric_name(metric)) +
                            " records=" + std::to_string(index) + " out=" + out_path);
    return kExitOk;
}

int run_loss(const std::string& pairs_path, const std::string& out_path,
             const gbox::LossConfig& cfg, bool degrees) {
    const auto records = read_jsonl_file(pairs_path);
    auto out = open_output(out_path);
    out << "index,metric,f,tau,distance,loss\n";
    std::size_t index = 0;
    for (const json& j : records) {
        const PairRecord p = parse_pair(j, degrees);
        const double dist =
            gbox::distance(cfg.metric, gbox::to_gaussian(p.pred), gbox::to_gaussian(p.target))
                .value;
        out << index << "," << gbox::metric_name(cfg.metric) << ","
            << gbox::normalize_fn_name(cfg.f) << "," << gbox::format_double(cfg.tau) << ","
            << gbox::format_double(dist) << "," << gbox::format_double(gbox::normalize_loss(dist, cfg))
            << "\n";
        ++index;
    }
    summary("loss", "metric=" + std::string(gbox::metric_name(cfg.metric)) +
                        " records=" + std::to_string(index) + " out=" + out_path);
    return kExitOk;
}

int run_iou(const std::string& pairs_path, const std::string& out_path, bool degrees,
            bool three_d) {
    const auto records = read_jsonl_file(pairs_path);
    auto out = open_output(out_path);
    out << "index,iou\n";
    std::size_t index = 0;
    for (const json& j : records) {
        double iou = 0.0;
        if (three_d) {
            const auto first = j.contains("pred") ? "pred" : "a";
            const auto second = j.contains("pred") ? "target" : "b";
            iou = gbox::iou_3d_yaw(gbox::box3d_from_json(j.at(first), degrees),
                                   gbox::box3d_from_json(j.at(second), degrees));
        } else {
            const PairRecord p = parse_pair(j, degrees);
            iou = gbox::skew_iou_2d(p.pred, p.target);
        }
        out << index << "," << gbox::format_double(iou) << "\n";
        ++index;
    }
    summary("iou", "records=" + std::to_string(index) + " out=" + out_path);
    return kExitOk;
}

gbox::SweepKind parse_sweep_kind(const std::string& name) {
    if (name == "angle") return gbox::SweepKind::AngleDiff;
    if (name == "aspect") return gbox::SweepKind::AspectRatio;
    if (name == "center") return gbox::SweepKind::CenterShift;
    if (name == "target-height") return gbox::SweepKind::TargetHeight;
    if (name == "scale") return gbox::SweepKind::Scale;
    throw gbox::InvalidConfig("unknown sweep scenario: " + name);
}

void write_sweep_csv(std::ostream& out, const std::vector<gbox::SweepRow>& rows) {
    out << "grid_value,metric,distance,loss,skew_iou\n";
    for (const auto& r : rows)
        out << gbox::format_double(r.grid_value) << "," << r.metric << ","
            << gbox::format_double(r.distance) << "," << gbox::format_double(r.loss) << ","
            << gbox::format_double(r.skew_iou) << "\n";
}

int run_sweep_cmd(const std::string& scenario_name, const std::string& metric_list,
                  const std::string& f_name, double tau, const std::string& out_path) {
    const gbox::SweepScenario scenario = gbox::make_default_scenario(parse_sweep_kind(scenario_name));
    std::vector<gbox::LossConfig> metrics;
    std::stringstream ss(metric_list);
    std::string token;
    while (std::getline(ss, token, ',')) {
        gbox::LossConfig cfg;
        cfg.metric = parse_metric(token);
        cfg.f = parse_normalize_fn(f_name);
        cfg.tau = tau;
        metrics.push_back(cfg);
    }
    if (metrics.empty()) throw gbox::InvalidConfig("no metrics given");
    const auto rows = gbox::run_sweep(scenario, metrics);
    auto out = open_output(out_path);
    write_sweep_csv(out, rows);
    summary("sweep", "scenario=" + scenario_name + " rows=" + std::to_string(rows.size()) +
                         " out=" + out_path);
    return kExitOk;
}

int run_grad_check(const std::string& pairs_path, const std::string& out_path,
                   const gbox::LossConfig& cfg, bool degrees, double step, bool raw) {
    const auto records = read_jsonl_file(pairs_path);
    const gbox::GradientOf of =
        raw ? gbox::GradientOf::RawDistance : gbox::GradientOf::NormalizedLoss;
    auto out = open_output(out_path);
    out << "pair,metric,param,analytic,numeric,abs_err\n";
    std::size_t index = 0;
    double worst = 0.0;
    for (const json& j : records) {
        const PairRecord p = parse_pair(j, degrees);
        const gbox::ParamGradient a = gbox::analytic_gradient(p.pred, p.target, cfg, of);
        const gbox::ParamGradient n =
            gbox::finite_difference_gradient(p.pred, p.target, cfg, step, of);
        const char* names[5] = {"x", "y", "ln_w", "ln_h", "theta"};
        const double av[5] = {a.d_x, a.d_y, a.d_w, a.d_h, a.d_theta};
        const double nv[5] = {n.d_x, n.d_y, n.d_w, n.d_h, n.d_theta};
        for (int k = 0; k < 5; ++k) {
            const double err = std::abs(av[k] - nv[k]);
            worst = std::max(worst, err);
            out << index << "," << gbox::metric_name(cfg.metric) << "," << names[k] << ","
                << gbox::format_double(av[k]) << "," << gbox::format_double(nv[k]) << ","
                << gbox::format_double(err) << "\n";
        }
        ++index;
    }
    summary("grad-check", "metric=" + std::string(gbox::metric_name(cfg.metric)) +
                              " pairs=" + std::to_string(index) +
                              " max_abs_err=" + gbox::format_double(worst) + " out=" + out_path);
    return kExitOk;
}

void write_fit_csv(std::ostream& out, const std::vector<gbox::FitStep>& trajectory) {
    out << "step,x,y,w,h,theta,loss,skew_iou\n";
    for (const auto& s : trajectory)
        out << s.step << "," << gbox::box2d_csv_row(s.box) << ","
            << gbox::format_double(s.loss) << "," << gbox::format_double(s.skew_iou) << "\n";
}

int run_fit(const std::string& init_path, const std::string& target_path,
            const std::string& out_path, gbox::FitConfig cfg, bool degrees,
            const std::string& objective) {
    if (objective == "smooth-l1")
        cfg.objective = gbox::FitObjective::SmoothL1DirectAngle;
    else if (objective != "gaussian")
        throw gbox::InvalidConfig("unknown fit objective: " + objective);
    const gbox::RBox2D init = gbox::box2d_from_json(read_json_file(init_path), degrees);
    const gbox::RBox2D target = gbox::box2d_from_json(read_json_file(target_path), degrees);
    const auto trajectory = gbox::fit_box(init, target, cfg);
    auto out = open_output(out_path);
    write_fit_csv(out, trajectory);
    const auto& last = trajectory.back();
    summary("fit", "steps=" + std::to_string(last.step) +
                       " final_iou=" + gbox::format_double(last.skew_iou) +
                       " final_loss=" + gbox::format_double(last.loss) + " out=" + out_path);
    return kExitOk;
}

int run_assign(const std::string& gts_path, const std::string& out_path,
               const gbox::AssignConfig& cfg, bool degrees, double image_w, double image_h,
               const std::vector<int>& strides, double scale) {
    std::vector<gbox::RBox2D> gts;
    for (const json& j : read_jsonl_file(gts_path))
        gts.push_back(gbox::box2d_from_json(j, degrees));
    const gbox::AnchorGrid grid = gbox::make_anchor_grid(image_w, image_h, strides, scale);
    const gbox::AssignResult res = gbox::assign_labels(gts, grid, cfg);
    auto out = open_output(out_path);
    out << "anchor,level,label,gt,affinity,threshold\n";
    for (std::size_t i = 0; i < grid.anchors.size(); ++i) {
        const auto& l = res.labels[i];
        const char* kind = l.kind == gbox::AnchorAssignment::Kind::Positive ? "positive"
                           : l.kind == gbox::AnchorAssignment::Kind::Ignore ? "ignore"
                                                                            : "negative";
        const double threshold =
            l.gt >= 0 ? res.thresholds[static_cast<std::size_t>(l.gt)]
                      : std::numeric_limits<double>::quiet_NaN();
        out << i << "," << grid.level_of[i] << "," << kind << "," << l.gt << ","
            << gbox::format_double(res.affinities[i]) << ","
            << (std::isnan(threshold) ? std::string("nan") : gbox::format_double(threshold))
            << "\n";
    }
    std::size_t positives = 0;
    for (const auto& l : res.labels)
        if (l.kind == gbox::AnchorAssignment::Kind::Positive) ++positives;
    summary("assign", "gts=" + std::to_string(gts.size()) +
                          " anchors=" + std::to_string(grid.anchors.size()) +
                          " positives=" + std::to_string(positives) + " out=" + out_path);
    return kExitOk;
}

int run_head_fix(const std::string& in_path, const std::string& out_path,
                 const gbox::PostProcConfig& cfg, bool degrees) {
    const auto records = read_jsonl_file(in_path);
    auto out = open_output(out_path);
    std::size_t index = 0;
    for (const json& j : records) {
        gbox::HeadingRecord rec = gbox::heading_record_from_json(j, degrees);
        rec.cube = gbox::post_process_heading(rec.cube, rec.heading, rec.cls, cfg);
        out << gbox::to_json(rec).dump() << "\n";
        ++index;
    }
    summary("head-fix", "records=" + std::to_string(index) + " out=" + out_path);
    return kExitOk;
}

int run_selftest_cmd(std::uint64_t seed, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const gbox::SelftestReport report = gbox::run_selftest(seed);

    {
        auto out = open_output((fs::path(out_dir) / "properties.csv").string());
        out << "check,status,detail\n";
        for (const auto& c : report.checks)
            out << c.name << "," << (c.pass ? "pass" : "fail") << ","
                << gbox::format_double(c.detail) << "\n";
    }
    {
        auto out = open_output((fs::path(out_dir) / "sweep_scale.csv").string());
        gbox::LossConfig kld_cfg, bcd_cfg, gwd_cfg;
        kld_cfg.metric = gbox::Metric::KldPt;
        bcd_cfg.metric = gbox::Metric::Bcd;
        gwd_cfg.metric = gbox::Metric::Gwd;
        write_sweep_csv(out, gbox::run_sweep(gbox::make_default_scenario(gbox::SweepKind::Scale),
                                             {kld_cfg, bcd_cfg, gwd_cfg}));
    }
    {
        auto out = open_output((fs::path(out_dir) / "sweep_angle.csv").string());
        gbox::LossConfig kld_cfg, gwd_cfg;
        kld_cfg.metric = gbox::Metric::KldPt;
        gwd_cfg.metric = gbox::Metric::Gwd;
        write_sweep_csv(out,
                        gbox::run_sweep(gbox::make_default_scenario(gbox::SweepKind::AngleDiff),
                                        {kld_cfg, gwd_cfg}));
    }
    {
        auto out = open_output((fs::path(out_dir) / "fit_boundary.csv").string());
        write_fit_csv(out, report.boundary_fit);
    }

    std::size_t failures = 0;
    for (const auto& c : report.checks) {
        if (!c.pass) {
            ++failures;
            std::cerr << "selftest FAIL " << c.name << " detail=" << gbox::format_double(c.detail)
                      << "\n";
        }
    }
    std::cout << "gbox-selftest status=" << (failures == 0 ? "ok" : "fail")
              << " checks=" << report.checks.size() << " failures=" << failures
              << " seed=" << seed << " out=" << out_dir << "\n";
    return failures == 0 ? kExitOk : kExitSelftestFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotated boxes as Gaussians: distances, losses, gradients, assignment"};
    app.require_subcommand(1);

    bool degrees = false;
    app.add_flag("--degrees", degrees, "interpret input angles as degrees");

    // convert
    auto* convert = app.add_subcommand("convert", "convert boxes between angle definitions");
    std::string c_in, c_out = "converted.jsonl", c_def = "le";
    bool c_csv = false;
    convert->add_option("--in", c_in, "input boxes (JSON lines)")->required();
    convert->add_option("--out", c_out, "output path");
    convert->add_option("--def", c_def, "target definition: oc or le");
    convert->add_flag("--csv", c_csv, "emit CSV rows instead of JSON lines");

    // distance
    auto* dist = app.add_subcommand("distance", "Gaussian distance per box pair");
    std::string d_pairs, d_out = "distance.csv", d_metric = "kld";
    bool d_terms = false;
    dist->add_option("--pairs", d_pairs, "pair records (JSON lines)")->required();
    dist->add_option("--out", d_out, "output CSV");
    dist->add_option("--metric", d_metric, "gwd|kld|kld-tp|jeffreys|jsd|bcd");
    dist->add_flag("--terms", d_terms, "emit the named term decomposition");

    // loss
    auto* loss = app.add_subcommand("loss", "normalized regression loss per box pair");
    std::string l_pairs, l_out = "loss.csv", l_metric = "kld", l_f = "sqrt";
    double l_tau = 2.0;
    loss->add_option("--pairs", l_pairs, "pair records (JSON lines)")->required();
    loss->add_option("--out", l_out, "output CSV");
    loss->add_option("--metric", l_metric, "gwd|kld|kld-tp|jeffreys|jsd|bcd");
    loss->add_option("--f", l_f, "distance transform: sqrt or log1p");
    loss->add_option("--tau", l_tau, "loss modulation, tau >= 1");

    // iou
    auto* iou = app.add_subcommand("iou", "exact SkewIoU per box pair");
    std::string i_pairs, i_out = "iou.csv";
    bool i_3d = false;
    iou->add_option("--pairs", i_pairs, "pair records (JSON lines)")->required();
    iou->add_option("--out", i_out, "output CSV");
    iou->add_flag("--three-d", i_3d, "treat records as yaw-only 3-D cubes");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "loss behavior sweeps as CSV");
    std::string s_scenario = "angle", s_metrics = "kld,bcd,gwd", s_f = "sqrt";
    std::string s_out = "sweep.csv";
    double s_tau = 2.0;
    sweep->add_option("--scenario", s_scenario, "angle|aspect|center|target-height|scale");
    sweep->add_option("--metrics", s_metrics, "comma-separated metric list");
    sweep->add_option("--f", s_f, "distance transform");
    sweep->add_option("--tau", s_tau, "loss modulation");
    sweep->add_option("--out", s_out, "output CSV");

    // grad-check
    auto* grad = app.add_subcommand("grad-check", "analytic vs central-difference gradients");
    std::string g_pairs, g_out = "grad_check.csv", g_metric = "kld", g_f = "sqrt";
    double g_tau = 2.0, g_step = 1e-5;
    bool g_raw = false;
    grad->add_option("--pairs", g_pairs, "pair records (JSON lines)")->required();
    grad->add_option("--out", g_out, "output CSV");
    grad->add_option("--metric", g_metric, "gwd|kld|kld-tp|jeffreys|jsd|bcd");
    grad->add_option("--f", g_f, "distance transform");
    grad->add_option("--tau", g_tau, "loss modulation");
    grad->add_option("--step", g_step, "finite-difference step");
    grad->add_flag("--raw", g_raw, "differentiate the raw distance, not the loss");

    // fit
    auto* fit = app.add_subcommand("fit", "toy gradient-descent box fit");
    std::string f_init, f_target, f_out = "fit.csv", f_metric = "kld", f_f = "sqrt";
    std::string f_objective = "gaussian";
    double f_tau = 2.0, f_stop_iou = 0.9;
    int f_steps = 2000;
    fit->add_option("--init", f_init, "initial box (JSON object file)")->required();
    fit->add_option("--target", f_target, "target box (JSON object file)")->required();
    fit->add_option("--out", f_out, "trajectory CSV");
    fit->add_option("--loss", f_metric, "gwd|kld|kld-tp|jeffreys|jsd|bcd");
    fit->add_option("--f", f_f, "distance transform");
    fit->add_option("--tau", f_tau, "loss modulation");
    fit->add_option("--max-steps", f_steps, "step budget");
    fit->add_option("--stop-iou", f_stop_iou, "stop once SkewIoU reaches this");
    fit->add_option("--objective", f_objective, "gaussian or smooth-l1");

    // assign
    auto* assign = app.add_subcommand("assign", "label assignment over a synthetic grid");
    std::string a_gts, a_out = "assign.csv", a_metric = "kld", a_strategy = "atss";
    double a_tau = 2.0, a_scale = 4.0, a_pos = 0.5, a_neg = 0.4;
    int a_k = 9;
    std::vector<double> a_image = {64.0, 64.0};
    std::vector<int> a_strides = {8, 16};
    assign->add_option("--gts", a_gts, "GT boxes (JSON lines)")->required();
    assign->add_option("--out", a_out, "output CSV");
    assign->add_option("--metric", a_metric, "iou|kld|bcd|gwd");
    assign->add_option("--strategy", a_strategy, "atss or max-iou");
    assign->add_option("--k", a_k, "ATSS candidates per level");
    assign->add_option("--tau", a_tau, "Gaussian affinity modulation");
    assign->add_option("--pos-thresh", a_pos, "MaxIoU positive threshold");
    assign->add_option("--neg-thresh", a_neg, "MaxIoU negative threshold");
    assign->add_option("--image-size", a_image, "image width height")->expected(2);
    assign->add_option("--strides", a_strides, "anchor strides per level");
    assign->add_option("--scale", a_scale, "anchor side = scale * stride");

    // head-fix
    auto* head = app.add_subcommand("head-fix", "3-D heading post-processing");
    std::string h_in, h_out = "head_fix.jsonl";
    double h_ratio = 1.1;
    std::vector<std::string> h_classes = {"vehicle", "cyclist"};
    head->add_option("--in", h_in, "cube records (JSON lines)")->required();
    head->add_option("--out", h_out, "output JSON lines");
    head->add_option("--ratio-threshold", h_ratio, "square-like ratio threshold (> 1)");
    head->add_option("--long-side-classes", h_classes, "classes heading along the long side");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "run the full invariant suite");
    std::uint64_t t_seed = 42;
    std::string t_out = "selftest_out";
    selftest->add_option("--seed", t_seed, "RNG seed for the randomized checks");
    selftest->add_option("--out", t_out, "artifact directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (convert->parsed()) return run_convert(c_in, c_out, c_def, degrees, c_csv);
        if (dist->parsed()) return run_distance(d_pairs, d_out, d_metric, degrees, d_terms);
        if (loss->parsed()) {
            gbox::LossConfig cfg;
            cfg.metric = parse_metric(l_metric);
            cfg.f = parse_normalize_fn(l_f);
            cfg.tau = l_tau;
            return run_loss(l_pairs, l_out, cfg, degrees);
        }
        if (iou->parsed()) return run_iou(i_pairs, i_out, degrees, i_3d);
        if (sweep->parsed()) return run_sweep_cmd(s_scenario, s_metrics, s_f, s_tau, s_out);
        if (grad->parsed()) {
            gbox::LossConfig cfg;
            cfg.metric = parse_metric(g_metric);
            cfg.f = parse_normalize_fn(g_f);
            cfg.tau = g_tau;
            return run_grad_check(g_pairs, g_out, cfg, degrees, g_step, g_raw);
        }
        if (fit->parsed()) {
            gbox::FitConfig cfg;
            cfg.loss.metric = parse_metric(f_metric);
            cfg.loss.f = parse_normalize_fn(f_f);
            cfg.loss.tau = f_tau;
            cfg.max_steps = f_steps;
            cfg.stop_iou = f_stop_iou;
            return run_fit(f_init, f_target, f_out, cfg, degrees, f_objective);
        }
        if (assign->parsed()) {
            gbox::AssignConfig cfg;
            cfg.strategy = a_strategy == "max-iou" ? gbox::AssignStrategy::MaxIoU
                                                   : gbox::AssignStrategy::Atss;
            if (a_strategy != "max-iou" && a_strategy != "atss")
                throw gbox::InvalidConfig("unknown strategy: " + a_strategy);
            if (a_metric == "iou")
                cfg.metric = gbox::AffinityMetric::Iou;
            else if (a_metric == "kld")
                cfg.metric = gbox::AffinityMetric::Kld;
            else if (a_metric == "bcd")
                cfg.metric = gbox::AffinityMetric::Bcd;
            else if (a_metric == "gwd")
                cfg.metric = gbox::AffinityMetric::Gwd;
            else
                throw gbox::InvalidConfig("unknown affinity metric: " + a_metric);
            cfg.k = a_k;
            cfg.tau = a_tau;
            cfg.pos_thresh = a_pos;
            cfg.neg_thresh = a_neg;
            return run_assign(a_gts, a_out, cfg, degrees, a_image[0], a_image[1], a_strides,
                              a_scale);
        }
        if (head->parsed()) {
            gbox::PostProcConfig cfg;
            cfg.ratio_threshold = h_ratio;
            cfg.long_side_classes = std::set<std::string>(h_classes.begin(), h_classes.end());
            return run_head_fix(h_in, h_out, cfg, degrees);
        }
        if (selftest->parsed()) return run_selftest_cmd(t_seed, t_out);
    } catch (const gbox::DegenerateBox& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const gbox::NonSpd& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const gbox::NotHorizontal& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const gbox::ZeroHeading& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const gbox::DivergedFit& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
