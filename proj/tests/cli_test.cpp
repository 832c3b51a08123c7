#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef GBOX_CLI_PATH
#error "GBOX_CLI_PATH must point at the gbox binary"
#endif

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GBOX_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string temp_path(const std::string& name) { return testing::TempDir() + "/" + name; }

TEST(Cli, DistanceOfIdenticalPairIsZero) {
    const std::string pairs = temp_path("pairs.jsonl");
    const std::string out = temp_path("dist.csv");
    write_file(pairs,
               R"({"pred":{"x":0,"y":0,"w":4,"h":2,"theta":0.3},"target":{"x":0,"y":0,"w":4,"h":2,"theta":0.3}})"
               "\n");
    ASSERT_EQ(run_cli("distance --metric kld --pairs " + pairs + " --out " + out), 0);
    EXPECT_EQ(slurp(out), "index,metric,value\n0,kld,0\n");
}

TEST(Cli, LossAndIouCommands) {
    const std::string pairs = temp_path("pairs2.jsonl");
    write_file(pairs,
               R"({"pred":{"x":1,"y":0,"w":2,"h":2,"theta":0},"target":{"x":0,"y":0,"w":2,"h":2,"theta":0}})"
               "\n");
    const std::string loss_out = temp_path("loss.csv");
    ASSERT_EQ(run_cli("loss --metric kld --f sqrt --tau 1 --pairs " + pairs + " --out " + loss_out),
              0);
    EXPECT_NE(slurp(loss_out).find("0.414213562"), std::string::npos);
    const std::string iou_out = temp_path("iou.csv");
    ASSERT_EQ(run_cli("iou --pairs " + pairs + " --out " + iou_out), 0);
    EXPECT_NE(slurp(iou_out).find("0.333333333"), std::string::npos);
}

TEST(Cli, ConvertWithDegrees) {
    const std::string boxes = temp_path("boxes.jsonl");
    const std::string out = temp_path("converted.jsonl");
    write_file(boxes, R"({"x":0,"y":0,"w":2,"h":4,"theta":-45,"def":"oc"})"
                      "\n");
    ASSERT_EQ(run_cli("--degrees convert --def le --in " + boxes + " --out " + out), 0);
    const std::string text = slurp(out);
    EXPECT_NE(text.find("\"def\":\"le\""), std::string::npos);
    EXPECT_NE(text.find("\"w\":4"), std::string::npos);
}

TEST(Cli, SweepScaleScenarioInvariantColumns) {
    const std::string out = temp_path("sweep.csv");
    ASSERT_EQ(run_cli("sweep --scenario scale --metrics kld,bcd,gwd --out " + out), 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "grid_value,metric,distance,loss,skew_iou");
    double kld_first = -1, bcd_first = -1, gwd_base = -1;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string grid, metric, dist, loss, iou;
        std::getline(ss, grid, ',');
        std::getline(ss, metric, ',');
        std::getline(ss, dist, ',');
        std::getline(ss, loss, ',');
        std::getline(ss, iou, ',');
        const double s = std::stod(grid);
        if (metric == "kld") {
            // invariant loss column
            if (kld_first < 0)
                kld_first = std::stod(loss);
            else
                EXPECT_NEAR(std::stod(loss), kld_first, 1e-8);
        } else if (metric == "bcd") {
            if (bcd_first < 0)
                bcd_first = std::stod(loss);
            else
                EXPECT_NEAR(std::stod(loss), bcd_first, 1e-8);
        } else {
            // raw GWD^2 scales exactly as s^2
            const double normalized = std::stod(dist) / (s * s);
            if (gwd_base < 0)
                gwd_base = normalized;
            else
                EXPECT_NEAR(normalized, gwd_base, 1e-6 * gwd_base);
        }
    }
    EXPECT_GT(gwd_base, 0);
}

TEST(Cli, FitBoundaryFixtureReachesHighIou) {
    const std::string init = temp_path("init.json");
    const std::string target = temp_path("target.json");
    const std::string out = temp_path("fit.csv");
    write_file(init, R"({"x":0,"y":0,"w":70,"h":10,"theta":-90,"def":"oc"})");
    write_file(target, R"({"x":0,"y":0,"w":10,"h":70,"theta":-25,"def":"oc"})");
    ASSERT_EQ(run_cli("--degrees fit --init " + init + " --target " + target + " --loss kld --out " +
                      out),
              0);
    std::ifstream in(out);
    std::string line, last;
    std::getline(in, line);
    EXPECT_EQ(line, "step,x,y,w,h,theta,loss,skew_iou");
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    const double final_iou = std::stod(last.substr(last.rfind(',') + 1));
    EXPECT_GE(final_iou, 0.9);
}

TEST(Cli, AssignEmitsThresholdColumn) {
    const std::string gts = temp_path("gts.jsonl");
    const std::string out = temp_path("assign.csv");
    write_file(gts, R"({"x":32,"y":32,"w":20,"h":10,"theta":0.4})"
                    "\n");
    ASSERT_EQ(run_cli("assign --gts " + gts + " --image-size 64 64 --strides 8 16 --out " + out),
              0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "anchor,level,label,gt,affinity,threshold");
    bool has_positive = false;
    std::string line;
    while (std::getline(in, line))
        if (line.find("positive") != std::string::npos) has_positive = true;
    EXPECT_TRUE(has_positive);
}

TEST(Cli, HeadFixRoundTrip) {
    const std::string in_path = temp_path("cubes.jsonl");
    const std::string out = temp_path("fixed.jsonl");
    write_file(in_path,
               R"({"x":0,"y":0,"z":0,"w":4,"h":2,"l":1.5,"theta":0,"dx":0,"dy":-1,"class":"vehicle"})"
               "\n");
    ASSERT_EQ(run_cli("head-fix --in " + in_path + " --out " + out), 0);
    const std::string text = slurp(out);
    EXPECT_NE(text.find("\"class\":\"vehicle\""), std::string::npos);
    EXPECT_NE(text.find("-3.14159265"), std::string::npos);
}

TEST(Cli, ExitCodesDistinguishInputAndNumericErrors) {
    const std::string missing = temp_path("does_not_exist.jsonl");
    EXPECT_EQ(run_cli("distance --metric kld --pairs " + missing), 1);
    const std::string bad = temp_path("bad.jsonl");
    write_file(bad, "this is not json\n");
    EXPECT_EQ(run_cli("distance --metric kld --pairs " + bad), 1);
    const std::string degenerate = temp_path("degenerate.jsonl");
    write_file(degenerate,
               R"({"pred":{"x":0,"y":0,"w":0,"h":2,"theta":0},"target":{"x":0,"y":0,"w":2,"h":2,"theta":0}})"
               "\n");
    EXPECT_EQ(run_cli("distance --metric kld --pairs " + degenerate), 2);
    EXPECT_EQ(run_cli("distance --metric bogus --pairs " + degenerate), 1);
}

TEST(Cli, SelftestPassesAndIsByteDeterministic) {
    const std::string dir_a = temp_path("selftest_a");
    const std::string dir_b = temp_path("selftest_b");
    ASSERT_EQ(run_cli("selftest --seed 42 --out " + dir_a), 0);
    ASSERT_EQ(run_cli("selftest --seed 42 --out " + dir_b), 0);
    for (const char* name :
         {"properties.csv", "sweep_scale.csv", "sweep_angle.csv", "fit_boundary.csv"}) {
        const std::string a = slurp(dir_a + "/" + name);
        const std::string b = slurp(dir_b + "/" + name);
        EXPECT_FALSE(a.empty()) << name;
        EXPECT_EQ(a, b) << name;
    }
    EXPECT_NE(slurp(dir_a + "/properties.csv").find("pass"), std::string::npos);
}

}  // namespace
