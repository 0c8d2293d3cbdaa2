#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

using nlohmann::json;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(LERAY_CLI_PATH) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string sample(const std::string& name) { return std::string(LERAY_SAMPLES_DIR) + "/" + name; }

std::vector<std::string> body_lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    for (std::string l; std::getline(in, l);)
        if (!l.empty() && l[0] != '#') out.push_back(l);
    return out;
}

}  // namespace

TEST(Cli, DomainInfo) {
    const auto r = run("domain-info --domain " + sample("tabulated_bump.json"));
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["class"], "R");
    EXPECT_EQ(j["config"]["command"], "domain-info");
    const auto e = json::parse(run("domain-info --domain " + sample("example2.json")).out);
    EXPECT_EQ(e["class"], "OutsideTildeR");
}

TEST(Cli, PieceNormsCsv) {
    const auto r = run("piece-norms --domain " + sample("unit_ball.json") + " --n-max 3");
    ASSERT_EQ(r.code, 0);
    const auto rows = body_lines(r.out);
    ASSERT_EQ(rows.size(), 17u);
    EXPECT_EQ(rows[0], "n,m,norm_sq,ks_norm,logI_m1,logI_0,logI_p1");
    EXPECT_EQ(rows[1].substr(0, 4), "0,0,");
    EXPECT_EQ(rows[16].substr(0, 4), "3,3,");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto c1 = rows[i].find(','), c2 = rows[i].find(',', c1 + 1), c3 = rows[i].find(',', c2 + 1);
        EXPECT_NEAR(std::stod(rows[i].substr(c2 + 1, c3 - c2 - 1)), 1.0, 1e-9) << rows[i];
    }
}

TEST(Cli, PieceNormsDeterministicAndJson) {
    const std::string args = "piece-norms --domain " + sample("tabulated_bump.json") + " --measure "
                             + sample("measure_surface.json") + " --n-max 4";
    EXPECT_EQ(body_lines(run(args).out), body_lines(run(args).out));
    const auto j = json::parse(run(args + " --format json --grid diagonal").out);
    ASSERT_TRUE(j.contains("pieces"));
    EXPECT_EQ(j["pieces"].back()["n"], 4);
    EXPECT_EQ(j["pieces"].back()["m"], 4);
}

TEST(Cli, OutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "leray_cli_test.csv";
    std::filesystem::remove(path);
    const auto r = run("piece-norms --domain " + sample("pball_p4.json") + " --n-max 1 --out " + path.string());
    ASSERT_EQ(r.code, 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(body_lines(ss.str()).size(), 5u);
    std::filesystem::remove(path);
}

TEST(Cli, Spectrum) {
    const auto j = json::parse(run("spectrum --domain " + sample("pball_p4.json") + " --report-n 3").out);
    EXPECT_NEAR(j["essential_norm"].get<double>(), 2.0 / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(j["discrete_family_1"][0].get<double>(), 4.0 / 3.0, 1e-14);
    EXPECT_EQ(j["discrete_family_1"].size(), 4u);
    const auto k = json::parse(run("spectrum --domain " + sample("unit_ball.json") + " --kind ks").out);
    EXPECT_EQ(k["essential_norm"].get<double>(), 0.0);
    EXPECT_EQ(k["operator_kind"], "KerzmanStein");
}

TEST(Cli, Dual) {
    const auto r = run("dual --domain " + sample("pball_p3.json") + " --measure " + sample("measure_q_half.json")
                       + " --n-max 6");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["verification"]["passed"].get<bool>());
    EXPECT_LT(j["verification"]["max_discrepancy"].get<double>(), 1e-6);
    EXPECT_NEAR(j["polar"]["p"].get<double>(), 1.5, 1e-12);
}

TEST(Cli, Admissible) {
    const auto r = run("admissible --domain " + sample("example3.json") + " --q 0.5,1 --measure "
                       + sample("measure_surface.json"));
    ASSERT_EQ(r.code, 0);
    const auto rows = body_lines(r.out);
    ASSERT_GE(rows.size(), 4u);
    EXPECT_NE(rows[1].find("Admissible"), std::string::npos);
    EXPECT_NE(rows[2].find("NotAdmissible"), std::string::npos);
    EXPECT_NE(rows[3].find("NotAdmissible"), std::string::npos);
}

TEST(Cli, KernelEval) {
    const auto j = json::parse(run("kernel-eval --domain " + sample("unit_ball.json")
                                   + " --point 0.3 0 0 0.4 --n 1 --m 2 --s 0.25")
                                   .out);
    EXPECT_NEAR(j["monomial_image"][0].get<double>(), 3.2 * 0.3 * -0.16, 1e-12);
    EXPECT_NEAR(j["monomial_image"][1].get<double>(), 0.0, 1e-14);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("piece-norms --domain '{bad'").code, 2);
    EXPECT_EQ(run("piece-norms --domain /nonexistent.json").code, 2);
    EXPECT_EQ(run("piece-norms --domain " + sample("pball_p4.json") + " --measure '{\"type\":\"order_q\",\"q\":3}'").code,
              3);
    EXPECT_EQ(run("spectrum --domain " + sample("example1.json")).code, 4);
    EXPECT_EQ(run("dual --domain " + sample("example2.json")).code, 4);
    EXPECT_EQ(run("kernel-eval --domain " + sample("unit_ball.json") + " --point 1 0 1 0").code, 2);
}
