#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "leray/spec_io.hpp"

using namespace leray;

namespace {

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

// 2 + sin^2(pi s) sampled on a uniform grid.
json bump_domain_json(double b1 = 1.0, double b2 = 1.0, int nodes = 257) {
    std::vector<double> v(nodes);
    for (int i = 0; i < nodes; ++i) v[i] = 2.0 + std::pow(std::sin(kPi * i / (nodes - 1)), 2);
    return {{"kind", "generator"}, {"b1", b1}, {"b2", b2}, {"profile", {{"type", "tabulated"}, {"values", v}}}};
}

}  // namespace

TEST(SpecIo, InlinePball) {
    const auto d = parse_domain(load_json_arg(R"({"kind":"pball","p":4,"a1":2,"a2":3})"));
    ASSERT_TRUE(d.is_pball());
    EXPECT_EQ(d.pball_p(), 4.0);
    EXPECT_EQ(d.a1(), 2.0);
    EXPECT_EQ(d.a2(), 3.0);
}

TEST(SpecIo, GeneratorProfiles) {
    const auto t = parse_domain(load_json_arg(bump_domain_json(1.5, 0.5).dump()));
    EXPECT_EQ(t.class_tag(), DomainClass::R);
    EXPECT_EQ(t.b1(), 1.5);
    const auto e3 = parse_domain(load_json_arg(R"({"kind":"generator","profile":{"type":"example3"}})"));
    EXPECT_NEAR(e3.b1(), std::sqrt(std::log(10.0)), 1e-15);
    const auto c = parse_domain(load_json_arg(R"({"kind":"generator","profile":{"type":"constant","p":3}})"));
    EXPECT_TRUE(c.is_pball());
    const auto conj = parse_domain(
        load_json_arg(R"({"kind":"generator","profile":{"type":"example3","conjugate":true},"b1":0.5})"));
    EXPECT_NEAR(conj.p(0.3), e3.p_star(0.3), 1e-14);
    EXPECT_EQ(conj.b1(), 0.5);
}

TEST(SpecIo, FromFile) {
    const auto path = std::filesystem::temp_directory_path() / "leray_spec_io_test.json";
    std::ofstream(path) << R"({"kind":"pball","p":3,"a1":1,"a2":1})";
    EXPECT_EQ(parse_domain(load_json_arg(path.string())).pball_p(), 3.0);
    std::filesystem::remove(path);
    EXPECT_THROW(load_json_arg("/nonexistent/spec.json"), SpecError);
}

TEST(SpecIo, Errors) {
    EXPECT_THROW(load_json_arg(""), SpecError);
    EXPECT_THROW(load_json_arg("{not json"), SpecError);
    auto dom = [](const char* s) { return parse_domain(load_json_arg(s)); };
    EXPECT_THROW(dom(R"({"kind":"ellipsoid"})"), SpecError);
    EXPECT_THROW(dom(R"({"p":3})"), SpecError);
    EXPECT_THROW(dom(R"({"kind":"pball","p":"3","a1":1,"a2":1})"), SpecError);
    EXPECT_THROW(dom(R"({"kind":"pball","p":3,"a1":1})"), SpecError);
    EXPECT_THROW(dom(R"({"kind":"pball","p":0.5,"a1":1,"a2":1})"), SpecError);
    EXPECT_THROW(dom(R"({"kind":"generator"})"), SpecError);
    EXPECT_THROW(dom(R"({"kind":"generator","profile":{"type":"spline"}})"), SpecError);
    EXPECT_THROW(dom(R"({"kind":"generator","profile":{"type":"tabulated","values":[2,"x"]}})"), SpecError);
    EXPECT_THROW(dom(R"({"kind":"generator","profile":{"type":"tabulated","values":[2,0.5,2]}})"), SpecError);
    EXPECT_THROW(dom(R"({"kind":"generator","profile":{"type":"example3","conjugate":1}})"), SpecError);
    EXPECT_THROW(dom(R"({"kind":"generator","b1":-1,"profile":{"type":"constant","p":3}})"), SpecError);
    const auto d = from_pball(3, 1, 1);
    EXPECT_THROW(parse_measure(load_json_arg(R"({"type":"weird"})"), d), SpecError);
    EXPECT_THROW(parse_measure(load_json_arg(R"({"type":"order_q"})"), d), SpecError);
}

TEST(SpecIo, Measures) {
    const auto d = from_pball(4, 1, 1);
    EXPECT_EQ(*parse_measure(load_json_arg(R"({"type":"order_q","q":0.25})"), d).order_q(), 0.25);
    EXPECT_EQ(*parse_measure(load_json_arg(R"({"type":"surface"})"), d).order_q(), 1.0);
    EXPECT_NEAR(*parse_measure(load_json_arg(R"({"type":"fefferman"})"), d).order_q(), 2.0 / 3.0, 1e-15);
    EXPECT_EQ(*parse_measure(load_json_arg(R"({"type":"mu0"})"), d).order_q(), 0.0);
}

TEST(SpecIo, DomainRoundTrip) {
    for (const std::string s : {std::string(R"({"kind":"pball","p":3.7,"a1":0.3,"a2":2.5})"),
                                bump_domain_json(1.1, 0.9).dump(),
                                std::string(R"({"kind":"generator","profile":{"type":"example3"}})"),
                                std::string(R"({"kind":"generator","profile":{"type":"example1","blend_start":0.1,"blend_end":0.3}})")}) {
        const auto a = parse_domain(load_json_arg(s));
        const auto b = parse_domain(domain_to_json(a));
        EXPECT_EQ(domain_to_json(a), domain_to_json(b)) << s;
        EXPECT_EQ(a.class_tag(), b.class_tag());
        for (double x : {0.1, 0.5, 0.9}) {
            EXPECT_EQ(a.p(x), b.p(x));
            EXPECT_EQ(a.radii(x), b.radii(x));
        }
    }
}

TEST(SpecIo, Fmt17RoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5})
        EXPECT_EQ(std::strtod(fmt17(x).c_str(), nullptr), x);
}

TEST(Csv, HeaderOrderAndComments) {
    PieceNorm a, b, c;
    a.n = 2, a.m = 0, b.n = 0, b.m = 5, c.n = 0, c.m = 1;
    for (auto* p : {&a, &b, &c}) {
        p->logI_minus1 = LogValue::from_log(0.1);
        p->logI_0 = LogValue::from_log(0.0);
        p->logI_plus1 = LogValue::from_log(0.2);
        p->norm_sq = std::exp(0.3);
    }
    const auto out = lines(piece_norms_csv({a, b, c}, {"domain=x"}));
    ASSERT_EQ(out.size(), 5u);
    EXPECT_EQ(out[0], "# domain=x");
    EXPECT_EQ(out[1], "n,m,norm_sq,ks_norm,logI_m1,logI_0,logI_p1");
    EXPECT_EQ(out[2].substr(0, 4), "0,1,");
    EXPECT_EQ(out[3].substr(0, 4), "0,5,");
    EXPECT_EQ(out[4].substr(0, 4), "2,0,");
    EXPECT_EQ(out[2], "0,1," + fmt17(std::exp(0.3)) + "," + fmt17(std::sqrt(std::exp(0.3) - 1.0)) + ",0.10000000000000001,0,"
                          + "0.20000000000000001");
}

TEST(Csv, DeterministicBodies) {
    const auto d = parse_domain(bump_domain_json());
    const auto mu = surface_measure(d);
    const auto x = piece_norms_csv(piece_norms(d, mu, square_grid(6), 1e-9, 1));
    const auto y = piece_norms_csv(piece_norms(d, mu, square_grid(6), 1e-9, 4));
    EXPECT_EQ(x, y);
}

TEST(Json, SpectrumEncodesInfinity) {
    SpectrumReport r;
    r.p1 = kInf;
    r.continuous_branch.upper = kInf;
    const json j = spectrum_to_json(r);
    EXPECT_EQ(j["p1"], "inf");
    EXPECT_EQ(j["continuous_branch"]["upper"], "inf");
    EXPECT_EQ(j["operator_kind"], "LstarL");
    const json pn = piece_norm_to_json(PieceNorm{});
    EXPECT_EQ(pn["norm_sq"], 1.0);
    EXPECT_TRUE(pn.contains("angle"));
}
