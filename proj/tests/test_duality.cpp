#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "leray/domain.hpp"
#include "leray/duality.hpp"
#include "leray/measure.hpp"
#include "leray/spectrum.hpp"

using namespace leray;

namespace {

DomainModel bumped_domain() {
    std::vector<double> v(4097);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 + std::pow(std::sin(kPi * i / 4096.0), 2);
    return from_generator(std::make_shared<TabulatedProfile>(v), 1.3, 0.8);
}

}  // namespace

TEST(Polar, Pball) {
    const auto pd = polar(from_pball(3, 1, 1));
    ASSERT_TRUE(pd.is_pball());
    EXPECT_NEAR(pd.pball_p(), 1.5, 1e-15);
    const auto q = polar(from_pball(3, 2, 5));
    EXPECT_NEAR(q.a1(), std::pow(2.0, -0.5), 1e-15);
    EXPECT_NEAR(q.a2(), std::pow(5.0, -0.5), 1e-15);
    EXPECT_NEAR(q.b1() * from_pball(3, 2, 5).b1(), 1.0, 1e-15);
}

TEST(Polar, Involution) {
    const auto d = from_pball(3, 2, 5);
    const auto dd = polar(polar(d));
    EXPECT_NEAR(dd.pball_p(), 3.0, 1e-12);
    EXPECT_NEAR(dd.a1(), 2.0, 1e-12);
    EXPECT_NEAR(dd.a2(), 5.0, 1e-12);
    for (const auto& g : {bumped_domain(), builtin_example3()}) {
        const auto gg = polar(polar(g));
        for (int i = 1; i < 100; ++i) {
            const double s = i / 100.0;
            const auto [a1, a2] = g.radii(s);
            const auto [b1, b2] = gg.radii(s);
            EXPECT_NEAR(b1, a1, 1e-9);
            EXPECT_NEAR(b2, a2, 1e-9);
            EXPECT_NEAR(gg.p(s), g.p(s), 1e-12);
        }
    }
}

TEST(Polar, BoundaryCorrespondence) {
    for (const auto& d : {from_pball(3, 2, 5), bumped_domain(), builtin_example3()}) {
        const auto pd = polar(d);
        for (int i = 1; i < 100; ++i) {
            const double s = i / 100.0;
            const auto [r1, r2] = d.radii(s);
            const auto [t1, t2] = t_map(d, s);
            const auto [p1, p2] = pd.radii(s);
            EXPECT_NEAR(t1, p1, 1e-9 * std::max(1.0, p1)) << s;
            EXPECT_NEAR(t2, p2, 1e-9 * std::max(1.0, p2)) << s;
            EXPECT_NEAR(r1 * t1 + r2 * t2, 1.0, 1e-12);
            EXPECT_NEAR(1.0 / d.p(s) + 1.0 / pd.p(s), 1.0, 1e-12);
        }
    }
    EXPECT_THROW(t_map(from_pball(2, 1, 1), 0.0), DomainError);
}

TEST(Polar, RejectsUnsupportedClass) { EXPECT_THROW(polar(builtin_example2()), UnsupportedClass); }

TEST(DualMeasure, ReciprocalDensityAndOrder) {
    const auto d = from_pball(3, 1, 1);
    const auto pd = polar(d);
    for (double q : {-0.5, 0.0, 0.5, 2.0}) {
        const auto m = order_q_measure(d, q);
        const auto dm = dual_measure(m, pd);
        ASSERT_TRUE(dm.order_q().has_value());
        EXPECT_EQ(*dm.order_q(), q);
        EXPECT_NEAR(dm.exponents().B1, -m.exponents().B1, 1e-15);
        EXPECT_NEAR(dm.exponents().B2, -m.exponents().B2, 1e-15);
        // same endpoint exponents as the order-q measure of the polar
        EXPECT_NEAR(dm.exponents().B1, order_q_measure(pd, q).exponents().B1, 1e-12);
        for (double s : {0.01, 0.3, 0.77}) EXPECT_NEAR(m.omega(s) * dm.omega(s), 1.0, 1e-13);
    }
}

TEST(DualMeasure, ContinuousMultipleOfPolarOrderQ) {
    const auto d = bumped_domain();
    const auto pd = polar(d);
    const auto dm = dual_measure(order_q_measure(d, 0.5), pd);
    const auto ref = order_q_measure(pd, 0.5);
    auto ratio = [&](double s) { return dm.omega(s) / ref.omega(s); };
    EXPECT_NEAR(ratio(1e-9) / ratio(1e-12), 1.0, 1e-3);
    EXPECT_NEAR(ratio(1 - 1e-9) / ratio(1 - 1e-12), 1.0, 1e-3);
}

TEST(DualMeasure, RejectsNonAdmissible) {
    const auto d = from_pball(3, 1, 1);
    EXPECT_THROW(dual_measure(order_q_measure(d, 3.5), polar(d)), NonAdmissibleMeasure);
    const auto e3 = builtin_example3();
    EXPECT_THROW(dual_measure(surface_measure(e3), polar(e3)), NonAdmissibleMeasure);
}

TEST(Verify, PballPair) {
    const auto d = from_pball(3, 1, 1);
    const auto pair = make_dual_pair(d, order_q_measure(d, 0.5));
    const auto rep = verify_duality(pair, square_grid(20));
    EXPECT_TRUE(rep.passed);
    EXPECT_LT(rep.max_discrepancy, 1e-6);
    EXPECT_EQ(rep.count, 441u);
}

TEST(Verify, GeneratedDomains) {
    for (const auto& d : {bumped_domain(), builtin_example3()}) {
        for (const auto& mu : {order_q_measure(d, 0.5), mu0_measure(d)}) {
            const auto rep = verify_duality(make_dual_pair(d, mu), square_grid(12));
            EXPECT_LT(rep.max_discrepancy, 1e-6) << mu.label();
        }
    }
}

TEST(Verify, DetectsMismatchedMeasure) {
    const auto d = from_pball(3, 1, 1);
    const auto pd = polar(d);
    DualPair wrong{d, pd, order_q_measure(d, 0.5), order_q_measure(pd, -0.5)};
    const auto rep = verify_duality(wrong, square_grid(6));
    EXPECT_FALSE(rep.passed);
    EXPECT_GT(rep.max_discrepancy, 1e-3);
}
