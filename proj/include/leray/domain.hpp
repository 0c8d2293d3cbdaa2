#pragma once

// Convex complete Reinhardt domains in C^2 described by a generator profile
// and the scale constants b1 = r1(1), b2 = r2(0).

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "leray/error.hpp"
#include "leray/numerics.hpp"
#include "leray/profile.hpp"

namespace leray {

enum class DomainClass { P, R, TildeR, OutsideTildeR };

inline std::string to_string(DomainClass c) {
    switch (c) {
        case DomainClass::P: return "P";
        case DomainClass::R: return "R";
        case DomainClass::TildeR: return "TildeR";
        default: return "OutsideTildeR";
    }
}

struct Classification {
    DomainClass tag = DomainClass::OutsideTildeR;
    std::string note;
};

/// Class membership from the profile's declared data (plus numerical Dini
/// tails for tabulated profiles with unknown endpoint regularity).
inline Classification classify_detailed(const GeneratorProfile& prof) {
    if (prof.kind() == ProfileKind::Constant) return {DomainClass::P, "constant exponent"};
    if (prof.interior_degenerate())
        return {DomainClass::OutsideTildeR, "exponent reaches 1 or infinity at an interior point"};
    bool finite_ends = true;
    bool dini = true;
    std::string note;
    for (int j = 0; j < 2; ++j) {
        const EndpointBehavior e = prof.endpoint(j);
        const std::string where = j == 0 ? "s=0" : "s=1";
        if (!(e.p_limit > 1.0 && std::isfinite(e.p_limit))) {
            finite_ends = false;
            if (e.p_limit <= 1.0)
                note += "conjugate exponent unbounded at " + where + "; ";
            else
                note += "exponent unbounded at " + where + "; ";
            continue;
        }
        DiniRegularity r = e.dini;
        if (r == DiniRegularity::Unknown && prof.kind() == ProfileKind::TabulatedSmooth) r = prof.numeric_dini(j);
        if (r == DiniRegularity::Unknown)
            throw InconclusiveClassification("endpoint regularity at " + where + " is unknown");
        if (r == DiniRegularity::DiniDivergent) {
            dini = false;
            note += "Dini integral diverges at " + where + "; ";
        }
    }
    if (note.size() >= 2) note.resize(note.size() - 2);
    if (finite_ends && dini) return {DomainClass::R, "finite endpoint exponents with convergent Dini integrals"};
    if (finite_ends || prof.tilde_conditions()) return {DomainClass::TildeR, "R-membership fails: " + note};
    return {DomainClass::OutsideTildeR, note};
}

inline DomainClass classify(const GeneratorProfile& prof) { return classify_detailed(prof).tag; }
inline DomainClass classify(const ProfilePtr& prof) { return classify(*prof); }

namespace detail {

/// log r1, log r2 tabulated over y = log(s/(1-s)) in [-kY, kY].
class RadiusTable {
public:
    static constexpr int kN = 32769;
    static constexpr double kY = 40.0;
    static constexpr double kH = 2.0 * kY / (kN - 1);

    RadiusTable(ProfilePtr prof, double b1, double b2)
        : prof_(std::move(prof)), lb1_(std::log(b1)), lb2_(std::log(b2)) {
        for (double s : prof_->breakpoints()) breaks_.push_back(y_of(s, 1.0 - s));
        for (double s : prof_->singular_points()) singular_.push_back(y_of(s, 1.0 - s));
        std::sort(breaks_.begin(), breaks_.end());
        std::sort(singular_.begin(), singular_.end());

        std::vector<double> d1(kN - 1), d2(kN - 1);
        for (int i = 0; i + 1 < kN; ++i) {
            const auto [a, b] = integrate_cell(node(i), node(i + 1));
            d1[i] = a;
            d2[i] = b;
        }
        lr1_.assign(kN, 0.0);
        lr2_.assign(kN, 0.0);
        {
            const auto [s, sc] = s_of_y(kY);
            lr1_[kN - 1] = lb1_ - prof_->inv_p(s, sc) * std::log1p(std::exp(-kY));
        }
        for (int i = kN - 2; i >= 0; --i) lr1_[i] = lr1_[i + 1] - d1[i];
        {
            const auto [s, sc] = s_of_y(-kY);
            lr2_[0] = lb2_ - prof_->inv_p(s, sc) * std::log1p(std::exp(-kY));
        }
        for (int i = 0; i + 1 < kN; ++i) lr2_[i + 1] = lr2_[i] - d2[i];
    }

    std::pair<double, double> log_radii(double s, double sc) const {
        if (s <= 0.0) return {-kInf, lb2_};
        if (sc <= 0.0) return {lb1_, -kInf};
        const double y = y_of(s, sc);
        if (y < -kY) {
            const double ip = prof_->inv_p(s, sc);
            const double tail = integrate_far(y, -kY, true);
            return {lr1_[0] - tail, lb2_ - ip * std::log1p(s / sc)};
        }
        if (y > kY) {
            const double ip = prof_->inv_p(s, sc);
            const double tail = integrate_far(kY, y, false);
            return {lb1_ - ip * std::log1p(sc / s), lr2_[kN - 1] - tail};
        }
        int i = static_cast<int>(std::floor((y + kY) / kH));
        i = std::clamp(i, 0, kN - 2);
        const double y0 = node(i), y1 = node(i + 1);
        if (y - y0 <= y1 - y) {
            const auto [a, b] = integrate_cell(y0, y);
            return {lr1_[i] + a, lr2_[i] - b};
        }
        const auto [a, b] = integrate_cell(y, y1);
        return {lr1_[i + 1] - a, lr2_[i + 1] + b};
    }

    static double y_of(double s, double sc) { return std::log(s) - std::log(sc); }
    static std::pair<double, double> s_of_y(double y) {
        return {1.0 / (1.0 + std::exp(-y)), 1.0 / (1.0 + std::exp(y))};
    }

private:
    static double node(int i) { return i == (kN - 1) / 2 ? 0.0 : -kY + kH * i; }

    // d(log r1)/dy = sc/p, d(log r2)/dy = -s/p.
    std::pair<double, double> integrand(double y) const {
        const auto [s, sc] = s_of_y(y);
        const double ip = prof_->inv_p(s, sc);
        return {ip * sc, ip * s};
    }

    std::pair<double, double> integrate_smooth(double a, double b) const {
        using GL = boost::math::quadrature::gauss<double, 8>;
        const auto& x = GL::abscissa();
        const auto& w = GL::weights();
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double r1 = 0.0, r2 = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (x[k] == 0.0) {
                const auto [f1, f2] = integrand(mid);
                r1 += w[k] * f1;
                r2 += w[k] * f2;
                continue;
            }
            const auto [f1, f2] = integrand(mid - half * x[k]);
            const auto [g1, g2] = integrand(mid + half * x[k]);
            r1 += w[k] * (f1 + g1);
            r2 += w[k] * (f2 + g2);
        }
        return {r1 * half, r2 * half};
    }

    // Pieces touching a singular point have it at an endpoint.
    std::pair<double, double> integrate_adaptive(double a, double b) const {
        thread_local boost::math::quadrature::tanh_sinh<double> ts;
        const double r1 = ts.integrate([&](double y) { return integrand(y).first; }, a, b, 1e-14);
        const double r2 = ts.integrate([&](double y) { return integrand(y).second; }, a, b, 1e-14);
        return {r1, r2};
    }

    bool near_singular(double a, double b) const {
        for (double z : singular_)
            if (z >= a - 2.0 * kH && z <= b + 2.0 * kH) return true;
        return false;
    }

    // Integral of both slopes over [a, b], split at profile breakpoints.
    std::pair<double, double> integrate_cell(double a, double b) const {
        if (a == b) return {0.0, 0.0};
        const bool singular = near_singular(a, b);
        auto piece = [&](double l, double r) {
            return singular ? integrate_adaptive(l, r) : integrate_smooth(l, r);
        };
        auto lo = std::upper_bound(breaks_.begin(), breaks_.end(), a);
        double left = a;
        double r1 = 0.0, r2 = 0.0;
        for (auto it = lo; it != breaks_.end() && *it < b; ++it) {
            const auto [p1, p2] = piece(left, *it);
            r1 += p1;
            r2 += p2;
            left = *it;
        }
        const auto [p1, p2] = piece(left, b);
        return {r1 + p1, r2 + p2};
    }

    // Slope integral outside the tabulated range.
    double integrate_far(double a, double b, bool first) const {
        auto f = [&](double y) {
            const auto v = integrand(y);
            return first ? v.first : v.second;
        };
        return gk21_unit(f, a, b, 12, 1e-13);
    }

    ProfilePtr prof_;
    double lb1_, lb2_;
    std::vector<double> breaks_, singular_;
    std::vector<double> lr1_, lr2_;
};

}  // namespace detail

class DomainModel {
public:
    /// a1 |z1|^p + a2 |z2|^p < 1.
    static DomainModel from_pball(double p, double a1, double a2) {
        if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("from_pball: p must satisfy 1 < p < inf");
        if (!(a1 > 0.0) || !(a2 > 0.0)) throw DomainError("from_pball: a1 and a2 must be positive");
        auto impl = std::make_shared<Impl>();
        impl->profile = std::make_shared<ConstantProfile>(p);
        impl->b1 = std::pow(a1, -1.0 / p);
        impl->b2 = std::pow(a2, -1.0 / p);
        impl->pball = true;
        impl->p = p;
        impl->a1 = a1;
        impl->a2 = a2;
        impl->cls = {DomainClass::P, "constant exponent"};
        return DomainModel(std::move(impl));
    }

    static DomainModel from_generator(ProfilePtr profile, double b1, double b2) {
        if (!profile) throw InvalidProfile("from_generator: null profile");
        if (!(b1 > 0.0) || !(b2 > 0.0) || !std::isfinite(b1) || !std::isfinite(b2))
            throw DomainError("from_generator: b1 and b2 must be positive and finite");
        if (auto c = std::dynamic_pointer_cast<const ConstantProfile>(profile)) {
            const double p = c->value();
            return from_pball(p, std::pow(b1, -p), std::pow(b2, -p));
        }
        auto impl = std::make_shared<Impl>();
        impl->profile = profile;
        impl->b1 = b1;
        impl->b2 = b2;
        impl->cls = classify_detailed(*profile);
        impl->table = std::make_shared<detail::RadiusTable>(profile, b1, b2);
        const auto [l1, l2] = impl->table->log_radii(0.5, 0.5);
        if (!std::isfinite(l1) || !std::isfinite(l2))
            throw InvalidProfile("from_generator: reconstruction integrals diverge at an interior point");
        return DomainModel(std::move(impl));
    }

    const GeneratorProfile& profile() const { return *impl_->profile; }
    const ProfilePtr& profile_ptr() const { return impl_->profile; }
    double b1() const { return impl_->b1; }
    double b2() const { return impl_->b2; }
    DomainClass class_tag() const { return impl_->cls.tag; }
    const std::string& class_note() const { return impl_->cls.note; }
    bool is_pball() const { return impl_->pball; }
    double pball_p() const { return impl_->p; }
    double a1() const { return impl_->a1; }
    double a2() const { return impl_->a2; }

    double inv_p(double s, double sc) const { return impl_->profile->inv_p(s, sc); }
    double p(double s) const { return impl_->profile->p(s); }
    double p_star(double s) const { return impl_->profile->p_star(s); }

    /// (log r1, log r2) at s; sc = 1 - s given exactly.
    std::pair<double, double> log_radii(double s, double sc) const {
        if (impl_->pball) {
            const double ip = 1.0 / impl_->p;
            const double l1 = s <= 0.0 ? -kInf : std::log(impl_->b1) + ip * std::log(s);
            const double l2 = sc <= 0.0 ? -kInf : std::log(impl_->b2) + ip * std::log(sc);
            return {l1, l2};
        }
        return impl_->table->log_radii(s, sc);
    }
    std::pair<double, double> log_radii(double s) const { return log_radii(s, 1.0 - s); }

    std::pair<double, double> radii(double s) const {
        if (!(s >= 0.0 && s <= 1.0)) throw DomainError("radii: s must lie in [0,1]");
        if (s == 0.0) return {0.0, impl_->b2};
        if (s == 1.0) return {impl_->b1, 0.0};
        const auto [l1, l2] = log_radii(s, 1.0 - s);
        return {std::exp(l1), std::exp(l2)};
    }

private:
    struct Impl {
        ProfilePtr profile;
        double b1 = 1.0, b2 = 1.0;
        bool pball = false;
        double p = 0.0, a1 = 0.0, a2 = 0.0;
        Classification cls;
        std::shared_ptr<const detail::RadiusTable> table;
    };
    explicit DomainModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

inline DomainModel from_pball(double p, double a1, double a2) { return DomainModel::from_pball(p, a1, a2); }
inline DomainModel from_generator(ProfilePtr profile, double b1, double b2) {
    return DomainModel::from_generator(std::move(profile), b1, b2);
}

inline std::pair<double, double> radii(const DomainModel& d, double s) { return d.radii(s); }

struct OsculationData {
    double s = 0.0;
    double p = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
};

/// Weighted p-ball a1|z1|^p + a2|z2|^p < 1 osculating the boundary at s.
inline OsculationData osculate(const DomainModel& d, double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("osculate: s must lie in (0,1)");
    const double sc = 1.0 - s;
    const double p = d.profile().p(s, sc);
    const auto [l1, l2] = d.log_radii(s, sc);
    const double r1 = std::exp(l1), r2 = std::exp(l2);
    if (std::isfinite(p) && p > 1.0) {
        // Graph r2 = phi(r1) with phi' and phi'' expressed through s.
        const double phi = r2;
        const double d1 = -(s / sc) * (r2 / r1);
        const double d2 = -((p - 1.0) * s / (sc * sc)) * (r2 / (r1 * r1));
        const double a1 = (1.0 - p) * d1 * d1 / (std::pow(r1, p) * phi * d2);
        const double a2 = (p - 1.0) * d1 / (r1 * std::pow(phi, p) * d2);
        if (std::isfinite(a1) && std::isfinite(a2) && a1 > 0.0 && a2 > 0.0) return {s, p, a1, a2};
    }
    // Degenerate exponent or overflow: the same quantities after cancellation.
    return {s, p, std::exp(std::log(s) - p * l1), std::exp(std::log(sc) - p * l2)};
}

/// s with r1(s) = r1.
inline double s_of_r1(const DomainModel& d, double r1) {
    if (!(r1 >= 0.0 && r1 <= d.b1())) throw DomainError("s_of_r1: r1 must lie in [0, b1]");
    if (r1 == 0.0) return 0.0;
    if (r1 == d.b1()) return 1.0;
    if (d.is_pball()) return std::pow(r1 / d.b1(), d.pball_p());
    const double target = std::log(r1);
    double lo = -745.0, hi = 745.0;
    for (int it = 0; it < 300 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto [s, sc] = detail::RadiusTable::s_of_y(mid);
        if (d.log_radii(s, sc).first < target)
            lo = mid;
        else
            hi = mid;
    }
    return detail::RadiusTable::s_of_y(0.5 * (lo + hi)).first;
}

struct CurvatureData {
    double s = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double kappa3 = 0.0;
};

namespace detail {

// (s/r1, (1-s)/r2), the coordinates of the boundary correspondence with the polar.
inline std::pair<double, double> normal_coefficients(const DomainModel& d, double s, double sc) {
    const auto [l1, l2] = d.log_radii(s, sc);
    return {std::exp(std::log(s) - l1), std::exp(std::log(sc) - l2)};
}

}  // namespace detail

/// Principal curvatures of the boundary at parameter s.
inline CurvatureData curvatures(const DomainModel& d, double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("curvatures: s must lie in (0,1)");
    const double sc = 1.0 - s;
    const auto [l1, l2] = d.log_radii(s, sc);
    const double r1 = std::exp(l1), r2 = std::exp(l2);
    const double u = std::exp(std::log(s) - l1), v = std::exp(std::log(sc) - l2);
    const double q = u * u + v * v;
    const double rq = std::sqrt(q);
    const double p = d.profile().p(s, sc);
    const double k3 = p == kInf ? kInf : (p - 1.0) * u * v / (r1 * r2 * q * rq);
    return {s, u / (r1 * rq), v / (r2 * rq), k3};
}

/// Example 1: exponent drops to 1 at s = 1/2.
inline DomainModel builtin_example1(double blend_start = 0.05, double blend_end = 0.2) {
    return from_generator(std::make_shared<Example1Profile>(blend_start, blend_end), 1.0, 1.0);
}

/// Example 2: exponent blows up like |s-1/2|^-nu.
inline DomainModel builtin_example2(double nu = 0.5) {
    return from_generator(std::make_shared<Example2Profile>(nu), 1.0, 1.0);
}

inline double example3_default_b1() { return std::sqrt(std::log(10.0)); }

/// Example 3: p = log(10/s)/(log(10/s) - 1/2), b1 = sqrt(log 10), b2 = 1.
inline DomainModel builtin_example3() {
    return from_generator(std::make_shared<Example3Profile>(), example3_default_b1(), 1.0);
}

}  // namespace leray
