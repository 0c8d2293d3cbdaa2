#pragma once

// Rotation-invariant boundary measures (1/4pi^2) omega(s) ds dtheta1 dtheta2.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "leray/domain.hpp"
#include "leray/error.hpp"
#include "leray/numerics.hpp"

namespace leray {

/// omega ~ d^B * log(1/d)^log_power at distance d from an endpoint.
struct MeasureAsymptotics {
    double B = 0.0;
    double log_power = 0.0;
};

class BoundaryMeasure {
public:
    using LogOmega = std::function<double(double, double)>;

    BoundaryMeasure(DomainModel d, LogOmega log_omega, std::optional<std::array<MeasureAsymptotics, 2>> ends,
                    std::optional<double> order_q, std::string label, nlohmann::json spec)
        : domain_(std::move(d)),
          log_omega_(std::move(log_omega)),
          ends_(ends),
          q_(order_q),
          label_(std::move(label)),
          spec_(std::move(spec)) {}

    const DomainModel& domain() const { return domain_; }
    double log_omega(double s, double sc) const { return log_omega_(s, sc); }
    double log_omega(double s) const { return log_omega_(s, 1.0 - s); }
    double omega(double s) const { return std::exp(log_omega(s)); }
    const LogOmega& log_omega_fn() const { return log_omega_; }

    bool has_exponents() const { return ends_.has_value(); }
    EndpointExponents exponents() const {
        if (!ends_) throw DomainError("measure '" + label_ + "' carries no endpoint exponents");
        return {(*ends_)[0].B, (*ends_)[1].B};
    }
    MeasureAsymptotics endpoint(int j) const {
        if (!ends_) throw DomainError("measure '" + label_ + "' carries no endpoint exponents");
        return (*ends_)[j];
    }
    const std::optional<std::array<MeasureAsymptotics, 2>>& asymptotics() const { return ends_; }
    std::optional<double> order_q() const { return q_; }
    const std::string& label() const { return label_; }
    const nlohmann::json& spec() const { return spec_; }

    /// Same density with the exponent metadata dropped.
    BoundaryMeasure without_exponents() const {
        return BoundaryMeasure(domain_, log_omega_, std::nullopt, q_, label_, spec_);
    }

private:
    DomainModel domain_;
    LogOmega log_omega_;
    std::optional<std::array<MeasureAsymptotics, 2>> ends_;
    std::optional<double> q_;
    std::string label_;
    nlohmann::json spec_;
};

namespace detail {

// log of r1^2 r2^2 / (p s (1-s)).
inline double log_omega0(const DomainModel& d, double s, double sc) {
    const auto [l1, l2] = d.log_radii(s, sc);
    const double ip = d.inv_p(s, sc);
    return 2.0 * l1 + 2.0 * l2 + std::log(ip) - std::log(s) - std::log(sc);
}

// log((s/r1)^2 + ((1-s)/r2)^2).
inline double log_q(const DomainModel& d, double s, double sc) {
    const auto [l1, l2] = d.log_radii(s, sc);
    const double a = 2.0 * (std::log(s) - l1), b = 2.0 * (std::log(sc) - l2);
    return log_add(a, b);
}

inline std::array<MeasureAsymptotics, 2> order_asymptotics(const DomainModel& d, double q) {
    std::array<MeasureAsymptotics, 2> ends;
    for (int j = 0; j < 2; ++j) {
        const EndpointBehavior e = d.profile().endpoint(j);
        ends[j].B = q * (2.0 * e.inv_p - 1.0);
        ends[j].log_power = q * (2.0 * e.r_log_power - e.p_log_power);
    }
    return ends;
}

}  // namespace detail

/// omega = phi * (r1^2 r2^2 / (p s (1-s)))^q.
inline BoundaryMeasure order_q_measure(const DomainModel& d, double q,
                                       std::function<double(double)> phi = nullptr) {
    if (!std::isfinite(q)) throw DomainError("order_q_measure: q must be finite");
    BoundaryMeasure::LogOmega f = [d, q, phi](double s, double sc) {
        double v = q == 0.0 ? 0.0 : q * detail::log_omega0(d, s, sc);
        if (phi) v += std::log(phi(s));
        return v;
    };
    return BoundaryMeasure(d, std::move(f), detail::order_asymptotics(d, q), q,
                           "order_q(" + nlohmann::json(q).dump() + ")", {{"type", "order_q"}, {"q", q}});
}

/// Euclidean surface measure (order 1).
inline BoundaryMeasure surface_measure(const DomainModel& d) {
    BoundaryMeasure::LogOmega f = [d](double s, double sc) {
        return detail::log_omega0(d, s, sc) + 0.5 * detail::log_q(d, s, sc);
    };
    return BoundaryMeasure(d, std::move(f), detail::order_asymptotics(d, 1.0), 1.0, "surface",
                           {{"type", "surface"}});
}

/// Fefferman measure (order 2/3).
inline BoundaryMeasure fefferman_measure(const DomainModel& d) {
    BoundaryMeasure::LogOmega f = [d](double s, double sc) {
        return (2.0 / 3.0) * (detail::log_omega0(d, s, sc) - std::log(2.0));
    };
    return BoundaryMeasure(d, std::move(f), detail::order_asymptotics(d, 2.0 / 3.0), 2.0 / 3.0, "fefferman",
                           {{"type", "fefferman"}});
}

/// omega = 1.
inline BoundaryMeasure mu0_measure(const DomainModel& d) {
    return BoundaryMeasure(d, [](double, double) { return 0.0; },
                           std::array<MeasureAsymptotics, 2>{}, 0.0, "mu0", {{"type", "mu0"}});
}

/// Size of the Levi form, normalised against surface measure.
inline double levi_norm(const DomainModel& d, double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("levi_norm: s must lie in (0,1)");
    const double sc = 1.0 - s;
    // p s (1-s) / (r1^2 r2^2) = 1/omega0
    return std::exp(-detail::log_omega0(d, s, sc) - std::log(4.0) - 1.5 * detail::log_q(d, s, sc));
}

enum class Admissibility { Admissible, NotAdmissible, Inconclusive };

inline std::string to_string(Admissibility a) {
    switch (a) {
        case Admissibility::Admissible: return "Admissible";
        case Admissibility::NotAdmissible: return "NotAdmissible";
        default: return "Inconclusive";
    }
}

struct AdmissibilityReport {
    Admissibility verdict = Admissibility::Inconclusive;
    bool boundary_case = false;
    bool numerical = false;
    std::optional<EndpointExponents> exponents;
    std::string note;
};

namespace detail {

enum class TailVerdict { Convergent, Divergent, Inconclusive };

// Convergence of the integral of exp(sign * log omega) at endpoint j from the
// ratio of integrals over consecutive decades approaching the endpoint.
inline TailVerdict tail_test(const BoundaryMeasure& m, int j, double sign) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    auto decade = [&](int k) {
        const double lo = std::pow(10.0, -(k + 1)), hi = std::pow(10.0, -k);
        auto f = [&](double t) {
            const double d = std::exp(t);
            const double v = j == 0 ? m.log_omega(d, 1.0 - d) : m.log_omega(1.0 - d, d);
            return std::exp(sign * v + t);
        };
        return GK::integrate(f, std::log(lo), std::log(hi), 12, 1e-8);
    };
    int conv = 0, div = 0;
    for (int k = 6; k <= 12; k += 2) {
        const double t1 = decade(k), t2 = decade(k + 1);
        if (!std::isfinite(t1) || !std::isfinite(t2)) {
            ++div;
            continue;
        }
        const double r = t2 / t1;
        if (r < 0.9) ++conv;
        else if (r > 1.1) ++div;
    }
    if (conv == 4) return TailVerdict::Convergent;
    if (div == 4) return TailVerdict::Divergent;
    return TailVerdict::Inconclusive;
}

// Convergence of the integral near 0 of d^B log(1/d)^c.
inline bool power_log_integrable(double B, double c) {
    if (B > -1.0) return true;
    if (B < -1.0) return false;
    return c < -1.0;
}

}  // namespace detail

/// Both the integral of omega and of 1/omega over (0,1) are finite.
inline AdmissibilityReport is_admissible_report(const BoundaryMeasure& m) {
    AdmissibilityReport rep;
    if (m.has_exponents()) {
        rep.exponents = m.exponents();
        bool ok = true;
        constexpr double kEdge = 1e-12;
        for (int j = 0; j < 2; ++j) {
            const MeasureAsymptotics a = m.endpoint(j);
            const bool edge = std::abs(std::abs(a.B) - 1.0) <= kEdge;
            const double B = edge ? (a.B > 0 ? 1.0 : -1.0) : a.B;
            const bool direct = detail::power_log_integrable(B, a.log_power);
            const bool inverse = detail::power_log_integrable(-B, -a.log_power);
            if (edge) {
                rep.boundary_case = true;
                rep.note += "|B" + std::to_string(j + 1) + "| = 1 (threshold); ";
            }
            if (!direct) {
                ok = false;
                rep.note += std::string("integral of omega diverges at s=") + (j == 0 ? "0" : "1") + "; ";
            }
            if (!inverse) {
                ok = false;
                rep.note += std::string("integral of 1/omega diverges at s=") + (j == 0 ? "0" : "1") + "; ";
            }
        }
        if (rep.note.size() >= 2) rep.note.resize(rep.note.size() - 2);
        rep.verdict = ok ? Admissibility::Admissible : Admissibility::NotAdmissible;
        return rep;
    }
    rep.numerical = true;
    bool inconclusive = false;
    for (int j = 0; j < 2; ++j) {
        for (double sign : {1.0, -1.0}) {
            const auto t = detail::tail_test(m, j, sign);
            if (t == detail::TailVerdict::Divergent) {
                rep.verdict = Admissibility::NotAdmissible;
                rep.note += std::string("integral of ") + (sign > 0 ? "omega" : "1/omega") + " diverges at s="
                            + (j == 0 ? "0" : "1") + "; ";
                return rep;
            }
            if (t == detail::TailVerdict::Inconclusive) inconclusive = true;
        }
    }
    rep.verdict = inconclusive ? Admissibility::Inconclusive : Admissibility::Admissible;
    if (inconclusive) rep.note = "endpoint tail ratios too close to 1 to decide";
    return rep;
}

inline Admissibility is_admissible(const BoundaryMeasure& m) { return is_admissible_report(m).verdict; }

/// min_j |p_j/(p_j - 2)| over the endpoint exponents; infinite when both are 2.
/// Defined for classes P and R only.
inline double order_q_threshold(const DomainModel& d) {
    if (d.class_tag() != DomainClass::P && d.class_tag() != DomainClass::R)
        throw UnsupportedClass("order-q threshold is defined for classes P and R only (domain is "
                               + to_string(d.class_tag()) + ")");
    double t = kInf;
    for (int j = 0; j < 2; ++j) {
        const double p = d.profile().endpoint(j).p_limit;
        if (p == 2.0) continue;
        t = std::min(t, std::abs(p / (p - 2.0)));
    }
    return t;
}

}  // namespace leray
