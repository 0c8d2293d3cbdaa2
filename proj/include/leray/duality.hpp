#pragma once

// Polar domain, boundary correspondence and dual measure.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "leray/domain.hpp"
#include "leray/error.hpp"
#include "leray/measure.hpp"
#include "leray/spectrum.hpp"

namespace leray {

/// Domain generated by the conjugate profile with scales 1/b1, 1/b2.
inline DomainModel polar(const DomainModel& d) {
    if (d.class_tag() == DomainClass::OutsideTildeR)
        throw UnsupportedClass("polar: domain lies outside the supported class (" + d.class_note() + ")");
    if (d.is_pball()) {
        const double ps = conjugate_exponent(d.pball_p());
        return from_pball(ps, std::pow(d.b1(), ps), std::pow(d.b2(), ps));
    }
    return from_generator(conjugate(d.profile_ptr()), 1.0 / d.b1(), 1.0 / d.b2());
}

/// (s/r1, (1-s)/r2): radii of the polar at the same parameter s.
inline std::pair<double, double> t_map(const DomainModel& d, double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("t_map: s must lie in (0,1)");
    return detail::normal_coefficients(d, s, 1.0 - s);
}

/// omega~ = 1/omega on the polar.  An order-q measure maps to an order-q measure.
inline BoundaryMeasure dual_measure(const BoundaryMeasure& m, const DomainModel& polar_domain) {
    const auto adm = is_admissible_report(m);
    if (adm.verdict != Admissibility::Admissible)
        throw NonAdmissibleMeasure("dual_measure: measure " + m.label() + " is not admissible (" + adm.note + ")");
    std::optional<std::array<MeasureAsymptotics, 2>> ends;
    if (m.asymptotics()) {
        ends = *m.asymptotics();
        for (auto& e : *ends) {
            e.B = -e.B;
            e.log_power = -e.log_power;
        }
    }
    auto lw = m.log_omega_fn();
    nlohmann::json spec{{"type", "dual"}, {"of", m.spec()}};
    return BoundaryMeasure(polar_domain, [lw](double s, double sc) { return -lw(s, sc); }, ends, m.order_q(),
                           "dual(" + m.label() + ")", std::move(spec));
}

struct DualPair {
    DomainModel primal;
    DomainModel polar;
    BoundaryMeasure measure_primal;
    BoundaryMeasure measure_dual;
};

inline DualPair make_dual_pair(const DomainModel& d, const BoundaryMeasure& mu) {
    DomainModel pd = polar(d);
    BoundaryMeasure md = dual_measure(mu, pd);
    return {d, pd, mu, md};
}

struct DualityReport {
    double max_discrepancy = 0.0;
    int arg_n = 0;
    int arg_m = 0;
    std::size_t count = 0;
    bool passed = false;
    double threshold = 1e-6;
};

/// Compares piece norms of (primal, mu) and (polar, dual mu) on the grid.
inline DualityReport verify_duality(const DualPair& pair, const std::vector<std::pair<int, int>>& grid,
                                    double tol = 1e-10, double threshold = 1e-6) {
    DualityReport rep;
    rep.threshold = threshold;
    const auto a = piece_norms(pair.primal, pair.measure_primal, grid, tol);
    const auto b = piece_norms(pair.polar, pair.measure_dual, grid, tol);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double diff = std::abs(a[i].norm_sq - b[i].norm_sq);
        if (i == 0 || diff > rep.max_discrepancy) {
            rep.max_discrepancy = diff;
            rep.arg_n = grid[i].first;
            rep.arg_m = grid[i].second;
        }
    }
    rep.count = grid.size();
    rep.passed = rep.max_discrepancy < threshold;
    return rep;
}

}  // namespace leray
