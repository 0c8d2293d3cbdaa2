#pragma once

// Leray kernel in (s, theta1, theta2) coordinates and its action on monomials.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <tuple>

#include "leray/domain.hpp"
#include "leray/error.hpp"
#include "leray/numerics.hpp"

namespace leray {

using cplx = std::complex<double>;

/// f(zeta) = g(s) e^{i(n theta1 + m theta2)}.
struct MonomialFunction {
    int n = 0;
    int m = 0;
    std::function<cplx(double)> g;
    /// Endpoint exponents of g(s) (s/r1)^n ((1-s)/r2)^m, when known.
    EndpointExponents exps{};
};

struct InteriorPoint {
    cplx w1{0.0, 0.0};
    cplx w2{0.0, 0.0};
};

/// max over s of |w1| s/r1 + |w2| (1-s)/r2; the point is interior iff this is < 1.
inline double interior_functional(const DomainModel& d, const InteriorPoint& w, int grid = 1000) {
    double worst = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double s = static_cast<double>(i) / grid;
        double u = 0.0, v = 0.0;
        if (s == 0.0) {
            v = 1.0 / d.b2();
            const EndpointBehavior e = d.profile().endpoint(0);
            u = e.inv_p < 1.0 ? 0.0 : detail::normal_coefficients(d, 1e-300, 1.0).first;
        } else if (s == 1.0) {
            u = 1.0 / d.b1();
            const EndpointBehavior e = d.profile().endpoint(1);
            v = e.inv_p < 1.0 ? 0.0 : detail::normal_coefficients(d, 1.0, 1e-300).second;
        } else {
            std::tie(u, v) = detail::normal_coefficients(d, s, 1.0 - s);
        }
        worst = std::max(worst, std::abs(w.w1) * u + std::abs(w.w2) * v);
    }
    return worst;
}

/// Interior point, checked against the support functional with the given margin.
inline InteriorPoint make_interior_point(const DomainModel& d, cplx w1, cplx w2, double margin = 1e-6) {
    InteriorPoint w{w1, w2};
    const double f = interior_functional(d, w);
    if (!(f < 1.0 - margin))
        throw DomainError("point is not strictly interior (support functional " + std::to_string(f) + ")");
    return w;
}

/// Density of the Leray kernel against ds dtheta1 dtheta2.
inline cplx leray_kernel_density(const DomainModel& d, double s, double theta1, double theta2,
                                 const InteriorPoint& w) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("leray_kernel_density: s must lie in (0,1)");
    const auto [u, v] = detail::normal_coefficients(d, s, 1.0 - s);
    const cplx den = 1.0 - std::polar(u, -theta1) * w.w1 - std::polar(v, -theta2) * w.w2;
    if (std::abs(den) < 1e-12) throw NearSingularity("leray_kernel_density: denominator vanishes (w near boundary)");
    return 1.0 / (4.0 * kPi * kPi * den * den);
}

/// ((n+m+1)!/(n! m!)) as a log.
inline double log_monomial_factor(int n, int m) {
    return log_gamma(n + m + 2.0) - log_gamma(n + 1.0) - log_gamma(m + 1.0);
}

/// L f(w) for an (n,m)-monomial f.
inline cplx apply_to_monomial(const DomainModel& d, const MonomialFunction& f, const InteriorPoint& w,
                              double tol = 1e-10) {
    if (f.n < 0 || f.m < 0) return {0.0, 0.0};
    const int n = f.n, m = f.m;
    auto weight = [&](double s, double sc) {
        const auto [l1, l2] = d.log_radii(s, sc);
        double lw = 0.0;
        if (n) lw += n * (std::log(s) - l1);
        if (m) lw += m * (std::log(sc) - l2);
        return std::exp(lw);
    };
    double re = 0.0, im = 0.0;
    try {
        re = integrate_singular([&](double s, double sc) { return f.g(s).real() * weight(s, sc); }, f.exps, tol);
        im = integrate_singular([&](double s, double sc) { return f.g(s).imag() * weight(s, sc); }, f.exps, tol);
    } catch (const DivergentIntegral& e) {
        throw DivergentIntegral(std::string("apply_to_monomial: radial integral diverges: ") + e.what());
    }
    const double fac = std::exp(log_monomial_factor(n, m));
    return fac * cplx(re, im) * std::pow(w.w1, n) * std::pow(w.w2, m);
}

/// ((n+m+1)!/(n! m!)) * integral of s^n (1-s)^m; equals 1.
inline double reproduction_coefficient(const DomainModel& /*d*/, int n, int m, double tol = 1e-12) {
    if (n < 0 || m < 0) throw DomainError("reproduction_coefficient: n, m must be non-negative");
    auto lf = [n, m](double s, double sc) {
        double v = 0.0;
        if (n) v += n * std::log(s);
        if (m) v += m * std::log(sc);
        return v;
    };
    const double N = n + m;
    const double peak = N > 0 ? n / N : 0.5;
    const double width = (n > 0 && m > 0) ? std::sqrt(2.0 * n * m / (N * N * N)) : 1.0 / (N + 1.0);
    const LogValue I = integrate_peaked_log(lf, peak, width, {double(n), double(m)}, tol);
    return std::exp(log_monomial_factor(n, m) + I.log());
}

}  // namespace leray
