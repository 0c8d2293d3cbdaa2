#pragma once

// Quadrature and special-function backbone.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "leray/error.hpp"

namespace leray {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Positive quantity stored by its natural logarithm.
struct LogValue {
    double log_magnitude = -kInf;
    bool is_zero = true;

    static LogValue zero() { return {}; }
    static LogValue from_log(double l) {
        if (l == -kInf) return zero();
        if (!std::isfinite(l)) throw EvaluationError("LogValue: non-finite log magnitude");
        return {l, false};
    }
    static LogValue from_value(double v) {
        if (v == 0.0) return zero();
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("LogValue: value must be positive and finite");
        return {std::log(v), false};
    }

    double log() const { return is_zero ? -kInf : log_magnitude; }
    double value() const { return is_zero ? 0.0 : std::exp(log_magnitude); }
};

inline LogValue operator*(LogValue a, LogValue b) {
    if (a.is_zero || b.is_zero) return LogValue::zero();
    return {a.log_magnitude + b.log_magnitude, false};
}

inline LogValue operator/(LogValue a, LogValue b) {
    if (b.is_zero) throw DomainError("LogValue: division by zero");
    if (a.is_zero) return LogValue::zero();
    return {a.log_magnitude - b.log_magnitude, false};
}

/// log(e^a + e^b) without overflow.
inline double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

inline LogValue operator+(LogValue a, LogValue b) {
    return LogValue::from_log(log_add(a.log(), b.log()));
}

template <class It>
double log_sum_exp(It first, It last) {
    double m = -kInf;
    for (It it = first; it != last; ++it) m = std::max(m, static_cast<double>(*it));
    if (m == -kInf) return -kInf;
    if (m == kInf) return kInf;
    double acc = 0.0;
    for (It it = first; it != last; ++it) acc += std::exp(*it - m);
    return m + std::log(acc);
}

/// Integrand behaves like s^B1 near 0 and (1-s)^B2 near 1.
struct EndpointExponents {
    double B1 = 0.0;
    double B2 = 0.0;
};

namespace detail {

inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;
inline constexpr int kZetaMax = 40;

// zeta(k), k = 2..kZetaMax: partial sum plus Euler-Maclaurin tail.
inline const std::array<double, kZetaMax + 1>& zeta_table() {
    static const std::array<double, kZetaMax + 1> table = [] {
        std::array<double, kZetaMax + 1> z{};
        constexpr int N = 50;
        for (int k = 2; k <= kZetaMax; ++k) {
            double sum = 0.0;
            for (int j = N - 1; j >= 1; --j) sum += std::pow(static_cast<double>(j), -k);
            const double n = N;
            const double kk = k;
            double tail = std::pow(n, 1.0 - kk) / (kk - 1.0) + 0.5 * std::pow(n, -kk)
                          + kk * std::pow(n, -kk - 1.0) / 12.0
                          - kk * (kk + 1) * (kk + 2) * std::pow(n, -kk - 3.0) / 720.0
                          + kk * (kk + 1) * (kk + 2) * (kk + 3) * (kk + 4) * std::pow(n, -kk - 5.0) / 30240.0;
            z[k] = sum + tail;
        }
        return z;
    }();
    return table;
}

// ln Gamma(1+z) for |z| <= 1/4 by its Taylor series about 1.
inline double log_gamma_1p(double z) {
    const auto& zeta = zeta_table();
    double acc = 0.0;
    for (int k = kZetaMax; k >= 2; --k) {
        const double term = zeta[k] * std::pow(z, k) / k;
        acc += (k % 2 == 0) ? term : -term;
    }
    return acc - kEulerGamma * z;
}

inline double log_gamma_stirling(double x) {
    const double r = 1.0 / x;
    const double r2 = r * r;
    // Bernoulli terms B_{2k} / (2k(2k-1) x^{2k-1}), k = 1..8
    double series = -3617.0 / 122400.0;
    series = series * r2 + 1.0 / 156.0;
    series = series * r2 - 691.0 / 360360.0;
    series = series * r2 + 1.0 / 1188.0;
    series = series * r2 - 1.0 / 1680.0;
    series = series * r2 + 1.0 / 1260.0;
    series = series * r2 - 1.0 / 360.0;
    series = series * r2 + 1.0 / 12.0;
    return (x - 0.5) * std::log(x) - x + 0.91893853320467274178032973640561764 + series * r;
}

}  // namespace detail

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: argument must be positive and finite");
    if (x < 0.25) return detail::log_gamma_1p(x) - std::log(x);
    if (x < 0.75) return log_gamma(x + 1.0) - std::log(x);
    if (std::abs(x - 1.0) <= 0.25) return detail::log_gamma_1p(x - 1.0);
    if (std::abs(x - 2.0) <= 0.25) return detail::log_gamma_1p(x - 2.0) + std::log1p(x - 2.0);
    double prod = 1.0;
    while (x < 15.0) {
        prod *= x;
        x += 1.0;
    }
    return detail::log_gamma_stirling(x) - std::log(prod);
}

inline double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

/// ln(n! m! / (n+m+1)!)
inline double log_beta_nm(double n, double m) { return log_beta(n + 1.0, m + 1.0); }

namespace detail {

// Uniform call: f(s, 1-s) or f(s).
template <class F>
double call_sc(F& f, double s, double sc) {
    if constexpr (std::is_invocable_v<F&, double, double>) {
        return static_cast<double>(f(s, sc));
    } else {
        return static_cast<double>(f(s));
    }
}

template <class F>
double call_log(F& f, double s, double sc) {
    if constexpr (std::is_invocable_r_v<LogValue, F&, double, double>
                  && !std::is_invocable_r_v<double, F&, double, double>) {
        return f(s, sc).log();
    } else if constexpr (std::is_invocable_v<F&, double, double>) {
        return static_cast<double>(f(s, sc));
    } else if constexpr (std::is_invocable_r_v<LogValue, F&, double>
                         && !std::is_invocable_r_v<double, F&, double>) {
        return f(s).log();
    } else {
        return static_cast<double>(f(s));
    }
}

// Adaptive GK21 over [a, b], evaluated on the unit interval.
template <class F>
double gk21_unit(F&& f, double a, double b, unsigned depth, double tol) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    const double len = b - a;
    return len * GK::integrate([&](double t) { return static_cast<double>(f(a + len * t)); }, 0.0, 1.0, depth, tol);
}

inline double endpoint_power(double B) { return B < 1.0 ? 2.0 / (B + 1.0) : 1.0; }

// Below this distance from an endpoint the integrand is replaced by its
// power-law tail C x^B, integrated exactly.
inline constexpr double kTailCut = 1e-250;

// Integral over x in [0, 1/2] of h(x, 1-x), h ~ x^B at 0.
template <class H>
double integrate_half(H& h, double B, double tol) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double kappa = endpoint_power(B);
    const double u_min = std::pow(2.0 * kTailCut, 1.0 / kappa);
    auto g = [&](double u) {
        const double x = 0.5 * std::pow(u, kappa);
        const double jac = 0.5 * kappa * std::pow(u, kappa - 1.0);
        return h(x, 1.0 - x) * jac;
    };
    double err = 0.0;
    double body = GK::integrate(g, u_min, 1.0, 15, std::max(tol, 1e-13), &err);
    const double xc = 0.5 * std::pow(u_min, kappa);
    const double tail = h(xc, 1.0 - xc) * xc / (B + 1.0);
    double total = body + (std::isfinite(tail) ? tail : 0.0);
    if (!std::isfinite(total)) throw EvaluationError("integrate_singular: non-finite result");
    return total;
}

}  // namespace detail

/// Integral of f over (0,1); f(s) ~ s^B1 at 0 and (1-s)^B2 at 1.
/// f may take (s) or (s, 1-s); the second form receives 1-s without cancellation.
template <class F>
double integrate_singular(F&& f, EndpointExponents exps = {}, double tol = 1e-9) {
    if (exps.B1 <= -1.0) throw DivergentIntegral("integrate_singular: divergent at s=0 (B1 <= -1)");
    if (exps.B2 <= -1.0) throw DivergentIntegral("integrate_singular: divergent at s=1 (B2 <= -1)");
    auto lower = [&](double x, double xc) { return detail::call_sc(f, x, xc); };
    auto upper = [&](double x, double xc) { return detail::call_sc(f, xc, x); };
    return detail::integrate_half(lower, exps.B1, tol) + detail::integrate_half(upper, exps.B2, tol);
}

namespace detail {

// 15-point Gauss-Kronrod abscissae/weights on [-1,1]; index 7 is the centre.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kXgk[1], kXgk[3], kXgk[5], kXgk[7].
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct LogPanel {
    bool power = false;  // x = x1 * u^kappa over u in [lo, hi]; otherwise x in [lo, hi]
    double lo = 0.0;
    double hi = 0.0;
    double k = -kInf;    // log Kronrod estimate
    double err = -kInf;  // log |Kronrod - Gauss|
};

struct HalfLogResult {
    double log_total = -kInf;
    double log_max_node = -kInf;
};

template <class G>
class HalfLogIntegrator {
public:
    HalfLogIntegrator(G& g, double B, double tol) : g_(g), B_(B), tol_(tol) {}

    double eval(double x) const {
        const double v = g_(x, 1.0 - x);
        if (std::isnan(v) || v == kInf)
            throw EvaluationError("integrate_peaked_log: non-finite log-integrand at s=" + std::to_string(x));
        return v;
    }

    // Integral over [a, b] within [0, 1/2], interior breakpoints given.
    HalfLogResult run(double a, std::vector<double> breaks, double b) {
        std::vector<LogPanel> panels;
        double log_tail = -kInf;
        std::sort(breaks.begin(), breaks.end());
        std::vector<double> pts{a};
        for (double x : breaks)
            if (x > pts.back() && x < b) pts.push_back(x);
        pts.push_back(b);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            LogPanel p;
            if (i == 0 && a == 0.0) {
                x1_ = pts[1];
                kappa_ = endpoint_power(B_);
                p.power = true;
                p.hi = 1.0;
                p.lo = 0.0;
                if (x1_ > kTailCut) {
                    p.lo = std::pow(kTailCut / x1_, 1.0 / kappa_);
                    const double xt = x1_ * std::pow(p.lo, kappa_);
                    const double v = eval(xt);
                    log_tail = v + std::log(xt) - std::log(B_ + 1.0);
                }
            } else {
                p.lo = pts[i];
                p.hi = pts[i + 1];
            }
            evaluate(p);
            panels.push_back(p);
        }

        constexpr std::size_t kMaxPanels = 5000;
        const double log_tol = std::log(tol_);
        while (true) {
            std::vector<double> ks, errs;
            ks.reserve(panels.size() + 1);
            errs.reserve(panels.size());
            for (const auto& p : panels) {
                ks.push_back(p.k);
                errs.push_back(p.err);
            }
            ks.push_back(log_tail);
            const double total = log_sum_exp(ks.begin(), ks.end());
            const double err = log_sum_exp(errs.begin(), errs.end());
            if (total == -kInf || err <= total + log_tol) return {total, max_node_};
            if (panels.size() >= kMaxPanels)
                throw EvaluationError("integrate_peaked_log: panel budget exhausted before reaching tolerance");
            auto worst = std::max_element(panels.begin(), panels.end(),
                                          [](const LogPanel& l, const LogPanel& r) { return l.err < r.err; });
            LogPanel left = *worst, right = *worst;
            const double mid = 0.5 * (worst->lo + worst->hi);
            if (!(mid > worst->lo && mid < worst->hi)) return {total, max_node_};
            left.hi = mid;
            right.lo = mid;
            evaluate(left);
            evaluate(right);
            *worst = left;
            panels.push_back(right);
        }
    }

private:
    void evaluate(LogPanel& p) {
        const double half = 0.5 * (p.hi - p.lo);
        const double mid = 0.5 * (p.hi + p.lo);
        std::array<double, 15> v{};
        for (int i = 0; i < 15; ++i) {
            const double t = i < 7 ? mid - half * kXgk[i] : (i == 7 ? mid : mid + half * kXgk[14 - i]);
            v[i] = node(p, t, half);
        }
        std::array<double, 15> kterms{};
        std::array<double, 7> gterms{};
        for (int i = 0; i < 15; ++i) {
            const int j = i < 8 ? i : 14 - i;
            kterms[i] = v[i] + std::log(kWgk[j]);
        }
        int g = 0;
        for (int i = 0; i < 15; ++i) {
            const int j = i < 8 ? i : 14 - i;
            if (j % 2 == 1) gterms[g++] = v[i] + std::log(kWg[j / 2]);
        }
        p.k = log_sum_exp(kterms.begin(), kterms.end());
        const double gs = log_sum_exp(gterms.begin(), gterms.end());
        if (p.k == -kInf && gs == -kInf) {
            p.err = -kInf;
        } else {
            const double hi = std::max(p.k, gs);
            const double d = std::abs(p.k - gs);
            p.err = d == 0.0 ? -kInf : hi + std::log(-std::expm1(-d));
        }
    }

    double node(const LogPanel& p, double t, double half) {
        double x, logjac;
        if (p.power) {
            x = x1_ * std::pow(t, kappa_);
            logjac = std::log(half) + std::log(kappa_ * x1_) + (kappa_ - 1.0) * std::log(t);
        } else {
            x = t;
            logjac = std::log(half);
        }
        if (x <= 0.0) return -kInf;
        const double v = eval(x);
        max_node_ = std::max(max_node_, v);
        return v + logjac;
    }

    G& g_;
    double B_;
    double tol_;
    double x1_ = 0.0;
    double kappa_ = 1.0;
    double max_node_ = -kInf;
};

// Peak-localized integral over x in [0, 1/2] of exp(g(x, 1-x)).
template <class G>
double integrate_half_log(G& g, double peak, double width, double B, double tol) {
    if (B <= -1.0) throw DivergentIntegral("integrate_peaked_log: endpoint exponent <= -1");
    constexpr double kDrop = 40.0;
    const double pc = std::clamp(peak, 0.0, 0.5);
    HalfLogIntegrator<G> probe(g, B, tol);

    double lmax = -kInf;
    if (pc > 0.0) lmax = probe.eval(pc);
    std::vector<double> breaks;
    if (pc > 0.0 && pc < 0.5) breaks.push_back(pc);

    double a = 0.0;
    if (pc > 0.0) {
        for (int j = 0;; ++j) {
            const double x = pc - width * std::ldexp(1.0, j);
            if (x <= 0.0 || j > 60) break;
            breaks.push_back(x);
            const double v = probe.eval(x);
            lmax = std::max(lmax, v);
            if (B >= 0.0 && v < lmax - kDrop) {
                a = x;
                break;
            }
        }
    }
    double b = 0.5;
    for (int j = 0;; ++j) {
        const double x = pc + width * std::ldexp(1.0, j);
        if (x >= 0.5 || j > 60) break;
        breaks.push_back(x);
        const double v = probe.eval(x);
        lmax = std::max(lmax, v);
        if (v < lmax - kDrop) {
            b = x;
            break;
        }
    }

    for (int attempt = 0; attempt < 30; ++attempt) {
        HalfLogIntegrator<G> integ(g, B, tol);
        std::vector<double> inner;
        for (double x : breaks)
            if (x > a && x < b) inner.push_back(x);
        const HalfLogResult r = integ.run(a, inner, b);
        if (r.log_total == -kInf) return -kInf;
        const double cut = r.log_total - kDrop + 2.0;
        bool extend = false;
        if (a > 0.0 && integ.eval(a) + std::log(a) > cut) {
            const double na = pc - 4.0 * (pc - a);
            a = na > 0.0 ? na : 0.0;
            breaks.push_back(a);
            extend = true;
        }
        if (b < 0.5 && integ.eval(b) + std::log(0.5 - b) > cut) {
            const double nb = pc + 4.0 * (b - pc);
            b = nb < 0.5 ? nb : 0.5;
            breaks.push_back(b);
            extend = true;
        }
        if (!extend) return r.log_total;
    }
    throw EvaluationError("integrate_peaked_log: truncation window failed to stabilise");
}

}  // namespace detail

/// Integral over (0,1) of exp(log_f(s)) computed in log space.
/// log_f may take (s) or (s, 1-s) and return a log value (double, -inf for zero) or a LogValue.
/// peak/width locate the bulk of the mass; exps give the integrand's endpoint exponents.
template <class LF>
LogValue integrate_peaked_log(LF&& log_f, double peak, double width, EndpointExponents exps = {},
                              double tol = 1e-9) {
    if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("integrate_peaked_log: width must be positive");
    if (!(peak >= 0.0 && peak <= 1.0)) throw DomainError("integrate_peaked_log: peak must lie in [0,1]");
    auto lower = [&](double x, double xc) { return detail::call_log(log_f, x, xc); };
    auto upper = [&](double x, double xc) { return detail::call_log(log_f, xc, x); };
    const double lo = detail::integrate_half_log(lower, peak, width, exps.B1, tol);
    const double hi = detail::integrate_half_log(upper, 1.0 - peak, width, exps.B2, tol);
    return LogValue::from_log(log_add(lo, hi));
}

}  // namespace leray
