#pragma once

// Fourier-piece norms of the Leray transform and the assembled essential spectra.

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "leray/domain.hpp"
#include "leray/error.hpp"
#include "leray/measure.hpp"
#include "leray/numerics.hpp"

namespace leray {

struct PieceNorm {
    int n = 0;
    int m = 0;
    LogValue logI_minus1;
    LogValue logI_0;
    LogValue logI_plus1;
    double norm_sq = 1.0;

    /// theta with sec(theta) = ||L_{n,m}||.
    double angle() const { return std::acos(std::min(1.0, 1.0 / std::sqrt(norm_sq))); }
};

/// Kerzman-Stein piece norm sqrt(||L_{n,m}||^2 - 1).
inline double ks_piece_norm(const PieceNorm& pn) { return std::sqrt(std::max(pn.norm_sq - 1.0, 0.0)); }

namespace detail {

// Lower clamp on the curvature constant of the localisation width.
inline constexpr double kMinCurvature = 1e-2;

inline double localisation_width(const DomainModel& d, int n, int m, int k) {
    if (n == 0 || m == 0) return 1.0 / (n + m + 1.0);
    const double N = n + m;
    const double s = n / N;
    const double ip = d.inv_p(s, m / N);
    const double c = std::max(2.0 * k * ip + 1.0 - k, kMinCurvature);
    return std::sqrt(2.0 * n * m / (c * N * N * N));
}

}  // namespace detail

/// ||L_{n,m}||^2 = I_{-1} I_{1} / I_0^2 with I_k the integral of
/// (r1^{2k} s^{1-k})^n (r2^{2k} (1-s)^{1-k})^m omega^k.
inline PieceNorm piece_norm(const DomainModel& d, const BoundaryMeasure& mu, int n, int m, double tol = 1e-9) {
    if (n < 0 || m < 0) throw DomainError("piece_norm: n, m must be non-negative");
    PieceNorm out;
    out.n = n;
    out.m = m;

    std::array<EndpointExponents, 3> exps{};
    const bool known = mu.has_exponents();
    for (int k = -1; k <= 1; ++k) {
        double e[2];
        for (int j = 0; j < 2; ++j) {
            const EndpointBehavior pe = d.profile().endpoint(j);
            const MeasureAsymptotics ma = known ? mu.endpoint(j) : MeasureAsymptotics{};
            const double cnt = j == 0 ? n : m;
            const double expo = cnt * (2.0 * k * pe.inv_p + 1.0 - k) + k * ma.B;
            const double logpow = 2.0 * cnt * k * pe.r_log_power + k * ma.log_power;
            if (!detail::power_log_integrable(expo, logpow))
                throw NonAdmissibleMeasure("integral I_{" + std::to_string(n) + "," + std::to_string(m) + ","
                                               + std::to_string(k) + "} diverges at s=" + (j == 0 ? "0" : "1")
                                               + " (measure " + mu.label() + " is not admissible)",
                                           k, j);
            e[j] = std::max(expo, -1.0 + 1e-9);
        }
        exps[k + 1] = {e[0], e[1]};
    }

    if (n == 0 && m == 0) {
        const double ip = integrate_singular([&](double s, double sc) { return std::exp(mu.log_omega(s, sc)); },
                                             exps[2], tol);
        const double im = integrate_singular([&](double s, double sc) { return std::exp(-mu.log_omega(s, sc)); },
                                             exps[0], tol);
        out.logI_plus1 = LogValue::from_value(ip);
        out.logI_minus1 = LogValue::from_value(im);
        out.logI_0 = LogValue::from_log(0.0);
    } else {
        const double N = n + m;
        const double peak = n / N;
        auto integrand = [&](int k) {
            return [&, k](double s, double sc) {
                const double ls = std::log(s), lsc = std::log(sc);
                double v = 0.0;
                if (k == 0) {
                    if (n) v += n * ls;
                    if (m) v += m * lsc;
                    return v;
                }
                const auto [l1, l2] = d.log_radii(s, sc);
                const double lw = mu.log_omega(s, sc);
                if (k == 1) {
                    if (n) v += 2.0 * n * l1;
                    if (m) v += 2.0 * m * l2;
                    return v + lw;
                }
                if (n) v += 2.0 * n * (ls - l1);
                if (m) v += 2.0 * m * (lsc - l2);
                return v - lw;
            };
        };
        out.logI_minus1 = integrate_peaked_log(integrand(-1), peak, detail::localisation_width(d, n, m, -1),
                                               exps[0], tol);
        out.logI_0 = integrate_peaked_log(integrand(0), peak, detail::localisation_width(d, n, m, 0), exps[1], tol);
        out.logI_plus1 = integrate_peaked_log(integrand(1), peak, detail::localisation_width(d, n, m, 1),
                                              exps[2], tol);
    }
    out.norm_sq = std::exp(out.logI_minus1.log() + out.logI_plus1.log() - 2.0 * out.logI_0.log());
    return out;
}

inline PieceNorm piece_norm(const BoundaryMeasure& mu, int n, int m, double tol = 1e-9) {
    return piece_norm(mu.domain(), mu, n, m, tol);
}

/// Piece norms for a list of indices, optionally in parallel; output order follows input order.
inline std::vector<PieceNorm> piece_norms(const DomainModel& d, const BoundaryMeasure& mu,
                                          const std::vector<std::pair<int, int>>& idx, double tol = 1e-9,
                                          unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<PieceNorm> out(idx.size());
    if (threads == 1 || idx.size() < 8) {
        for (std::size_t i = 0; i < idx.size(); ++i) out[i] = piece_norm(d, mu, idx[i].first, idx[i].second, tol);
        return out;
    }
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t) {
        jobs.push_back(std::async(std::launch::async, [&, t] {
            for (std::size_t i = t; i < idx.size(); i += threads)
                out[i] = piece_norm(d, mu, idx[i].first, idx[i].second, tol);
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

/// Square grid [0, n_max]^2 sorted by (n, m).
inline std::vector<std::pair<int, int>> square_grid(int n_max) {
    std::vector<std::pair<int, int>> g;
    for (int n = 0; n <= n_max; ++n)
        for (int m = 0; m <= n_max; ++m) g.emplace_back(n, m);
    return g;
}

/// Diagonal (n, n) for n = 0, 1, 2, 4, ... below n_max, then n_max.
inline std::vector<std::pair<int, int>> diagonal_grid(int n_max) {
    std::vector<std::pair<int, int>> g{{0, 0}};
    for (int n = 1; n < n_max; n *= 2) g.emplace_back(n, n);
    if (n_max > 0) g.emplace_back(n_max, n_max);
    return g;
}

/// Eigenvalue lambda_{p,q,n} of the limiting one-dimensional problem.
inline double lambda_pqn(double p, double q, int n) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("lambda_pqn: p must satisfy 1 < p < inf");
    if (n < 0) throw DomainError("lambda_pqn: n must be non-negative");
    const double ps = p / (p - 1.0);
    const double d = 1.0 / p - 1.0 / ps;
    const double a = 2.0 * n / p + 1.0 + q * d;
    const double b = 2.0 * n / ps + 1.0 - q * d;
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("lambda_pqn: Gamma argument not positive; q lies outside |q| < p/|p-2|");
    const double lg = log_gamma(a) + log_gamma(b) - 2.0 * log_gamma(n + 1.0) - a * std::log(2.0 / p)
                      - b * std::log(2.0 / ps);
    return std::exp(lg);
}

/// sqrt(p p*)/2 at the given exponent; infinite for p = 1 or p = inf.
inline double branch_value(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) return kInf;
    return p / (2.0 * std::sqrt(p - 1.0));
}

/// Limit of ||L_{n,m}||^2 along n/m -> u.
inline double asymptotic_diagonal_limit(const DomainModel& d, double u) {
    if (!(u >= 0.0)) throw DomainError("asymptotic_diagonal_limit: u must lie in [0, inf]");
    const double s = u == kInf ? 1.0 : u / (1.0 + u);
    const double sc = u == kInf ? 0.0 : 1.0 / (1.0 + u);
    if (s == 0.0 || sc == 0.0) return branch_value(d.profile().endpoint(s == 0.0 ? 0 : 1).p_limit);
    return branch_value(d.profile().p(s, sc));
}

enum class OperatorKind { LstarL, KerzmanStein };

inline std::string to_string(OperatorKind k) { return k == OperatorKind::LstarL ? "LstarL" : "KerzmanStein"; }

struct BranchInterval {
    double lower = 1.0;
    double upper = 1.0;
    double s_lower = 0.0;
    double s_upper = 0.0;
};

struct SpectrumReport {
    OperatorKind kind = OperatorKind::LstarL;
    BranchInterval continuous_branch;
    double p1 = 2.0;
    double p2 = 2.0;
    double q = 0.0;
    std::vector<double> discrete_family_1;
    std::vector<double> discrete_family_2;
    bool includes_zero = true;
    double essential_norm = 1.0;
    std::string note;
};

/// Range of sqrt(p p*)/2 over [0,1]: dense sampling, endpoint limits and local refinement.
inline BranchInterval continuous_branch(const DomainModel& d, int grid = 2048) {
    std::vector<double> s(grid + 1), v(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        s[i] = static_cast<double>(i) / grid;
        if (i == 0 || i == grid)
            v[i] = branch_value(d.profile().endpoint(i == 0 ? 0 : 1).p_limit);
        else
            v[i] = branch_value(d.profile().p(s[i], 1.0 - s[i]));
    }
    const auto lo = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
    const auto hi = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    BranchInterval b{v[lo], v[hi], s[lo], s[hi]};
    auto f = [&](double x) { return branch_value(d.profile().p(x, 1.0 - x)); };
    auto refine = [&](int i, double sign, double& val, double& arg) {
        if (i == 0 || i == grid) return;
        const auto r = boost::math::tools::brent_find_minima([&](double x) { return sign * f(x); }, s[i - 1],
                                                             s[i + 1], 52);
        if (sign * r.second < sign * val) {
            val = sign * r.second;
            arg = r.first;
        }
    };
    refine(lo, 1.0, b.lower, b.s_lower);
    refine(hi, -1.0, b.upper, b.s_upper);
    return b;
}

/// Essential spectrum of L*L (or magnitudes for the Kerzman-Stein operator).
inline SpectrumReport essential_spectrum(const DomainModel& d, const BoundaryMeasure& mu, OperatorKind kind,
                                         int n_report = 32) {
    if (d.class_tag() != DomainClass::P && d.class_tag() != DomainClass::R)
        throw UnsupportedClass("essential spectrum requires class P or R (domain is " + to_string(d.class_tag())
                               + "); use piece-norm sweeps instead");
    if (!mu.order_q()) throw UnsupportedClass("essential spectrum requires a measure of order q");
    if (n_report < 0) throw DomainError("essential_spectrum: N_report must be non-negative");
    const double q = *mu.order_q();
    const double thr = order_q_threshold(d);
    if (!(std::abs(q) < thr))
        throw NonAdmissibleMeasure("order q = " + std::to_string(q) + " violates |q| < " + std::to_string(thr));

    SpectrumReport rep;
    rep.kind = kind;
    rep.q = q;
    rep.p1 = d.profile().endpoint(0).p_limit;
    rep.p2 = d.profile().endpoint(1).p_limit;
    rep.continuous_branch = continuous_branch(d);
    for (int n = 0; n <= n_report; ++n) {
        rep.discrete_family_1.push_back(lambda_pqn(rep.p1, q, n));
        rep.discrete_family_2.push_back(lambda_pqn(rep.p2, q, n));
    }
    double top = rep.continuous_branch.upper;
    for (double x : rep.discrete_family_1) top = std::max(top, x);
    for (double x : rep.discrete_family_2) top = std::max(top, x);
    rep.note = "family j converges to sqrt(p_j p_j*)/2 as n grows";
    if (kind == OperatorKind::LstarL) {
        rep.essential_norm = std::sqrt(top);
        return rep;
    }
    auto ks = [](double x) { return std::sqrt(std::max(x - 1.0, 0.0)); };
    rep.continuous_branch.lower = ks(rep.continuous_branch.lower);
    rep.continuous_branch.upper = ks(rep.continuous_branch.upper);
    for (double& x : rep.discrete_family_1) x = ks(x);
    for (double& x : rep.discrete_family_2) x = ks(x);
    rep.essential_norm = ks(top);
    rep.note = "magnitudes sqrt(lambda - 1); each nonzero magnitude occurs as a pair +-i*magnitude";
    return rep;
}

struct NormEstimate {
    double sup_observed = 0.0;
    int arg_n = 0;
    int arg_m = 0;
    bool saturated = false;
    std::optional<double> ceiling;
    /// sqrt(norm_sq) strictly increasing along the sampled diagonal with the maximum at its end.
    bool unbounded_trend = false;
    std::vector<PieceNorm> pieces;
};

/// sup of ||L_{n,m}|| over the given indices, compared with the essential norm when available.
inline NormEstimate operator_norm_estimate(const DomainModel& d, const BoundaryMeasure& mu,
                                           const std::vector<std::pair<int, int>>& idx, double tol = 1e-9,
                                           unsigned threads = 0) {
    NormEstimate est;
    est.pieces = piece_norms(d, mu, idx, tol, threads);
    int n_max = 0;
    for (const auto& pn : est.pieces) {
        n_max = std::max({n_max, pn.n, pn.m});
        const double v = std::sqrt(pn.norm_sq);
        if (v > est.sup_observed) {
            est.sup_observed = v;
            est.arg_n = pn.n;
            est.arg_m = pn.m;
        }
    }
    try {
        est.ceiling = essential_spectrum(d, mu, OperatorKind::LstarL, 32).essential_norm;
    } catch (const Error&) {
        est.ceiling.reset();
    }
    const bool interior_max = std::max(est.arg_n, est.arg_m) <= n_max / 2;
    est.saturated = (est.ceiling && std::abs(est.sup_observed - *est.ceiling) < 1e-4) || interior_max;

    std::vector<double> diag;
    for (const auto& pn : est.pieces)
        if (pn.n == pn.m && pn.n > 0) diag.push_back(std::sqrt(pn.norm_sq));
    if (diag.size() >= 3) {
        bool inc = true;
        for (std::size_t i = 1; i < diag.size(); ++i) inc = inc && diag[i] > diag[i - 1];
        est.unbounded_trend = inc && diag.back() >= est.sup_observed && !est.saturated;
    }
    return est;
}

inline NormEstimate operator_norm_estimate(const DomainModel& d, const BoundaryMeasure& mu, int n_max,
                                           double tol = 1e-9) {
    return operator_norm_estimate(d, mu, square_grid(n_max), tol);
}

}  // namespace leray
