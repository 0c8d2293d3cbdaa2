#pragma once

// Generator profiles: the osculating exponent as a function of s in [0,1].

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "leray/error.hpp"
#include "leray/numerics.hpp"

namespace leray {

enum class ProfileKind { Constant, TabulatedSmooth, ClosedForm };
enum class DiniRegularity { DiniConvergent, DiniDivergent, Unknown };

inline std::string to_string(DiniRegularity r) {
    switch (r) {
        case DiniRegularity::DiniConvergent: return "dini_convergent";
        case DiniRegularity::DiniDivergent: return "dini_divergent";
        default: return "unknown";
    }
}

inline DiniRegularity dini_from_string(const std::string& s) {
    if (s == "dini_convergent") return DiniRegularity::DiniConvergent;
    if (s == "dini_divergent") return DiniRegularity::DiniDivergent;
    if (s == "unknown") return DiniRegularity::Unknown;
    throw SpecError("unknown endpoint_regularity value '" + s + "'");
}

/// Declared behaviour of the profile at one end of [0,1].
///
/// With L = log(1/d), d the distance to the endpoint, the radius vanishing there
/// behaves like d^inv_p * L^r_log_power, the exponent like L^p_log_power and
/// p - 1 like L^pm1_log_power.  All log powers are zero for a finite limit in (1,inf).
struct EndpointBehavior {
    double p_limit = 2.0;
    DiniRegularity dini = DiniRegularity::Unknown;
    double inv_p = 0.5;
    double r_log_power = 0.0;
    double p_log_power = 0.0;
    double pm1_log_power = 0.0;
};

class GeneratorProfile {
public:
    virtual ~GeneratorProfile() = default;

    virtual ProfileKind kind() const = 0;
    virtual std::string name() const = 0;

    /// 1/p(s); zero where p is infinite.  sc = 1 - s supplied exactly.
    virtual double inv_p(double s, double sc) const = 0;

    /// j = 0 for s = 0, j = 1 for s = 1.
    virtual EndpointBehavior endpoint(int j) const = 0;

    /// The four divergence conditions characterising the generated domain as
    /// a member of the larger class hold (declared, not computed).
    virtual bool tilde_conditions() const { return false; }

    /// Interior points where p reaches 1 or infinity.
    virtual bool interior_degenerate() const {
        for (int i = 1; i < 4096; ++i) {
            const double s = i / 4096.0;
            const double ip = inv_p(s, 1.0 - s);
            if (ip <= 0.0 || ip >= 1.0) return true;
        }
        return false;
    }

    /// Points where the profile is not smooth (tabulation nodes, cusps).
    virtual std::vector<double> breakpoints() const { return {}; }
    /// Breakpoints near which inv_p is not even Lipschitz.
    virtual std::vector<double> singular_points() const { return {}; }

    /// Numerical Dini tail; only meaningful for tabulated data.
    virtual DiniRegularity numeric_dini(int /*j*/) const { return DiniRegularity::Unknown; }

    virtual nlohmann::json to_json() const = 0;

    double inv_p(double s) const { return inv_p(s, 1.0 - s); }
    double p(double s, double sc) const {
        const double ip = inv_p(s, sc);
        return ip == 0.0 ? kInf : 1.0 / ip;
    }
    double p(double s) const { return p(s, 1.0 - s); }
    double p_star(double s, double sc) const {
        const double ip = inv_p(s, sc);
        return ip >= 1.0 ? kInf : 1.0 / (1.0 - ip);
    }
    double p_star(double s) const { return p_star(s, 1.0 - s); }
};

using ProfilePtr = std::shared_ptr<const GeneratorProfile>;

inline double conjugate_exponent(double p) {
    if (p == kInf) return 1.0;
    if (p <= 1.0) return kInf;
    return p / (p - 1.0);
}

class ConstantProfile final : public GeneratorProfile {
public:
    explicit ConstantProfile(double p) : p_(p) {
        if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("constant profile requires 1 < p < inf");
    }
    ProfileKind kind() const override { return ProfileKind::Constant; }
    std::string name() const override { return "constant"; }
    double inv_p(double, double) const override { return 1.0 / p_; }
    EndpointBehavior endpoint(int) const override {
        return {p_, DiniRegularity::DiniConvergent, 1.0 / p_, 0.0, 0.0, 0.0};
    }
    bool interior_degenerate() const override { return false; }
    nlohmann::json to_json() const override { return {{"type", "constant"}, {"p", p_}}; }
    double value() const { return p_; }

private:
    double p_;
};

/// Samples of p on a uniform grid of [0,1], monotone piecewise-cubic in between.
class TabulatedProfile final : public GeneratorProfile {
public:
    explicit TabulatedProfile(std::vector<double> values,
                              std::array<DiniRegularity, 2> regularity = {DiniRegularity::Unknown,
                                                                          DiniRegularity::Unknown},
                              double dini_tol = 1e-2)
        : values_(std::move(values)), regularity_(regularity), dini_tol_(dini_tol) {
        if (values_.size() < 4) throw InvalidProfile("tabulated profile needs at least 4 samples");
        for (double v : values_)
            if (!(v >= 1.0) || !std::isfinite(v))
                throw InvalidProfile("tabulated profile values must be finite and >= 1");
        const std::size_t n = values_.size();
        std::vector<double> x(n), y(values_);
        for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) / (n - 1);
        x.back() = 1.0;
        interp_ = std::make_shared<Interp>(std::move(x), std::move(y));
    }

    ProfileKind kind() const override { return ProfileKind::TabulatedSmooth; }
    std::string name() const override { return "tabulated"; }
    double inv_p(double s, double) const override {
        const double v = (*interp_)(std::clamp(s, 0.0, 1.0));
        return 1.0 / v;
    }
    EndpointBehavior endpoint(int j) const override {
        const double p = j == 0 ? values_.front() : values_.back();
        return {p, regularity_[j], 1.0 / p, 0.0, 0.0, 0.0};
    }
    bool interior_degenerate() const override {
        for (std::size_t i = 1; i + 1 < values_.size(); ++i)
            if (values_[i] <= 1.0) return true;
        return false;
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> b;
        const std::size_t n = values_.size();
        for (std::size_t i = 1; i + 1 < n; ++i) b.push_back(static_cast<double>(i) / (n - 1));
        return b;
    }

    /// Tail of the Dini integral over a fixed window next to endpoint j.
    double dini_tail(int j) const {
        constexpr double window = 0.005;
        const double pe = j == 0 ? values_.front() : values_.back();
        auto f = [&](double d) {
            const double s = j == 0 ? d : 1.0 - d;
            return std::abs((*interp_)(s) - pe) / d;
        };
        using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
        return GK::integrate(f, 0.0, window, 15, 1e-10);
    }

    DiniRegularity numeric_dini(int j) const override {
        const double tail = dini_tail(j);
        if (tail < dini_tol_ / 10.0) return DiniRegularity::DiniConvergent;
        if (tail > dini_tol_ * 10.0) return DiniRegularity::DiniDivergent;
        throw InconclusiveClassification("Dini tail at s=" + std::to_string(j) + " is " + std::to_string(tail)
                                         + ", within a factor 10 of tolerance " + std::to_string(dini_tol_));
    }

    nlohmann::json to_json() const override {
        nlohmann::json j{{"type", "tabulated"}, {"values", values_}};
        if (regularity_[0] != DiniRegularity::Unknown || regularity_[1] != DiniRegularity::Unknown)
            j["endpoint_regularity"] = {to_string(regularity_[0]), to_string(regularity_[1])};
        if (dini_tol_ != 1e-2) j["dini_tol"] = dini_tol_;
        return j;
    }

    const std::vector<double>& values() const { return values_; }

private:
    using Interp = boost::math::interpolators::pchip<std::vector<double>>;
    std::vector<double> values_;
    std::array<DiniRegularity, 2> regularity_;
    double dini_tol_;
    std::shared_ptr<Interp> interp_;
};

namespace detail {

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
inline double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

}  // namespace detail

/// p = 2 + beta(s) (2(2s-1)^2 - 1): equal to 1 + 2(2s-1)^2 on [blend_end, 1-blend_end],
/// identically 2 on [0, blend_start] and [1-blend_start, 1].
class Example1Profile final : public GeneratorProfile {
public:
    explicit Example1Profile(double blend_start = 0.05, double blend_end = 0.2)
        : start_(blend_start), end_(blend_end) {
        if (!(blend_start > 0.0 && blend_start < blend_end && blend_end < 0.5))
            throw DomainError("example1 requires 0 < blend_start < blend_end < 1/2");
    }
    ProfileKind kind() const override { return ProfileKind::ClosedForm; }
    std::string name() const override { return "example1"; }
    double beta(double s, double sc) const {
        const double w = end_ - start_;
        return detail::smooth_step((s - start_) / w) * detail::smooth_step((sc - start_) / w);
    }
    double inv_p(double s, double sc) const override {
        const double x = s - sc;
        return 1.0 / (2.0 + beta(s, sc) * (2.0 * x * x - 1.0));
    }
    EndpointBehavior endpoint(int) const override { return {2.0, DiniRegularity::DiniConvergent, 0.5, 0, 0, 0}; }
    bool interior_degenerate() const override { return true; }
    nlohmann::json to_json() const override {
        return {{"type", "example1"}, {"blend_start", start_}, {"blend_end", end_}};
    }

private:
    double start_, end_;
};

/// p = 2 + beta(s)(|s-1/2|^-nu - 2), beta = 1 for |s-1/2| <= delta and 0 beyond 2 delta.
class Example2Profile final : public GeneratorProfile {
public:
    explicit Example2Profile(double nu = 0.5, double delta = -1.0) : nu_(nu), delta_(delta) {
        if (!(nu > 0.0 && nu < 1.0)) throw DomainError("example2 requires 0 < nu < 1");
        if (delta_ <= 0.0) delta_ = std::pow(2.0, -1.0 / nu) / 4.0;
        if (!(delta_ > 0.0 && delta_ < 0.25)) throw DomainError("example2 requires 0 < delta < 1/4");
        if (std::pow(2.0 * delta_, -nu) < 2.0) throw DomainError("example2 delta too large: p would drop below 2");
    }
    ProfileKind kind() const override { return ProfileKind::ClosedForm; }
    std::string name() const override { return "example2"; }
    double inv_p(double s, double sc) const override {
        const double x = std::abs(s < 0.5 ? 0.5 - s : sc - 0.5);
        if (x == 0.0) return 0.0;
        const double b = 1.0 - detail::smooth_step((x - delta_) / delta_);
        if (b == 1.0) return std::pow(x, nu_);
        return 1.0 / (2.0 + b * (std::pow(x, -nu_) - 2.0));
    }
    EndpointBehavior endpoint(int) const override { return {2.0, DiniRegularity::DiniConvergent, 0.5, 0, 0, 0}; }
    bool interior_degenerate() const override { return true; }
    std::vector<double> breakpoints() const override { return {0.5}; }
    std::vector<double> singular_points() const override { return {0.5}; }
    nlohmann::json to_json() const override { return {{"type", "example2"}, {"nu", nu_}, {"delta", delta_}}; }
    double nu() const { return nu_; }

private:
    double nu_, delta_;
};

/// p = log(10/s) / (log(10/s) - 1/2).
class Example3Profile final : public GeneratorProfile {
public:
    ProfileKind kind() const override { return ProfileKind::ClosedForm; }
    std::string name() const override { return "example3"; }
    double inv_p(double s, double) const override {
        if (s == 0.0) return 1.0;
        const double L = std::log(10.0) - std::log(s);
        return 1.0 - 0.5 / L;
    }
    EndpointBehavior endpoint(int j) const override {
        if (j == 0) return {1.0, DiniRegularity::DiniDivergent, 1.0, 0.5, 0.0, -1.0};
        const double ip = inv_p(1.0, 0.0);
        return {1.0 / ip, DiniRegularity::DiniConvergent, ip, 0.0, 0.0, 0.0};
    }
    bool tilde_conditions() const override { return true; }
    bool interior_degenerate() const override { return false; }
    nlohmann::json to_json() const override { return {{"type", "example3"}}; }
};

/// Pointwise conjugate exponent p* = p/(p-1) of another profile.
class ConjugateProfile final : public GeneratorProfile {
public:
    explicit ConjugateProfile(ProfilePtr base) : base_(std::move(base)) {}
    ProfileKind kind() const override { return base_->kind(); }
    std::string name() const override { return base_->name() + "*"; }
    double inv_p(double s, double sc) const override { return 1.0 - base_->inv_p(s, sc); }
    EndpointBehavior endpoint(int j) const override {
        const EndpointBehavior e = base_->endpoint(j);
        EndpointBehavior c;
        c.p_limit = conjugate_exponent(e.p_limit);
        c.dini = e.dini;
        c.inv_p = 1.0 - e.inv_p;
        c.r_log_power = -e.r_log_power;
        c.p_log_power = e.p_log_power - e.pm1_log_power;
        c.pm1_log_power = -e.pm1_log_power;
        return c;
    }
    bool tilde_conditions() const override { return base_->tilde_conditions(); }
    bool interior_degenerate() const override { return base_->interior_degenerate(); }
    std::vector<double> breakpoints() const override { return base_->breakpoints(); }
    std::vector<double> singular_points() const override { return base_->singular_points(); }
    DiniRegularity numeric_dini(int j) const override { return base_->numeric_dini(j); }
    nlohmann::json to_json() const override {
        nlohmann::json j = base_->to_json();
        j["conjugate"] = true;
        return j;
    }
    const ProfilePtr& base() const { return base_; }

private:
    ProfilePtr base_;
};

/// Conjugate profile; conjugating twice returns the original object.
inline ProfilePtr conjugate(const ProfilePtr& p) {
    if (auto c = std::dynamic_pointer_cast<const ConjugateProfile>(p)) return c->base();
    if (auto k = std::dynamic_pointer_cast<const ConstantProfile>(p))
        return std::make_shared<ConstantProfile>(conjugate_exponent(k->value()));
    return std::make_shared<ConjugateProfile>(p);
}

}  // namespace leray
