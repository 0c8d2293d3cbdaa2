#pragma once

// JSON domain/measure specifications and CSV emission.

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "leray/domain.hpp"
#include "leray/error.hpp"
#include "leray/measure.hpp"
#include "leray/profile.hpp"
#include "leray/spectrum.hpp"

namespace leray {

using json = nlohmann::json;

/// Inline JSON when the text starts with '{', otherwise a path to a JSON file.
inline json load_json_arg(const std::string& arg) {
    std::string text = arg;
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw SpecError("empty specification");
    if (arg[first] != '{') {
        std::ifstream in(arg);
        if (!in) throw SpecError("cannot open specification file '" + arg + "'");
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw SpecError(std::string("malformed JSON: ") + e.what());
    }
}

namespace detail {

inline double req_number(const json& j, const char* key, const char* ctx) {
    if (!j.contains(key)) throw SpecError(std::string(ctx) + ": missing field '" + key + "'");
    if (!j.at(key).is_number()) throw SpecError(std::string(ctx) + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

inline double opt_number(const json& j, const char* key, double def, const char* ctx) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_number()) throw SpecError(std::string(ctx) + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

inline std::string req_string(const json& j, const char* key, const char* ctx) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw SpecError(std::string(ctx) + ": missing string field '" + key + "'");
    return j.at(key).get<std::string>();
}

}  // namespace detail

inline ProfilePtr parse_profile(const json& j) {
    if (!j.is_object()) throw SpecError("profile: expected an object");
    const std::string type = detail::req_string(j, "type", "profile");
    ProfilePtr p;
    try {
        if (type == "constant") {
            p = std::make_shared<ConstantProfile>(detail::req_number(j, "p", "constant profile"));
        } else if (type == "tabulated") {
            if (!j.contains("values") || !j.at("values").is_array())
                throw SpecError("tabulated profile: missing array 'values'");
            std::vector<double> v;
            for (const auto& x : j.at("values")) {
                if (!x.is_number()) throw SpecError("tabulated profile: 'values' must be numbers");
                v.push_back(x.get<double>());
            }
            std::array<DiniRegularity, 2> reg{DiniRegularity::Unknown, DiniRegularity::Unknown};
            if (j.contains("endpoint_regularity")) {
                const auto& r = j.at("endpoint_regularity");
                if (!r.is_array() || r.size() != 2 || !r[0].is_string() || !r[1].is_string())
                    throw SpecError("tabulated profile: 'endpoint_regularity' must be two strings");
                reg = {dini_from_string(r[0].get<std::string>()), dini_from_string(r[1].get<std::string>())};
            }
            const double tol = detail::opt_number(j, "dini_tol", 1e-2, "tabulated profile");
            p = std::make_shared<TabulatedProfile>(std::move(v), reg, tol);
        } else if (type == "example1") {
            p = std::make_shared<Example1Profile>(detail::opt_number(j, "blend_start", 0.05, "example1"),
                                                  detail::opt_number(j, "blend_end", 0.2, "example1"));
        } else if (type == "example2") {
            p = std::make_shared<Example2Profile>(detail::opt_number(j, "nu", 0.5, "example2"),
                                                  detail::opt_number(j, "delta", -1.0, "example2"));
        } else if (type == "example3") {
            p = std::make_shared<Example3Profile>();
        } else {
            throw SpecError("profile: unknown type '" + type + "'");
        }
    } catch (const SpecError&) {
        throw;
    } catch (const Error& e) {
        throw SpecError(std::string("profile: ") + e.what());
    }
    if (j.contains("conjugate")) {
        if (!j.at("conjugate").is_boolean()) throw SpecError("profile: 'conjugate' must be a boolean");
        if (j.at("conjugate").get<bool>()) p = conjugate(p);
    }
    return p;
}

inline DomainModel parse_domain(const json& j) {
    if (!j.is_object()) throw SpecError("domain: expected an object");
    const std::string kind = detail::req_string(j, "kind", "domain");
    try {
        if (kind == "pball")
            return from_pball(detail::req_number(j, "p", "pball"), detail::req_number(j, "a1", "pball"),
                              detail::req_number(j, "a2", "pball"));
        if (kind == "generator") {
            if (!j.contains("profile")) throw SpecError("generator: missing field 'profile'");
            const ProfilePtr prof = parse_profile(j.at("profile"));
            const bool ex3 = j.at("profile").value("type", "") == "example3" && !j.at("profile").value("conjugate", false);
            const double b1 = detail::opt_number(j, "b1", ex3 ? example3_default_b1() : 1.0, "generator");
            const double b2 = detail::opt_number(j, "b2", 1.0, "generator");
            return from_generator(prof, b1, b2);
        }
    } catch (const SpecError&) {
        throw;
    } catch (const Error& e) {
        throw SpecError(std::string("domain: ") + e.what());
    }
    throw SpecError("domain: unknown kind '" + kind + "'");
}

inline json domain_to_json(const DomainModel& d) {
    if (d.is_pball()) return {{"kind", "pball"}, {"p", d.pball_p()}, {"a1", d.a1()}, {"a2", d.a2()}};
    return {{"kind", "generator"}, {"b1", d.b1()}, {"b2", d.b2()}, {"profile", d.profile().to_json()}};
}

inline BoundaryMeasure parse_measure(const json& j, const DomainModel& d) {
    if (!j.is_object()) throw SpecError("measure: expected an object");
    const std::string type = detail::req_string(j, "type", "measure");
    if (type == "order_q") return order_q_measure(d, detail::req_number(j, "q", "order_q measure"));
    if (type == "surface") return surface_measure(d);
    if (type == "fefferman") return fefferman_measure(d);
    if (type == "mu0") return mu0_measure(d);
    throw SpecError("measure: unknown type '" + type + "'");
}

/// %.17g formatting for round-trip exactness.
inline std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline const char* kPieceCsvHeader = "n,m,norm_sq,ks_norm,logI_m1,logI_0,logI_p1";

/// CSV rows sorted by (n, m); comment lines starting with '#' precede the header.
inline std::string piece_norms_csv(std::vector<PieceNorm> rows, const std::vector<std::string>& comments = {}) {
    std::sort(rows.begin(), rows.end(),
              [](const PieceNorm& a, const PieceNorm& b) { return std::pair(a.n, a.m) < std::pair(b.n, b.m); });
    std::ostringstream out;
    for (const auto& c : comments) out << "# " << c << '\n';
    out << kPieceCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.n << ',' << r.m << ',' << fmt17(r.norm_sq) << ',' << fmt17(ks_piece_norm(r)) << ','
            << fmt17(r.logI_minus1.log()) << ',' << fmt17(r.logI_0.log()) << ',' << fmt17(r.logI_plus1.log())
            << '\n';
    }
    return out.str();
}

inline json piece_norm_to_json(const PieceNorm& r) {
    return {{"n", r.n},
            {"m", r.m},
            {"norm_sq", r.norm_sq},
            {"ks_norm", ks_piece_norm(r)},
            {"angle", r.angle()},
            {"logI_m1", r.logI_minus1.log()},
            {"logI_0", r.logI_0.log()},
            {"logI_p1", r.logI_plus1.log()}};
}

inline json spectrum_to_json(const SpectrumReport& r) {
    auto num = [](double x) -> json { return std::isfinite(x) ? json(x) : json(x > 0 ? "inf" : "-inf"); };
    return {{"operator_kind", to_string(r.kind)},
            {"continuous_branch",
             {{"lower", num(r.continuous_branch.lower)},
              {"upper", num(r.continuous_branch.upper)},
              {"s_lower", r.continuous_branch.s_lower},
              {"s_upper", r.continuous_branch.s_upper}}},
            {"p1", num(r.p1)},
            {"p2", num(r.p2)},
            {"q", r.q},
            {"discrete_family_1", r.discrete_family_1},
            {"discrete_family_2", r.discrete_family_2},
            {"includes_zero", r.includes_zero},
            {"essential_norm", num(r.essential_norm)},
            {"note", r.note}};
}

}  // namespace leray
