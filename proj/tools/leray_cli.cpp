// leray: command-line driver for piece-norm sweeps, spectra, duality and admissibility tables.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leray/leray.hpp"

namespace {

using leray::json;

enum Exit { kOk = 0, kSpec = 2, kNonAdmissible = 3, kClass = 4, kNumerical = 5 };

struct RunConfig {
    std::string command;
    std::string domain_arg;
    std::string measure_arg;
    int n_max = 10;
    int report_n = 32;
    std::string kind = "lstarl";
    std::string out;
    std::string format = "csv";
    double tol = 1e-9;
    std::string grid = "full";
    std::vector<double> qs{-2.5, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 1.9, 2.0, 2.5};
    std::vector<double> point{0.1, 0.0, 0.1, 0.0};
    double s = 0.5;
    double theta1 = 0.0;
    double theta2 = 0.0;
    int n = 1;
    int m = 1;
};

struct Resolved {
    leray::DomainModel domain;
    std::optional<leray::BoundaryMeasure> measure;
};

Resolved resolve(const RunConfig& cfg, bool need_measure) {
    if (cfg.domain_arg.empty()) throw leray::SpecError("--domain is required");
    Resolved r{leray::parse_domain(leray::load_json_arg(cfg.domain_arg)), std::nullopt};
    if (need_measure) {
        const json mj = cfg.measure_arg.empty() ? json{{"type", "mu0"}} : leray::load_json_arg(cfg.measure_arg);
        r.measure = leray::parse_measure(mj, r.domain);
    }
    return r;
}

json config_json(const RunConfig& cfg, const Resolved& r) {
    json c{{"command", cfg.command}, {"domain", leray::domain_to_json(r.domain)}, {"tol", cfg.tol}};
    if (r.measure) c["measure"] = r.measure->spec();
    if (cfg.command == "piece-norms" || cfg.command == "dual") {
        c["n_max"] = cfg.n_max;
        c["grid"] = cfg.grid;
    }
    if (cfg.command == "spectrum") {
        c["kind"] = cfg.kind;
        c["report_n"] = cfg.report_n;
    }
    if (cfg.command == "admissible") c["q"] = cfg.qs;
    if (cfg.command == "kernel-eval") {
        c["point"] = cfg.point;
        c["s"] = cfg.s;
        c["theta1"] = cfg.theta1;
        c["theta2"] = cfg.theta2;
        c["n"] = cfg.n;
        c["m"] = cfg.m;
    }
    return c;
}

std::vector<std::string> config_comments(const json& c) {
    std::vector<std::string> lines;
    for (auto it = c.begin(); it != c.end(); ++it) lines.push_back(it.key() + "=" + it.value().dump());
    return lines;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw leray::SpecError("cannot open output file '" + cfg.out + "'");
    f << text;
}

void emit_json(const RunConfig& cfg, const json& j) { emit(cfg, j.dump(2) + "\n"); }

json num(double x) { return std::isfinite(x) ? json(x) : json(x > 0 ? "inf" : "-inf"); }

void require_json(const RunConfig& cfg) {
    if (cfg.format != "json") throw leray::SpecError(cfg.command + " emits JSON only (use --format json)");
}

int cmd_domain_info(const RunConfig& cfg) {
    const Resolved r = resolve(cfg, false);
    const auto& d = r.domain;
    constexpr int kSamples = 199;
    double pmin = leray::kInf, pmax = 0.0;
    double k1[2]{leray::kInf, 0.0}, k2[2]{leray::kInf, 0.0}, k3[2]{leray::kInf, 0.0};
    for (int i = 1; i <= kSamples; ++i) {
        const double s = static_cast<double>(i) / (kSamples + 1);
        const double p = d.p(s);
        pmin = std::min(pmin, p);
        pmax = std::max(pmax, p);
        const auto c = leray::curvatures(d, s);
        k1[0] = std::min(k1[0], c.kappa1), k1[1] = std::max(k1[1], c.kappa1);
        k2[0] = std::min(k2[0], c.kappa2), k2[1] = std::max(k2[1], c.kappa2);
        k3[0] = std::min(k3[0], c.kappa3), k3[1] = std::max(k3[1], c.kappa3);
    }
    for (int j = 0; j < 2; ++j) {
        pmin = std::min(pmin, d.profile().endpoint(j).p_limit);
        pmax = std::max(pmax, d.profile().endpoint(j).p_limit);
    }
    json out{{"config", config_json(cfg, r)},
             {"class", leray::to_string(d.class_tag())},
             {"class_note", d.class_note()},
             {"b1", d.b1()},
             {"b2", d.b2()},
             {"p_endpoints", {num(d.profile().endpoint(0).p_limit), num(d.profile().endpoint(1).p_limit)}},
             {"p_range", {num(pmin), num(pmax)}},
             {"curvature_samples", kSamples},
             {"kappa1_range", {num(k1[0]), num(k1[1])}},
             {"kappa2_range", {num(k2[0]), num(k2[1])}},
             {"kappa3_range", {num(k3[0]), num(k3[1])}}};
    if (d.class_tag() == leray::DomainClass::P || d.class_tag() == leray::DomainClass::R)
        out["order_q_threshold"] = num(leray::order_q_threshold(d));
    emit_json(cfg, out);
    return kOk;
}

std::vector<std::pair<int, int>> make_grid(const RunConfig& cfg) {
    if (cfg.n_max < 0) throw leray::SpecError("--n-max must be non-negative");
    if (cfg.grid == "full") return leray::square_grid(cfg.n_max);
    if (cfg.grid == "diagonal") return leray::diagonal_grid(cfg.n_max);
    throw leray::SpecError("--grid must be full or diagonal");
}

int cmd_piece_norms(const RunConfig& cfg) {
    const Resolved r = resolve(cfg, true);
    const auto rows = leray::piece_norms(r.domain, *r.measure, make_grid(cfg), cfg.tol);
    const json c = config_json(cfg, r);
    if (cfg.format == "csv") {
        emit(cfg, leray::piece_norms_csv(rows, config_comments(c)));
        return kOk;
    }
    json arr = json::array();
    for (const auto& pn : rows) arr.push_back(leray::piece_norm_to_json(pn));
    emit_json(cfg, {{"config", c}, {"pieces", arr}});
    return kOk;
}

int cmd_spectrum(const RunConfig& cfg) {
    require_json(cfg);
    const Resolved r = resolve(cfg, true);
    leray::OperatorKind kind;
    if (cfg.kind == "lstarl") kind = leray::OperatorKind::LstarL;
    else if (cfg.kind == "ks") kind = leray::OperatorKind::KerzmanStein;
    else throw leray::SpecError("--kind must be lstarl or ks");
    const auto rep = leray::essential_spectrum(r.domain, *r.measure, kind, cfg.report_n);
    json out = leray::spectrum_to_json(rep);
    out["config"] = config_json(cfg, r);
    emit_json(cfg, out);
    return kOk;
}

int cmd_dual(const RunConfig& cfg) {
    require_json(cfg);
    const Resolved r = resolve(cfg, true);
    const auto pair = leray::make_dual_pair(r.domain, *r.measure);
    const auto rep = leray::verify_duality(pair, make_grid(cfg), std::min(cfg.tol, 1e-10));
    json out{{"config", config_json(cfg, r)},
             {"polar", leray::domain_to_json(pair.polar)},
             {"polar_class", leray::to_string(pair.polar.class_tag())},
             {"dual_measure", pair.measure_dual.spec()},
             {"verification",
              {{"pieces", rep.count},
               {"max_discrepancy", rep.max_discrepancy},
               {"arg", {rep.arg_n, rep.arg_m}},
               {"threshold", rep.threshold},
               {"passed", rep.passed}}}};
    emit_json(cfg, out);
    return rep.passed ? kOk : kNumerical;
}

int cmd_admissible(const RunConfig& cfg) {
    const Resolved r = resolve(cfg, false);
    const auto& d = r.domain;
    std::optional<double> thr;
    if (d.class_tag() == leray::DomainClass::P || d.class_tag() == leray::DomainClass::R)
        thr = leray::order_q_threshold(d);
    struct Row {
        std::string label;
        double q;
        leray::AdmissibilityReport rep;
    };
    std::vector<Row> rows;
    for (double q : cfg.qs) rows.push_back({"order_q", q, leray::is_admissible_report(leray::order_q_measure(d, q))});
    if (!cfg.measure_arg.empty()) {
        const auto m = leray::parse_measure(leray::load_json_arg(cfg.measure_arg), d);
        rows.push_back({m.label(), m.order_q().value_or(std::nan("")), leray::is_admissible_report(m)});
    }
    json c = config_json(cfg, r);
    if (!cfg.measure_arg.empty()) c["measure"] = leray::load_json_arg(cfg.measure_arg);
    if (cfg.format == "csv") {
        std::ostringstream o;
        for (const auto& line : config_comments(c)) o << "# " << line << '\n';
        o << "# class=" << leray::to_string(d.class_tag()) << '\n';
        if (thr) o << "# threshold=" << leray::fmt17(*thr) << '\n';
        o << "measure,q,verdict,boundary_case\n";
        for (const auto& row : rows)
            o << row.label << ',' << leray::fmt17(row.q) << ',' << leray::to_string(row.rep.verdict) << ','
              << (row.rep.boundary_case ? "true" : "false") << '\n';
        emit(cfg, o.str());
        return kOk;
    }
    json arr = json::array();
    for (const auto& row : rows)
        arr.push_back({{"measure", row.label},
                       {"q", num(row.q)},
                       {"verdict", leray::to_string(row.rep.verdict)},
                       {"boundary_case", row.rep.boundary_case},
                       {"numerical", row.rep.numerical},
                       {"note", row.rep.note}});
    json out{{"config", c}, {"class", leray::to_string(d.class_tag())}, {"table", arr}};
    out["threshold"] = thr ? num(*thr) : json(nullptr);
    emit_json(cfg, out);
    return kOk;
}

int cmd_kernel_eval(const RunConfig& cfg) {
    require_json(cfg);
    const Resolved r = resolve(cfg, false);
    if (cfg.point.size() != 4) throw leray::SpecError("--point takes four numbers: Re w1, Im w1, Re w2, Im w2");
    if (cfg.n < 0 || cfg.m < 0) throw leray::SpecError("--n and --m must be non-negative");
    leray::InteriorPoint w;
    try {
        w = leray::make_interior_point(r.domain, {cfg.point[0], cfg.point[1]}, {cfg.point[2], cfg.point[3]});
    } catch (const leray::DomainError& e) {
        throw leray::SpecError(e.what());
    }
    const auto k = leray::leray_kernel_density(r.domain, cfg.s, cfg.theta1, cfg.theta2, w);
    leray::MonomialFunction f{cfg.n, cfg.m, [](double) { return leray::cplx(1.0, 0.0); }, {}};
    const auto lf = leray::apply_to_monomial(r.domain, f, w, std::min(cfg.tol, 1e-10));
    json out{{"config", config_json(cfg, r)},
             {"kernel_density", {k.real(), k.imag()}},
             {"monomial_image", {lf.real(), lf.imag()}}};
    emit_json(cfg, out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leray transform spectra on convex Reinhardt domains"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool measure) {
        sub->add_option("--domain", cfg.domain_arg, "domain spec: inline JSON or file")->required();
        if (measure) sub->add_option("--measure", cfg.measure_arg, "measure spec: inline JSON or file (default mu0)");
        sub->add_option("--out", cfg.out, "output file (default stdout)");
        sub->add_option("--tol", cfg.tol, "quadrature tolerance")->capture_default_str();
    };
    auto* info = app.add_subcommand("domain-info", "class tag, endpoint exponents and curvature extremes");
    common(info, false);
    info->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

    auto* pn = app.add_subcommand("piece-norms", "piece norms over an index grid");
    common(pn, true);
    pn->add_option("--n-max", cfg.n_max)->capture_default_str();
    pn->add_option("--grid", cfg.grid)->check(CLI::IsMember({"full", "diagonal"}))->capture_default_str();
    pn->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    auto* sp = app.add_subcommand("spectrum", "essential spectrum report");
    common(sp, true);
    sp->add_option("--kind", cfg.kind)->check(CLI::IsMember({"lstarl", "ks"}))->capture_default_str();
    sp->add_option("--report-n", cfg.report_n)->capture_default_str();
    sp->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

    auto* du = app.add_subcommand("dual", "polar domain and piece-norm duality check");
    common(du, true);
    du->add_option("--n-max", cfg.n_max, "default 20");
    du->add_option("--grid", cfg.grid)->check(CLI::IsMember({"full", "diagonal"}))->capture_default_str();
    du->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

    auto* ad = app.add_subcommand("admissible", "admissibility of order-q measures");
    common(ad, true);
    ad->add_option("--q", cfg.qs, "orders to test")->delimiter(',');
    ad->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    auto* ke = app.add_subcommand("kernel-eval", "kernel density and image of a monomial at an interior point");
    common(ke, false);
    ke->add_option("--point", cfg.point, "Re w1, Im w1, Re w2, Im w2")->expected(4);
    ke->add_option("--s", cfg.s)->capture_default_str();
    ke->add_option("--theta1", cfg.theta1)->capture_default_str();
    ke->add_option("--theta2", cfg.theta2)->capture_default_str();
    ke->add_option("--n", cfg.n)->capture_default_str();
    ke->add_option("--m", cfg.m)->capture_default_str();
    ke->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kSpec;
    }

    const auto* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (sub->count("--format") == 0)
        cfg.format = cfg.command == "piece-norms" || cfg.command == "admissible" ? "csv" : "json";
    if (cfg.command == "dual" && sub->count("--n-max") == 0) cfg.n_max = 20;
    try {
        if (cfg.command == "domain-info") return cmd_domain_info(cfg);
        if (cfg.command == "piece-norms") return cmd_piece_norms(cfg);
        if (cfg.command == "spectrum") return cmd_spectrum(cfg);
        if (cfg.command == "dual") return cmd_dual(cfg);
        if (cfg.command == "admissible") return cmd_admissible(cfg);
        return cmd_kernel_eval(cfg);
    } catch (const leray::SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSpec;
    } catch (const leray::InvalidProfile& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSpec;
    } catch (const leray::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSpec;
    } catch (const leray::NonAdmissibleMeasure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNonAdmissible;
    } catch (const leray::UnsupportedClass& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kClass;
    } catch (const leray::InconclusiveClassification& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kClass;
    } catch (const leray::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
}
