#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "spatcorr/cli.hpp"

namespace spatcorr::cli {

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunReport start_report(std::string command) {
    RunReport r;
    r.command = std::move(command);
    r.timestamp = utc_timestamp();
    return r;
}

IngestResult load_input(RunReport& report, const std::string& path) {
    report.inputs.push_back({path, sha256_file(path)});
    auto in = ingest_csv(path);
    report.warnings.insert(report.warnings.end(), in.warnings.begin(), in.warnings.end());
    return in;
}

Json corr_json(const CorrelationResult& c) {
    return {{"r", c.r}, {"n", c.n}, {"p_value", c.p_value}, {"method", std::string(to_string(c.method))}};
}

Json domain_json(const RectDomain& d) {
    return {{"x_lo", d.x_lo}, {"x_hi", d.x_hi}, {"y_lo", d.y_lo}, {"y_hi", d.y_hi}};
}

Json binning_json(const BinningSpec& b) {
    if (b.mode == BinningSpec::Mode::EqualWidth) return {{"mode", "equal-width"}, {"bin_count", b.bin_count}};
    return {{"mode", "explicit-edges"}, {"edges", b.edges}};
}

std::string_view to_string(ResidualForm f) { return f == ResidualForm::Collapsed ? "collapsed" : "raw-double-sum"; }

}  // namespace

RunReport run_corr(const CorrOptions& o) {
    auto report = start_report("corr");
    const auto in = load_input(report, o.input);
    const auto& table = in.table;

    std::optional<Stratification> strat;
    if (o.strata) {
        strat = parse_strata(*o.strata, o.axis);
    } else {
        const auto ys = o.axis == Axis::Y ? table.ys() : table.xs();
        auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
        strat = Stratification({{"all", *lo, *hi > *lo ? *hi : *lo + 1.0}}, o.axis);
    }
    const auto rep = stratified_correlation(table, o.var_a, o.var_b, *strat, o.method);

    report.parameters = {{"input", o.input},
                         {"vars", {o.var_a, o.var_b}},
                         {"method", std::string(to_string(o.method))},
                         {"strata", o.strata.value_or("")},
                         {"axis", o.axis == Axis::Y ? "y" : "x"},
                         {"svg", o.svg.value_or("")}};
    Json per = Json::array();
    for (const auto& s : rep.per_stratum) {
        auto j = corr_json(s.result);
        j["stratum"] = s.stratum;
        per.push_back(std::move(j));
    }
    report.results["per_stratum"] = std::move(per);
    report.results["pooled"] = corr_json(rep.pooled);
    report.results["neutralization_gap"] = {{"value", rep.neutralization_gap},
                                            {"method", std::string(to_string(o.method))},
                                            {"n", rep.pooled.n}};
    if (o.svg) emit_svg_scatter(table, o.var_a, o.var_b, &*strat, *o.svg);
    return report;
}

RunReport run_fit(const FitCmdOptions& o) {
    auto report = start_report("fit");
    const auto in = load_input(report, o.input);
    FitOptions fo;
    fo.degree = o.degree;
    fo.objective = o.objective;
    fo.cells_per_axis = o.cells;
    const auto field = fit_surface(in.table, o.variable, fo);
    report.parameters = {{"input", o.input},
                         {"var", o.variable},
                         {"degree", o.degree},
                         {"objective", std::string(to_string(o.objective))},
                         {"cells", o.cells},
                         {"field_out", o.field_out.value_or("")}};
    report.results["field"] = field_to_json(field);
    if (o.field_out) {
        std::ofstream out(*o.field_out, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, "cli/fit", "cannot write '" + *o.field_out + "'");
        out << dump_json(field_to_json(field));
    }
    return report;
}

RunReport run_fcorr(const FcorrOptions& o) {
    auto report = start_report("fcorr");
    const auto in = load_input(report, o.input);
    FitOptions fo;
    fo.degree = o.degree;
    fo.objective = o.objective;
    const auto f1 = fit_surface(in.table, o.var_a, fo);
    const auto f2 = fit_surface(in.table, o.var_b, fo);
    FunctionalCorrOptions co;
    co.method = o.method;
    co.order = o.order;
    co.centered = o.centered;
    const auto fc = functional_correlation(f1, f2, co);

    report.parameters = {{"input", o.input},
                         {"vars", {o.var_a, o.var_b}},
                         {"degree", o.degree},
                         {"objective", std::string(to_string(o.objective))},
                         {"method", std::string(to_string(o.method))},
                         {"order", o.order},
                         {"centered", o.centered}};
    report.results = {{"r12", fc.r12},
                      {"inner", fc.inner},
                      {"norm1", fc.norm1},
                      {"norm2", fc.norm2},
                      {"domain", domain_json(fc.domain)},
                      {"method", std::string(to_string(fc.method))},
                      {"quadrature_order", fc.quadrature_order},
                      {"n", in.table.size()},
                      {"variant", fc.centered ? "centered (extension)" : "uncentered"},
                      {"negative_on_domain", {{o.var_a, fc.f1_negative}, {o.var_b, fc.f2_negative}}},
                      {"fields", {field_to_json(f1), field_to_json(f2)}}};
    if (fc.f1_negative) report.warnings.push_back("field '" + o.var_a + "' takes negative values on the domain");
    if (fc.f2_negative) report.warnings.push_back("field '" + o.var_b + "' takes negative values on the domain");
    return report;
}

RunReport run_couple(const CoupleOptions& o) {
    auto report = start_report("couple");
    if (o.vars.size() != 4)
        throw Error(ErrorKind::InvalidArgument, "cli/couple", "--vars needs exactly four variables");
    const auto in = load_input(report, o.input);
    std::array<FittedField, 4> fields;
    for (std::size_t i = 0; i < 4; ++i) fields[i] = fit_surface(in.table, o.vars[i], o.degree);
    const auto rel = derive_coupling(fields);
    const auto check = verify_coupling(rel, in.table);

    report.parameters = {{"input", o.input}, {"vars", o.vars}, {"degree", o.degree}};
    Json steps = Json::array();
    for (const auto& s : rel.provenance)
        steps.push_back({{"label", s.label},
                         {"inputs", {s.input_a, s.input_b}},
                         {"eliminated", s.eliminated},
                         {"kind", s.kind},
                         {"scale", s.scale},
                         {"terms", s.result.term_count()},
                         {"text", s.result.to_string()}});
    report.results = {{"relation", poly_to_json(rel.poly)},
                      {"method", "sylvester-resultant"},
                      {"scale", rel.scale},
                      {"prune_tolerance", rel.prune_tolerance},
                      {"provenance", std::move(steps)},
                      {"verification", {{"max_abs", check.max_abs}, {"rms", check.rms}, {"n", check.n},
                                        {"method", "evaluate-at-observed-tuples"}}},
                      {"n", in.table.size()}};
    report.warnings.insert(report.warnings.end(), check.warnings.begin(), check.warnings.end());
    return report;
}

RunReport run_synth(const SynthOptions& o) {
    auto report = start_report("synth");
    report.inputs.push_back({o.config, sha256_file(o.config)});
    std::ifstream cfg(o.config, std::ios::binary);
    Json j;
    try {
        j = Json::parse(cfg);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Format, "cli/synth", std::string("config is not valid JSON: ") + e.what());
    }
    auto spec = landscape_from_json(j);
    if (o.seed) spec.seed = *o.seed;
    const auto table = generate_landscape(spec);
    {
        std::ofstream out(o.out, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, "cli/synth", "cannot write '" + o.out + "'");
        write_csv(table, out);
    }
    report.parameters = {{"config", o.config}, {"out", o.out}, {"seed", spec.seed}};
    report.results = {{"rows", table.size()},
                      {"n", table.size()},
                      {"variables", table.variables()},
                      {"method", "pcg32+box-muller"},
                      {"out_sha256", sha256_file(o.out)}};
    return report;
}

RunReport run_residual(const ResidualOptions& o) {
    auto report = start_report("residual");
    const auto in = load_input(report, o.input);
    const auto sys = build_correspondence(in.table, o.var_a, o.var_b, o.bin_a, o.bin_b);
    const auto res = total_residual(sys, o.form);

    report.parameters = {{"input", o.input},
                         {"vars", {o.var_a, o.var_b}},
                         {"bin_a", binning_json(o.bin_a)},
                         {"bin_b", binning_json(o.bin_b)},
                         {"form", std::string(to_string(o.form))},
                         {"chain", o.chain.value_or("")},
                         {"fit_degree", o.fit_degree ? Json(*o.fit_degree) : Json(nullptr)}};
    Json per = Json::array();
    for (const auto& [id, e] : res.per_point) per.push_back({{"id", id}, {"e", e}});
    report.results["per_point"] = std::move(per);
    report.results["total"] = {{"value", res.total}, {"method", std::string(to_string(o.form))}, {"n", sys.size()}};
    if (o.chain) {
        const auto parsed = parse_chain(*o.chain);
        const auto sel = select_chain(sys, parsed.steps, parsed.reducer);
        if (std::holds_alternative<double>(sel))
            report.results["chain"] = {{"value", std::get<double>(sel)}, {"method", "mean"}, {"n", sys.size()}};
        else
            report.results["chain"] = {{"rows", std::get<std::vector<std::string>>(sel)}, {"method", "set"},
                                       {"n", sys.size()}};
    }
    if (o.fit_degree) {
        const auto fit = fit_by_correspondence(sys, *o.fit_degree);
        report.results["fit"] = {{"coefficients", fit.g.coeffs},
                                 {"objective", fit.objective},
                                 {"terms", fit.terms},
                                 {"method", "correspondence-least-squares"},
                                 {"n", sys.size()}};
    }
    return report;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return kExitUsage;
        case ErrorKind::Format:
        case ErrorKind::EmptyInput:
        case ErrorKind::Shape:
        case ErrorKind::OutOfRange:
        case ErrorKind::Io: return kExitFormat;
        case ErrorKind::NumericalIntegrity: return kExitNumerical;
        default: return kExitDegenerate;
    }
}

namespace {

BinningSpec binning_from(std::optional<int> bins, const std::optional<std::string>& edges, int fallback) {
    if (edges) {
        std::vector<double> e;
        for (const auto& item : split_list(*edges)) {
            try {
                e.push_back(std::stod(item));
            } catch (const std::logic_error&) {
                throw Error(ErrorKind::Format, "cli/residual", "bad bin edge '" + item + "'");
            }
        }
        return BinningSpec::explicit_edges(std::move(e));
    }
    return BinningSpec::equal_width(bins.value_or(fallback));
}

std::pair<std::string, std::string> two_vars(const std::string& text) {
    const auto v = split_list(text);
    if (v.size() != 2) throw Error(ErrorKind::InvalidArgument, "cli", "--vars needs exactly two variables");
    return {v[0], v[1]};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"spatcorr: stratified, functional and elimination-based correlation for spatial samples"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    std::string report_path;
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--report", report_path, "Write the report here instead of stdout");

    std::string vars, method = "spearman", strata, axis = "y", svg, objective = "ols", integ = "exact";
    std::string edges_a, edges_b, chain, form = "collapsed";
    std::optional<int> bins_a, bins_b, fit_degree;
    std::optional<std::uint64_t> seed;
    CorrOptions corr;
    FitCmdOptions fit;
    FcorrOptions fcorr;
    CoupleOptions couple;
    SynthOptions synth;
    ResidualOptions residual;

    auto* c_corr = app.add_subcommand("corr", "Stratified classical correlation");
    c_corr->add_option("--input", corr.input)->required();
    c_corr->add_option("--vars", vars, "a,b")->required();
    c_corr->add_option("--method", method)->check(CLI::IsMember({"pearson", "spearman"}));
    c_corr->add_option("--strata", strata, "name=lo:hi,...");
    c_corr->add_option("--axis", axis)->check(CLI::IsMember({"x", "y"}));
    c_corr->add_option("--svg", svg, "Write a scatter plot");

    auto* c_fit = app.add_subcommand("fit", "Fit a polynomial spatial surface");
    c_fit->add_option("--input", fit.input)->required();
    c_fit->add_option("--var", fit.variable)->required();
    c_fit->add_option("--degree", fit.degree)->check(CLI::Range(0, kMaxSurfaceDegree));
    c_fit->add_option("--objective", objective)->check(CLI::IsMember({"ols", "correspondence"}));
    c_fit->add_option("--cells", fit.cells, "Cells per axis for the correspondence objective");
    c_fit->add_option("--field-out", fit.field_out, "Serialize the fitted field as JSON");

    auto* c_fcorr = app.add_subcommand("fcorr", "Functional correlation of two fitted fields");
    c_fcorr->add_option("--input", fcorr.input)->required();
    c_fcorr->add_option("--vars", vars, "a,b")->required();
    c_fcorr->add_option("--degree", fcorr.degree)->check(CLI::Range(0, kMaxSurfaceDegree));
    c_fcorr->add_option("--objective", objective)->check(CLI::IsMember({"ols", "correspondence"}));
    c_fcorr->add_option("--integration", integ)->check(CLI::IsMember({"exact", "quadrature"}));
    c_fcorr->add_option("--order", fcorr.order, "Gauss-Legendre order (0 = automatic)");
    c_fcorr->add_flag("--centered", fcorr.centered, "Subtract domain means first (extension)");

    auto* c_couple = app.add_subcommand("couple", "Eliminate coordinates to a coupling relation");
    c_couple->add_option("--input", couple.input)->required();
    c_couple->add_option("--vars", vars, "c,n,p,m")->required();
    c_couple->add_option("--degree", couple.degree)->check(CLI::Range(0, 2));

    auto* c_synth = app.add_subcommand("synth", "Generate a synthetic landscape CSV");
    c_synth->add_option("--config", synth.config)->required();
    c_synth->add_option("--out", synth.out)->required();
    c_synth->add_option("--seed", seed, "Override the config seed");

    auto* c_res = app.add_subcommand("residual", "Correspondence-set residuals");
    c_res->add_option("--input", residual.input)->required();
    c_res->add_option("--vars", vars, "a,b")->required();
    c_res->add_option("--bins-a", bins_a);
    c_res->add_option("--bins-b", bins_b);
    c_res->add_option("--edges-a", edges_a);
    c_res->add_option("--edges-b", edges_b);
    c_res->add_option("--form", form)->check(CLI::IsMember({"collapsed", "raw"}));
    c_res->add_option("--chain", chain, "Selection chain, e.g. 'mean | c[n] : n[0] : c{row-1}'");
    c_res->add_option("--fit-degree", fit_degree, "Also fit g: b -> a by the correspondence objective");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        RunReport report;
        if (*c_corr) {
            std::tie(corr.var_a, corr.var_b) = two_vars(vars);
            corr.method = parse_corr_method(method);
            if (!strata.empty()) corr.strata = strata;
            corr.axis = axis == "x" ? Axis::X : Axis::Y;
            if (!svg.empty()) corr.svg = svg;
            report = run_corr(corr);
        } else if (*c_fit) {
            fit.objective = parse_fit_objective(objective);
            report = run_fit(fit);
        } else if (*c_fcorr) {
            std::tie(fcorr.var_a, fcorr.var_b) = two_vars(vars);
            fcorr.objective = parse_fit_objective(objective);
            fcorr.method = integ == "exact" ? IntegrationMethod::ExactMonomial : IntegrationMethod::Quadrature;
            report = run_fcorr(fcorr);
        } else if (*c_couple) {
            couple.vars = split_list(vars);
            report = run_couple(couple);
        } else if (*c_synth) {
            synth.seed = seed;
            report = run_synth(synth);
        } else {
            std::tie(residual.var_a, residual.var_b) = two_vars(vars);
            residual.bin_a = binning_from(bins_a, edges_a.empty() ? std::nullopt : std::optional(edges_a), 4);
            residual.bin_b = binning_from(bins_b, edges_b.empty() ? std::nullopt : std::optional(edges_b), 4);
            residual.form = form == "raw" ? ResidualForm::RawDoubleSum : ResidualForm::Collapsed;
            if (!chain.empty()) residual.chain = chain;
            residual.fit_degree = fit_degree;
            report = run_residual(residual);
        }
        const auto j = report_to_json(report);
        const auto text = format == "text" ? dump_text(j) : dump_json(j);
        if (report_path.empty()) {
            out << text;
        } else {
            std::ofstream f(report_path, std::ios::binary);
            if (!f) throw Error(ErrorKind::Io, "cli/report", "cannot write '" + report_path + "'");
            f << text;
        }
        for (const auto& w : report.warnings) err << "warning: " << w << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "error [" << e.where() << "] (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
}

}  // namespace spatcorr::cli
