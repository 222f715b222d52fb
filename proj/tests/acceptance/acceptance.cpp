// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
//   acceptance [--soil-csv PATH]
//
// Criterion 8 reads a transcription of the Cleveland & Liptzin (2007) soil
// C/N table (columns id,x,y,c,n[,stratum]); it is skipped when the file is
// absent. The default path is tests/data/cleveland_liptzin_2007.csv.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "../fixture.hpp"
#include "../oracles/oracles.hpp"
#include "../oracles/regression_case.hpp"
#include "../support.hpp"
#include "spatcorr/cli.hpp"
#include "spatcorr/error.hpp"

using namespace spatcorr;
namespace fs = std::filesystem;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
    Status status = Status::Pass;
    std::string detail;
};

// Records failed checks; the first few are kept for the report line.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    void worst(double& slot, double value) { slot = std::max(slot, value); }
    Outcome outcome(const std::string& detail) const {
        if (failures_ == 0) return {Status::Pass, detail};
        return {Status::Fail, fmt::format("{} failed check(s): {} [{}]", failures_, notes_, detail)};
    }

private:
    int failures_ = 0;
    std::string notes_;
};

const RectDomain kUnit{0, 1, 0, 1};

Outcome functional_analytic() {
    Checker c;
    const double r = functional_correlation(test::xy_poly({{1, 0, 1}}), test::xy_poly({{2, 0, 1}}), kUnit).r12;
    const double err = std::abs(r - std::sqrt(15.0) / 4.0);
    c.expect(err <= 1e-9, fmt::format("r12(x, x^2) off by {:.3g}", err));
    std::mt19937_64 rng(1001);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const auto f = test::random_xy_poly(rng, unsigned(i % 5));
        const double same = functional_correlation(f, f, kUnit).r12;
        const double flip = functional_correlation(f, -f, kUnit).r12;
        c.worst(worst, std::max(std::abs(same - 1.0), std::abs(flip + 1.0)));
    }
    c.expect(worst <= 1e-12, fmt::format("self/negated deviation {:.3g}", worst));
    return c.outcome(fmt::format("|r12(x,x^2) - sqrt(15)/4| = {:.2g}, max self/neg dev = {:.2g} over 100 fields", err, worst));
}

Outcome cauchy_schwarz_sweep() {
    Checker c;
    std::mt19937_64 rng(1002);
    FunctionalCorrOptions quad;
    quad.method = IntegrationMethod::Quadrature;
    double over = -INFINITY, gap = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto f1 = test::random_xy_poly(rng, unsigned(rng() % 5));
        const auto f2 = test::random_xy_poly(rng, unsigned(rng() % 5));
        const auto exact = functional_correlation(f1, f2, kUnit);
        const auto gl = functional_correlation(f1, f2, kUnit, quad);
        over = std::max(over, std::abs(exact.r12) - 1.0);
        c.worst(gap, std::abs(exact.r12 - gl.r12));
    }
    c.expect(over <= 1e-12, fmt::format("|r12| exceeded 1 by {:.3g}", over));
    c.expect(gap <= 1e-10, fmt::format("exact vs quadrature gap {:.3g}", gap));
    return c.outcome(fmt::format("max(|r12| - 1) = {:.2g}, max exact/GL gap = {:.2g} over 1000 pairs", over, gap));
}

Outcome residual_oracle() {
    Checker c;
    std::mt19937_64 rng(1003);
    std::uniform_int_distribution<int> nrows(1, 12), nbins(1, 4), level(0, 6);
    double worst = 0;
    for (int t = 0; t < 200; ++t) {
        const int n = nrows(rng);
        std::vector<double> a(n), b(n);
        for (int i = 0; i < n; ++i) a[i] = level(rng) * 0.9 - 1, b[i] = level(rng) * 1.7;
        const auto table = test::ab_table(a, b);
        const auto sys = build_correspondence(table, "a", "b", BinningSpec::equal_width(nbins(rng)),
                                              BinningSpec::equal_width(nbins(rng)));
        for (std::size_t i = 0; i < sys.size(); ++i)
            for (auto form : {ResidualForm::Collapsed, ResidualForm::RawDoubleSum})
                c.worst(worst, std::abs(residual_e(sys, sys.row_ids()[i], form) -
                                        oracle::residual(sys.a_values(), sys.a_bins(), sys.b_bins(), i,
                                                         form == ResidualForm::RawDoubleSum)));

        // Identity correspondence: every row in its own bin on both sides.
        std::vector<double> ia(n), ib(n), ea, eb;
        for (int i = 0; i < n; ++i) ia[i] = i + 0.25 * level(rng) / 7.0, ib[i] = 3.0 * i;
        for (int i = 0; i <= n; ++i) ea.push_back(i - 0.5), eb.push_back(3.0 * i - 1.5);
        const auto ident = test::ab_table(ia, ib);
        const auto id_sys = build_correspondence(ident, "a", "b", BinningSpec::explicit_edges(ea),
                                                 BinningSpec::explicit_edges(eb));
        const auto total = build_correspondence(table, "a", "b", BinningSpec::equal_width(1), BinningSpec::equal_width(1));
        for (const auto& id : id_sys.row_ids()) c.expect(residual_e(id_sys, id) == 0.0, "identity e_i != 0");
        for (const auto& id : total.row_ids()) c.expect(residual_e(total, id) == 0.0, "total e_i != 0");
    }
    c.expect(worst <= 1e-12, fmt::format("oracle gap {:.3g}", worst));
    return c.outcome(fmt::format("max |e_i - oracle| = {:.2g} over 200 tables; identity/total cases all zero", worst));
}

Outcome regression_equivalence() {
    Checker c;
    std::mt19937_64 rng(1004);
    double worst = 0, worst_id = 0;
    for (int t = 0; t < 100; ++t) {
        const auto cs = oracle::regression_case(rng, 1 + t % 5);
        c.worst(worst, std::abs(ancestral_regression(cs.spec) - cs.least_squares));

        auto id = cs.spec;
        double sum = 0;
        for (std::size_t i = 0; i < id.r_pp.size(); ++i) {
            for (std::size_t j = 0; j < id.r_pp.size(); ++j) id.r_pp[i][j] = i == j;
            sum += id.r_qp[i] * id.sigma_q / id.sigmas_p[i] * id.deviations_h[i];
        }
        c.worst(worst_id, std::abs(ancestral_regression(id) - sum));
    }
    c.expect(worst <= 1e-8, fmt::format("least-squares gap {:.3g}", worst));
    c.expect(worst_id <= 1e-12, fmt::format("identity gap {:.3g}", worst_id));
    return c.outcome(fmt::format("max |p_q - OLS| = {:.2g}, identity max gap = {:.2g} over 100 instances", worst, worst_id));
}

Outcome surface_recovery() {
    Checker c;
    std::mt19937_64 rng(1005);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    std::normal_distribution<double> noise(0.0, 0.3);
    double coef_err = 0, ortho = 0;
    for (int t = 0; t < 80; ++t) {
        const int d = t % 4;
        const auto truth = test::random_xy_poly(rng, unsigned(d));
        const int n = (d + 1) * (d + 2) / 2 + 3 + int(rng() % 8);
        std::vector<SampleRow> exact_rows, noisy_rows;
        for (int i = 0; i < n; ++i) {
            const double x = u(rng), y = u(rng), w = truth.evaluate(std::vector<double>{x, y});
            exact_rows.push_back(test::row("s" + std::to_string(i), x, y, {{"w", w}}));
            noisy_rows.push_back(test::row("s" + std::to_string(i), x, y, {{"w", w + noise(rng)}}));
        }
        const auto f = fit_surface(SampleTable({"w"}, exact_rows), "w", d);
        for (const auto& e : surface_monomials(d)) c.worst(coef_err, std::abs(f.poly.coefficient(e) - truth.coefficient(e)));
        const auto g = fit_surface(SampleTable({"w"}, noisy_rows), "w", d);
        for (const auto& e : surface_monomials(d)) {
            double dot = 0;
            for (const auto& r : noisy_rows)
                dot += (r.values.at("w") - evaluate(g, r.x, r.y)) * std::pow(r.x, e[0]) * std::pow(r.y, e[1]);
            c.worst(ortho, std::abs(dot));
        }
    }
    c.expect(coef_err <= 1e-8, fmt::format("coefficient error {:.3g}", coef_err));
    c.expect(ortho <= 1e-8, fmt::format("residual orthogonality {:.3g}", ortho));
    return c.outcome(fmt::format("max coefficient error = {:.2g}, max |<residual, monomial>| = {:.2g} (degree <= 3)",
                                 coef_err, ortho));
}

bool proportional(const MultiPoly& p, const MultiPoly& q) {
    const auto a = p.without_unused_variables(), b = q.without_unused_variables();
    if (a.variables().size() != b.variables().size() || a.term_count() != b.term_count() || a.is_zero()) return false;
    const auto pb = b.with_variables(merge_variables(a.variables(), b.variables()));
    const auto pa = a.with_variables(pb.variables());
    const double ratio = pa.terms().begin()->second / pb.coefficient(pa.terms().begin()->first);
    for (const auto& [e, c] : pa.terms())
        if (std::abs(c - ratio * pb.coefficient(e)) > 1e-12 * std::abs(c)) return false;
    return true;
}

Outcome elimination_fixture() {
    Checker c;
    std::vector<SampleRow> rows;
    int k = 0;
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; j <= 5; ++j) {
            const double x = i / 5.0, y = j / 5.0;
            rows.push_back(test::row("s" + std::to_string(++k), x, y, {{"c", x + y}, {"n", x - y}, {"p", 2 * x}, {"m", 3 * y}}));
        }
    const SampleTable t({"c", "n", "p", "m"}, rows);
    const std::array<FittedField, 4> fields{fit_surface(t, "c", 1), fit_surface(t, "n", 1), fit_surface(t, "p", 1),
                                            fit_surface(t, "m", 1)};
    double max_abs = INFINITY;
    try {
        const auto rel = derive_coupling(fields);
        max_abs = verify_coupling(rel, t).max_abs;
    } catch (const Error& e) {
        c.expect(false, std::string("derive_coupling threw: ") + e.what());
    }
    c.expect(max_abs <= 1e-8, fmt::format("verify_coupling max_abs {:.3g}", max_abs));

    const std::vector<std::string> v{"x", "c", "n"};
    auto var = [](const std::vector<std::string>& vs, const char* name) { return MultiPoly::variable(vs, name); };
    const auto r1 = sylvester_resultant(var(v, "x") + var(v, "c") - MultiPoly::constant(v, 1), var(v, "x") - var(v, "n"), "x");
    c.expect(proportional(r1, var({"c", "n"}, "c") + var({"c", "n"}, "n") - MultiPoly::constant({"c", "n"}, 1)),
             "Res_x(x+c-1, x-n) = " + r1.to_string());
    const std::vector<std::string> w{"x", "w", "t"};
    const auto r2 = sylvester_resultant(var(w, "x").pow(2) - var(w, "w"), var(w, "x") - var(w, "t"), "x");
    c.expect(proportional(r2, var({"w", "t"}, "t").pow(2) - var({"w", "t"}, "w")), "Res_x(x^2-w, x-t) = " + r2.to_string());
    return c.outcome(fmt::format("planar coupling max_abs = {:.2g}; Res_x(x+c-1,x-n) = {}; Res_x(x^2-w,x-t) = {}", max_abs,
                                 r1.to_string(), r2.to_string()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome neutralization_fixture() {
    Checker c;
    const auto snap = test::fixture_snapshot();
    const auto dir = fs::temp_directory_path() / ("spatcorr-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::string detail;
    try {
        for (const char* name : {"a.csv", "b.csv"})
            cli::run_synth({test::data_path("fixture.json"), (dir / name).string(), std::nullopt});
        const auto a = slurp(dir / "a.csv");
        c.expect(a == slurp(dir / "b.csv"), "synth CSV differs between runs");
        c.expect(cli::sha256_hex(a) == snap["csv_sha256"].get<std::string>(), "synth CSV digest differs from snapshot");

        const auto table = cli::ingest_csv((dir / "a.csv").string()).table;
        const auto rep = stratified_correlation(table, "c", "n", cli::parse_strata(snap["strata"]), CorrMethod::Spearman);
        const double expect[] = {snap["low_r"].get<double>(), snap["high_r"].get<double>()};
        double snap_err = std::abs(rep.pooled.r - snap["pooled_r"].get<double>());
        for (std::size_t i = 0; i < rep.per_stratum.size(); ++i) {
            const auto& s = rep.per_stratum[i];
            c.expect(s.result.r >= 0.8, fmt::format("{} r = {:.4f} < 0.8", s.stratum, s.result.r));
            c.expect(std::abs(s.result.r - rep.pooled.r) >= 0.05, fmt::format("{} gap below 0.05", s.stratum));
            snap_err = std::max(snap_err, std::abs(s.result.r - expect[i]));
        }
        c.expect(rep.per_stratum.size() == 2, "expected two strata");
        c.expect(snap_err <= 1e-12, fmt::format("snapshot drift {:.3g}", snap_err));
        detail = fmt::format("pooled r = {:.6f}, low r = {:.6f}, high r = {:.6f}, snapshot drift = {:.2g}", rep.pooled.r,
                             rep.per_stratum[0].result.r, rep.per_stratum[1].result.r, snap_err);
    } catch (const Error& e) {
        c.expect(false, e.what());
    }
    fs::remove_all(dir);
    return c.outcome(detail);
}

Outcome published_soil_table(const std::string& path) {
    if (!fs::exists(path)) return {Status::Skip, "no transcription at " + path + " (pass --soil-csv PATH to run)"};
    Checker c;
    std::string detail;
    try {
        const auto in = cli::ingest_csv(path);
        std::vector<SampleRow> rows = in.table.rows();
        for (auto& r : rows)
            if (std::abs(r.y - 27.0) < 0.5 && !r.stratum_override) r.stratum_override = "low";
        const SampleTable table(in.table.variables(), rows);
        const auto rep = stratified_correlation(table, "c", "n", cli::parse_strata("low=0:30,high=30:70"), CorrMethod::Spearman);
        const double target[] = {0.840, 0.955};
        c.expect(std::abs(rep.pooled.r - 0.895) <= 0.01, fmt::format("pooled r = {:.4f}", rep.pooled.r));
        c.expect(rep.pooled.p_value < 0.01, "pooled p >= 0.01");
        for (std::size_t i = 0; i < 2 && i < rep.per_stratum.size(); ++i) {
            const auto& s = rep.per_stratum[i].result;
            c.expect(std::abs(s.r - target[i]) <= 0.01, fmt::format("{} r = {:.4f}", rep.per_stratum[i].stratum, s.r));
            c.expect(s.p_value < 0.01, rep.per_stratum[i].stratum + " p >= 0.01");
        }
        detail = fmt::format("pooled r = {:.4f} (0.895), low r = {:.4f} (0.840), high r = {:.4f} (0.955), n = {}",
                             rep.pooled.r, rep.per_stratum[0].result.r, rep.per_stratum[1].result.r, rep.pooled.n);
    } catch (const Error& e) {
        c.expect(false, e.what());
    }
    return c.outcome(detail);
}

struct Criterion {
    int id;
    const char* title;
    double budget_s;  // 0: no runtime bound
    std::function<Outcome()> run;
};

const char* label(Status s) { return s == Status::Pass ? "PASS" : s == Status::Fail ? "FAIL" : "SKIP"; }

}  // namespace

int main(int argc, char** argv) {
    std::string soil_csv = test::data_path("cleveland_liptzin_2007.csv");
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--soil-csv" && i + 1 < argc) {
            soil_csv = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--soil-csv PATH]\n", argv[0]);
            return 2;
        }
    }

    const std::vector<Criterion> criteria{
        {1, "functional-correlation analytic cases", 1.0, functional_analytic},
        {2, "Cauchy-Schwarz sweep, exact vs Gauss-Legendre", 5.0, cauchy_schwarz_sweep},
        {3, "residual e_i vs brute-force oracle", 5.0, residual_oracle},
        {4, "ancestral regression vs standardized least squares", 1.0, regression_equivalence},
        {5, "surface-fit exact recovery and orthogonality", 1.0, surface_recovery},
        {6, "elimination planar fixture and hand resultants", 1.0, elimination_fixture},
        {7, "processes-neutralization fixture and snapshot", 1.0, neutralization_fixture},
        {8, "published soil C/N stratified coefficients (conditional)", 0.0, [&] { return published_soil_table(soil_csv); }},
    };

    using clock = std::chrono::steady_clock;
    const auto suite_start = clock::now();
    int failed = 0;
    for (const auto& cr : criteria) {
        const auto t0 = clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {Status::Fail, std::string("unexpected exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        if (o.status == Status::Pass && cr.budget_s > 0 && secs >= cr.budget_s) {
            o.status = Status::Fail;
            o.detail += fmt::format("; runtime {:.3f} s exceeds {:.0f} s", secs, cr.budget_s);
        }
        failed += o.status == Status::Fail;
        std::printf("[%s] criterion %d: %s (%.3f s) -- %s\n", label(o.status), cr.id, cr.title, secs, o.detail.c_str());
        std::fflush(stdout);
    }

    // Criterion 9 times the unit-test executables as well as the criteria above.
    std::string detail;
    bool units_ok = true;
    const std::vector<std::string> unit_tests{
#include "unit_tests.inc"
    };
    int ran = 0;
    for (const auto& exe : unit_tests) {
        const int rc = std::system(("\"" + exe + "\" --gtest_brief=1 > /dev/null 2>&1").c_str());
        units_ok &= rc == 0;
        ++ran;
    }
    detail = fmt::format("{} unit-test executables {}", ran, units_ok ? "passed" : "had failures");
    const double total = std::chrono::duration<double>(clock::now() - suite_start).count();
    const bool ok9 = units_ok && total < 60.0;
    failed += !ok9;
    std::printf("[%s] criterion 9: whole suite under 60 s on one core (%.3f s) -- %s\n", ok9 ? "PASS" : "FAIL", total,
                detail.c_str());
    return failed == 0 ? 0 : 1;
}
