#include "spatcorr/classical_corr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "spatcorr/error.hpp"

namespace spatcorr {

std::string_view to_string(CorrMethod m) {
    return m == CorrMethod::Pearson ? "pearson" : "spearman";
}

CorrMethod parse_corr_method(std::string_view text) {
    if (text == "pearson") return CorrMethod::Pearson;
    if (text == "spearman") return CorrMethod::Spearman;
    throw Error(ErrorKind::InvalidArgument, "classical-corr/method",
                "unknown correlation method '" + std::string(text) + "'");
}

double correlation_p_value(double r, std::size_t n) {
    if (n < 3) return 1.0;
    const double df = static_cast<double>(n - 2);
    const double one_minus = 1.0 - r * r;
    if (one_minus <= 0.0) return 0.0;
    const double t = std::abs(r) * std::sqrt(df / one_minus);
    boost::math::students_t dist(df);
    return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, t)), 0.0, 1.0);
}

namespace {

void check_pair(std::span<const double> xs, std::span<const double> ys, const char* where) {
    if (xs.size() != ys.size())
        throw Error(ErrorKind::Shape, where,
                    "series lengths differ (" + std::to_string(xs.size()) + " vs " +
                        std::to_string(ys.size()) + ")");
    if (xs.size() < 3)
        throw Error(ErrorKind::Shape, where, "at least 3 pairs required");
}

double product_moment(std::span<const double> xs, std::span<const double> ys, const char* where) {
    const auto n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw Error(ErrorKind::DegenerateInput, where, "series has zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys) {
    constexpr const char* where = "classical-corr/pearson";
    check_pair(xs, ys, where);
    CorrelationResult out;
    out.r = product_moment(xs, ys, where);
    out.n = xs.size();
    out.p_value = correlation_p_value(out.r, out.n);
    out.method = CorrMethod::Pearson;
    return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share rank mean of (i+1 .. j+1)
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys) {
    constexpr const char* where = "classical-corr/spearman";
    check_pair(xs, ys, where);
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    CorrelationResult out;
    out.r = product_moment(rx, ry, where);
    out.n = xs.size();
    out.p_value = correlation_p_value(out.r, out.n);
    out.method = CorrMethod::Spearman;
    return out;
}

CorrelationResult correlate(std::span<const double> xs, std::span<const double> ys, CorrMethod method) {
    return method == CorrMethod::Pearson ? pearson(xs, ys) : spearman(xs, ys);
}

StratifiedReport stratified_correlation(const SampleTable& table, const std::string& var_a,
                                        const std::string& var_b, const Stratification& strat,
                                        CorrMethod method) {
    constexpr const char* where = "classical-corr/stratified_correlation";
    if (table.empty()) throw Error(ErrorKind::EmptyInput, where, "table has no rows");
    for (const auto* v : {&var_a, &var_b})
        if (!table.has_variable(*v))
            throw Error(ErrorKind::Shape, where, "unknown variable '" + *v + "'");

    StratifiedReport report;
    for (const auto& s : stratify(table, strat)) {
        if (s.table.size() < 3)
            throw Error(ErrorKind::StratumTooSmall, where,
                        "stratum '" + s.name + "' has " + std::to_string(s.table.size()) +
                            " rows (need at least 3)");
        report.per_stratum.push_back(
            {s.name, correlate(s.table.column(var_a), s.table.column(var_b), method)});
    }
    report.pooled = correlate(table.column(var_a), table.column(var_b), method);
    report.neutralization_gap = std::numeric_limits<double>::infinity();
    for (const auto& s : report.per_stratum)
        report.neutralization_gap =
            std::min(report.neutralization_gap, std::abs(s.result.r - report.pooled.r));
    return report;
}

namespace {

void validate(const RegressionSpec& spec) {
    constexpr const char* where = "classical-corr/ancestral_regression";
    const std::size_t n = spec.r_qp.size();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, where, "no predictors");
    if (spec.sigmas_p.size() != n || spec.deviations_h.size() != n || spec.r_pp.size() != n)
        throw Error(ErrorKind::Shape, where, "predictor lists differ in length");
    if (!(spec.sigma_q > 0.0)) throw Error(ErrorKind::InvalidArgument, where, "sigma_q must be > 0");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(spec.sigmas_p[i] > 0.0))
            throw Error(ErrorKind::InvalidArgument, where, "predictor sigmas must be > 0");
        if (std::abs(spec.r_qp[i]) > 1.0)
            throw Error(ErrorKind::InvalidArgument, where, "r_qp entries must lie in [-1,1]");
        if (spec.r_pp[i].size() != n) throw Error(ErrorKind::Shape, where, "r_pp is not square");
        if (std::abs(spec.r_pp[i][i] - 1.0) > 1e-12)
            throw Error(ErrorKind::InvalidArgument, where, "r_pp needs a unit diagonal");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(spec.r_pp[i][j] - spec.r_pp[j][i]) > 1e-12)
                throw Error(ErrorKind::InvalidArgument, where, "r_pp is not symmetric");
    }
}

}  // namespace

std::vector<double> ancestral_weights(const RegressionSpec& spec) {
    validate(spec);
    const auto n = static_cast<Eigen::Index>(spec.r_qp.size());
    Eigen::MatrixXd rpp(n, n);
    Eigen::VectorXd rqp(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rqp(i) = spec.r_qp[i];
        for (Eigen::Index j = 0; j < n; ++j) rpp(i, j) = spec.r_pp[i][j];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rpp, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double rcond = sv(0) > 0.0 ? sv(n - 1) / sv(0) : 0.0;
    if (!(rcond >= kRegressionMinRcond))
        throw Error(ErrorKind::DegeneratePredictors, "classical-corr/ancestral_regression",
                    "predictor correlation matrix is singular or ill-conditioned (rcond " +
                        std::to_string(rcond) + ")");
    const Eigen::VectorXd j = svd.solve(rqp);
    return {j.data(), j.data() + j.size()};
}

double ancestral_regression(const RegressionSpec& spec) {
    const auto j = ancestral_weights(spec);
    double pq = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i)
        pq += j[i] * (spec.sigma_q / spec.sigmas_p[i]) * spec.deviations_h[i];
    return pq;
}

}  // namespace spatcorr
