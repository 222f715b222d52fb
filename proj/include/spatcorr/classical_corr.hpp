#pragma once

#include <span>
#include <string>
#include <vector>

#include "spatcorr/data_model.hpp"

namespace spatcorr {

enum class CorrMethod { Pearson, Spearman };

std::string_view to_string(CorrMethod m);
CorrMethod parse_corr_method(std::string_view text);

struct CorrelationResult {
    double r = 0.0;
    std::size_t n = 0;
    double p_value = 1.0;  // two-sided, Student-t with n-2 degrees of freedom
    CorrMethod method = CorrMethod::Pearson;
};

CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys);
CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys);
CorrelationResult correlate(std::span<const double> xs, std::span<const double> ys, CorrMethod method);

/// Average (mid-) ranks, 1-based. Ties share the mean of the positions they occupy.
std::vector<double> average_ranks(std::span<const double> values);

/// Two-sided p-value of t = r*sqrt((n-2)/(1-r^2)) against Student-t(n-2).
double correlation_p_value(double r, std::size_t n);

struct NamedCorrelation {
    std::string stratum;
    CorrelationResult result;
};

struct StratifiedReport {
    std::vector<NamedCorrelation> per_stratum;  // band order
    CorrelationResult pooled;
    /// min over strata of |r_stratum - r_pooled|
    double neutralization_gap = 0.0;
};

StratifiedReport stratified_correlation(const SampleTable& table, const std::string& var_a,
                                        const std::string& var_b, const Stratification& strat,
                                        CorrMethod method);

struct RegressionSpec {
    double sigma_q = 1.0;
    std::vector<double> sigmas_p;
    std::vector<double> deviations_h;
    std::vector<double> r_qp;
    std::vector<std::vector<double>> r_pp;  // symmetric, unit diagonal
};

/// Reciprocal condition below this rejects the predictor correlation matrix.
inline constexpr double kRegressionMinRcond = 1e-10;

/// Most probable deviation of the target given predictor deviations:
/// p_q = sum_i J_i (sigma_q / sigma_p_i) h_i with r_pp * J = r_qp.
double ancestral_regression(const RegressionSpec& spec);

/// The weights J solving the standardized normal equations.
std::vector<double> ancestral_weights(const RegressionSpec& spec);

}  // namespace spatcorr
