#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spatcorr/data_model.hpp"

namespace spatcorr {

/// How a continuous variable is cut into bins. Rows sharing a bin on a
/// variable correspond to each other through that variable.
struct BinningSpec {
    enum class Mode { EqualWidth, ExplicitEdges };
    Mode mode = Mode::EqualWidth;
    int bin_count = 1;
    std::vector<double> edges;

    static BinningSpec equal_width(int count) { return {Mode::EqualWidth, count, {}}; }
    static BinningSpec explicit_edges(std::vector<double> e) {
        return {Mode::ExplicitEdges, 0, std::move(e)};
    }
};

/// Bin assignment of one series. Bins are [e_k, e_{k+1}); the last bin is closed.
struct Binning {
    std::vector<int> index;       // per value
    std::vector<double> centers;  // per bin
};

Binning assign_bins(std::span<const double> values, const BinningSpec& spec);

class CorrespondenceSystem {
public:
    CorrespondenceSystem(std::string var_a, std::string var_b, std::vector<std::string> row_ids,
                         std::vector<double> a_values, std::vector<double> b_values, Binning a_bins,
                         Binning b_bins);

    const std::string& var_a() const noexcept { return var_a_; }
    const std::string& var_b() const noexcept { return var_b_; }
    const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }
    std::size_t size() const noexcept { return row_ids_.size(); }

    const std::vector<double>& a_values() const noexcept { return a_values_; }
    const std::vector<double>& b_values() const noexcept { return b_values_; }
    const std::vector<int>& a_bins() const noexcept { return a_bins_.index; }
    const std::vector<int>& b_bins() const noexcept { return b_bins_.index; }
    const std::vector<double>& a_centers() const noexcept { return a_bins_.centers; }
    const std::vector<double>& b_centers() const noexcept { return b_bins_.centers; }

    /// Row indices per bin, ascending; only occupied bins are present.
    const std::map<int, std::vector<std::size_t>>& a_members() const noexcept { return a_members_; }
    const std::map<int, std::vector<std::size_t>>& b_members() const noexcept { return b_members_; }

    std::size_t row_index(const std::string& id) const;

private:
    std::string var_a_, var_b_;
    std::vector<std::string> row_ids_;
    std::vector<double> a_values_, b_values_;
    Binning a_bins_, b_bins_;
    std::map<int, std::vector<std::size_t>> a_members_, b_members_;
    std::map<std::string, std::size_t> index_;
};

CorrespondenceSystem build_correspondence(const SampleTable& table, const std::string& var_a,
                                          const std::string& var_b, const BinningSpec& bin_a,
                                          const BinningSpec& bin_b);

/// One step of a selection chain `{reducer | ... : V_[sel] : ... : V_anchor}`.
/// The rightmost step is the anchor and selects a row (`[i]`) or a bin; every
/// other step selects all corresponding points (`[n]`) or one bin `[j]` by
/// its bin label among the bins reachable from the current set.
struct ChainStep {
    enum class Kind { All, Bin, Row };
    std::string variable;
    Kind kind = Kind::All;
    int bin = 0;
    std::string row_id;
};

enum class ChainReducer { None, Mean };

using SelectionResult = std::variant<std::vector<std::string>, double>;

/// Evaluates the chain right to left. Returns the row-id set (ordered as in
/// the table) or, with ChainReducer::Mean, the mean of the leftmost step's
/// variable over that set.
SelectionResult select_chain(const CorrespondenceSystem& sys, std::span<const ChainStep> chain,
                             ChainReducer reducer);

struct ParsedChain {
    std::vector<ChainStep> steps;
    ChainReducer reducer = ChainReducer::None;
};

/// Parses "mean | c[n] : n[0] : c{row-7}" (braces hold an anchor row id,
/// `[n]` all points, `[k]` bin label k). The surrounding braces of the
/// set-builder form are optional.
ParsedChain parse_chain(std::string_view text);

enum class ResidualForm {
    Collapsed,  // one term per reachable b-bin
    RawDoubleSum,  // each b-bin term weighted by its member count
};

double residual_e(const CorrespondenceSystem& sys, const std::string& row_id,
                  ResidualForm form = ResidualForm::Collapsed);

struct ResidualReport {
    std::vector<std::pair<std::string, double>> per_point;  // table row order
    double total = 0.0;
};

ResidualReport total_residual(const CorrespondenceSystem& sys,
                              ResidualForm form = ResidualForm::Collapsed);

/// Dense univariate polynomial, coefficients in ascending powers.
struct Poly1D {
    std::vector<double> coeffs;
    double operator()(double t) const;
};

struct CorrespondenceFit {
    Poly1D g;
    double objective = 0.0;
    std::size_t terms = 0;  // number of (row, reachable b-bin) pairs
};

/// Objective sum_i sum_{j reachable from i} (g(center_j) - mean{A reachable from i})^2.
double correspondence_objective(const CorrespondenceSystem& sys, const Poly1D& g);

/// Fits g: B -> A minimizing the correspondence objective. Without `bin_a`
/// every row is its own A-bin.
CorrespondenceFit fit_by_correspondence(const SampleTable& table, const std::string& var_a,
                                        const std::string& var_b, const BinningSpec& bin_b,
                                        int degree,
                                        const std::optional<BinningSpec>& bin_a = std::nullopt);

CorrespondenceFit fit_by_correspondence(const CorrespondenceSystem& sys, int degree);

}  // namespace spatcorr
