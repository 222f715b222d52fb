#include "spatcorr/correspondence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "spatcorr/error.hpp"

namespace spatcorr {

Binning assign_bins(std::span<const double> values, const BinningSpec& spec) {
    constexpr const char* where = "correspondence/build_correspondence";
    Binning out;
    out.index.reserve(values.size());
    if (spec.mode == BinningSpec::Mode::EqualWidth) {
        if (spec.bin_count < 1)
            throw Error(ErrorKind::InvalidArgument, where, "bin_count must be >= 1");
        if (values.empty()) return out;
        const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
        const double lo = *lo_it, hi = *hi_it;
        const double width = (hi - lo) / spec.bin_count;
        for (int k = 0; k < spec.bin_count; ++k) out.centers.push_back(lo + (k + 0.5) * width);
        for (double v : values) {
            int k = width > 0.0 ? static_cast<int>(std::floor((v - lo) / width)) : 0;
            out.index.push_back(std::clamp(k, 0, spec.bin_count - 1));
        }
        return out;
    }
    const auto& e = spec.edges;
    if (e.size() < 2) throw Error(ErrorKind::InvalidArgument, where, "explicit binning needs >= 2 edges");
    for (std::size_t k = 1; k < e.size(); ++k)
        if (!(e[k] > e[k - 1]))
            throw Error(ErrorKind::InvalidArgument, where, "edges must be strictly increasing");
    for (std::size_t k = 0; k + 1 < e.size(); ++k) out.centers.push_back(0.5 * (e[k] + e[k + 1]));
    for (double v : values) {
        if (!(v >= e.front() && v <= e.back()))
            throw Error(ErrorKind::OutOfRange, where,
                        "value " + std::to_string(v) + " lies outside the bin edges");
        auto it = std::upper_bound(e.begin(), e.end(), v);
        auto k = static_cast<int>(it - e.begin()) - 1;
        out.index.push_back(std::min(k, static_cast<int>(e.size()) - 2));
    }
    return out;
}

CorrespondenceSystem::CorrespondenceSystem(std::string var_a, std::string var_b,
                                           std::vector<std::string> row_ids,
                                           std::vector<double> a_values,
                                           std::vector<double> b_values, Binning a_bins,
                                           Binning b_bins)
    : var_a_(std::move(var_a)),
      var_b_(std::move(var_b)),
      row_ids_(std::move(row_ids)),
      a_values_(std::move(a_values)),
      b_values_(std::move(b_values)),
      a_bins_(std::move(a_bins)),
      b_bins_(std::move(b_bins)) {
    const auto n = row_ids_.size();
    if (a_values_.size() != n || b_values_.size() != n || a_bins_.index.size() != n ||
        b_bins_.index.size() != n)
        throw Error(ErrorKind::Shape, "correspondence/CorrespondenceSystem", "per-row arrays differ in length");
    for (std::size_t r = 0; r < n; ++r) {
        if (!index_.emplace(row_ids_[r], r).second)
            throw Error(ErrorKind::Format, "correspondence/CorrespondenceSystem",
                        "duplicate row id '" + row_ids_[r] + "'");
        a_members_[a_bins_.index[r]].push_back(r);
        b_members_[b_bins_.index[r]].push_back(r);
    }
}

std::size_t CorrespondenceSystem::row_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw Error(ErrorKind::InvalidArgument, "correspondence/row", "unknown row id '" + id + "'");
    return it->second;
}

CorrespondenceSystem build_correspondence(const SampleTable& table, const std::string& var_a,
                                          const std::string& var_b, const BinningSpec& bin_a,
                                          const BinningSpec& bin_b) {
    constexpr const char* where = "correspondence/build_correspondence";
    for (const auto* v : {&var_a, &var_b})
        if (!table.has_variable(*v))
            throw Error(ErrorKind::Shape, where, "unknown variable '" + *v + "'");
    std::vector<std::string> ids;
    for (const auto& row : table.rows()) ids.push_back(row.id);
    auto a = table.column(var_a);
    auto b = table.column(var_b);
    auto ab = assign_bins(a, bin_a);
    auto bb = assign_bins(b, bin_b);
    return {var_a, var_b, std::move(ids), std::move(a), std::move(b), std::move(ab), std::move(bb)};
}

namespace {

constexpr const char* kChainWhere = "correspondence/select_chain";

bool is_a(const CorrespondenceSystem& sys, const std::string& var) {
    if (var == sys.var_a()) return true;
    if (var == sys.var_b()) return false;
    throw Error(ErrorKind::InvalidArgument, kChainWhere,
                "variable '" + var + "' is not part of the correspondence system");
}

const std::vector<int>& bins_of(const CorrespondenceSystem& sys, bool a) {
    return a ? sys.a_bins() : sys.b_bins();
}

const std::map<int, std::vector<std::size_t>>& members_of(const CorrespondenceSystem& sys, bool a) {
    return a ? sys.a_members() : sys.b_members();
}

// All rows sharing a bin on the linking variable with some row of `set`.
std::vector<bool> expand(const CorrespondenceSystem& sys, const std::vector<bool>& set, bool via_a) {
    const auto& bins = bins_of(sys, via_a);
    const auto& members = members_of(sys, via_a);
    std::set<int> touched;
    for (std::size_t r = 0; r < set.size(); ++r)
        if (set[r]) touched.insert(bins[r]);
    std::vector<bool> out(set.size(), false);
    for (int k : touched)
        for (auto r : members.at(k)) out[r] = true;
    return out;
}

bool any(const std::vector<bool>& s) { return std::find(s.begin(), s.end(), true) != s.end(); }

// Row membership mask after evaluating the chain; `leftmost_a` reports the
// variable of the final step.
std::vector<bool> evaluate_chain(const CorrespondenceSystem& sys, std::span<const ChainStep> chain,
                                 bool& leftmost_a) {
    if (chain.empty()) throw Error(ErrorKind::InvalidArgument, kChainWhere, "chain is empty");
    const auto n = sys.size();
    const auto& anchor = chain.back();
    bool current_a = is_a(sys, anchor.variable);
    std::vector<bool> set(n, false);
    switch (anchor.kind) {
        case ChainStep::Kind::Row: set[sys.row_index(anchor.row_id)] = true; break;
        case ChainStep::Kind::Bin: {
            const auto& members = members_of(sys, current_a);
            auto it = members.find(anchor.bin);
            if (it != members.end())
                for (auto r : it->second) set[r] = true;
            break;
        }
        case ChainStep::Kind::All: std::fill(set.begin(), set.end(), true); break;
    }
    if (!any(set))
        throw Error(ErrorKind::EmptySelection, kChainWhere,
                    "anchor '" + anchor.variable + "' selects no points");

    for (std::size_t s = chain.size() - 1; s-- > 0;) {
        const auto& step = chain[s];
        const bool step_a = is_a(sys, step.variable);
        if (step.kind == ChainStep::Kind::Row)
            throw Error(ErrorKind::InvalidArgument, kChainWhere, "a row selector may only anchor the chain");
        set = expand(sys, set, current_a);
        if (step.kind == ChainStep::Kind::Bin) {
            const auto& bins = bins_of(sys, step_a);
            for (std::size_t r = 0; r < n; ++r)
                if (set[r] && bins[r] != step.bin) set[r] = false;
        }
        if (!any(set))
            throw Error(ErrorKind::EmptySelection, kChainWhere,
                        "step " + std::to_string(s) + " on '" + step.variable + "' selects no points");
        current_a = step_a;
    }
    leftmost_a = current_a;
    return set;
}

}  // namespace

SelectionResult select_chain(const CorrespondenceSystem& sys, std::span<const ChainStep> chain,
                             ChainReducer reducer) {
    bool leftmost_a = true;
    const auto set = evaluate_chain(sys, chain, leftmost_a);
    if (reducer == ChainReducer::Mean) {
        const auto& vals = leftmost_a ? sys.a_values() : sys.b_values();
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < set.size(); ++r)
            if (set[r]) {
                sum += vals[r];
                ++count;
            }
        return sum / static_cast<double>(count);
    }
    std::vector<std::string> ids;
    for (std::size_t r = 0; r < set.size(); ++r)
        if (set[r]) ids.push_back(sys.row_ids()[r]);
    return ids;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

ChainStep parse_step(std::string_view text) {
    constexpr const char* where = "correspondence/parse_chain";
    text = trim(text);
    ChainStep step;
    const auto open = text.find_first_of("[{");
    if (open == std::string_view::npos || open == 0 || text.size() < open + 3)
        throw Error(ErrorKind::Format, where, "malformed step '" + std::string(text) + "'");
    step.variable = std::string(trim(text.substr(0, open)));
    const char close = text[open] == '[' ? ']' : '}';
    if (text.back() != close)
        throw Error(ErrorKind::Format, where, "unterminated selector in '" + std::string(text) + "'");
    const auto inner = trim(text.substr(open + 1, text.size() - open - 2));
    if (close == '}') {
        step.kind = ChainStep::Kind::Row;
        step.row_id = std::string(inner);
    } else if (inner == "n") {
        step.kind = ChainStep::Kind::All;
    } else {
        step.kind = ChainStep::Kind::Bin;
        auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), step.bin);
        if (ec != std::errc{} || ptr != inner.data() + inner.size())
            throw Error(ErrorKind::Format, where, "bad bin selector '" + std::string(inner) + "'");
    }
    return step;
}

}  // namespace

ParsedChain parse_chain(std::string_view text) {
    text = trim(text);
    if (text.size() >= 2 && text.front() == '{' && text.back() == '}')
        text = trim(text.substr(1, text.size() - 2));
    ParsedChain out;
    if (auto bar = text.find('|'); bar != std::string_view::npos) {
        const auto red = trim(text.substr(0, bar));
        if (red == "mean") out.reducer = ChainReducer::Mean;
        else if (red.empty() || red == "none") out.reducer = ChainReducer::None;
        else
            throw Error(ErrorKind::Format, "correspondence/parse_chain",
                        "unknown reducer '" + std::string(red) + "'");
        text = text.substr(bar + 1);
    }
    std::size_t start = 0;
    while (true) {
        auto colon = text.find(':', start);
        out.steps.push_back(parse_step(text.substr(start, colon - start)));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    return out;
}

namespace {

struct Reach {
    std::vector<int> b_bins;           // reachable b-bins, ascending
    std::vector<double> bin_means;     // mean A over each reachable b-bin
    std::vector<std::size_t> bin_size; // A-members per reachable b-bin
    double outer_mean = 0.0;           // mean A over every reachable row
};

Reach reach_from(const CorrespondenceSystem& sys, std::size_t row) {
    const auto& id = sys.row_ids()[row];
    const auto& a = sys.var_a();
    const auto& b = sys.var_b();
    Reach out;

    const ChainStep anchor{a, ChainStep::Kind::Row, 0, id};
    const std::vector<ChainStep> to_b{{b, ChainStep::Kind::All, 0, {}}, anchor};
    bool leftmost_a = false;
    const auto b_points = evaluate_chain(sys, to_b, leftmost_a);
    std::set<int> bins;
    for (std::size_t r = 0; r < b_points.size(); ++r)
        if (b_points[r]) bins.insert(sys.b_bins()[r]);
    out.b_bins.assign(bins.begin(), bins.end());

    const std::vector<ChainStep> outer{{a, ChainStep::Kind::All, 0, {}}, {b, ChainStep::Kind::All, 0, {}}, anchor};
    out.outer_mean = std::get<double>(select_chain(sys, outer, ChainReducer::Mean));
    for (int j : out.b_bins) {
        const std::vector<ChainStep> inner{{a, ChainStep::Kind::All, 0, {}}, {b, ChainStep::Kind::Bin, j, {}}, anchor};
        out.bin_means.push_back(std::get<double>(select_chain(sys, inner, ChainReducer::Mean)));
        out.bin_size.push_back(sys.b_members().at(j).size());
    }
    return out;
}

double residual_at(const CorrespondenceSystem& sys, std::size_t row, ResidualForm form) {
    const auto reach = reach_from(sys, row);
    double e = 0.0;
    for (std::size_t k = 0; k < reach.b_bins.size(); ++k) {
        const double d = reach.bin_means[k] - reach.outer_mean;
        const double w = form == ResidualForm::RawDoubleSum ? static_cast<double>(reach.bin_size[k]) : 1.0;
        e += w * d * d;
    }
    return e;
}

}  // namespace

double residual_e(const CorrespondenceSystem& sys, const std::string& row_id, ResidualForm form) {
    return residual_at(sys, sys.row_index(row_id), form);
}

ResidualReport total_residual(const CorrespondenceSystem& sys, ResidualForm form) {
    ResidualReport report;
    for (std::size_t r = 0; r < sys.size(); ++r) {
        const double e = residual_at(sys, r, form);
        report.per_point.emplace_back(sys.row_ids()[r], e);
        report.total += e;
    }
    return report;
}

double Poly1D::operator()(double t) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
}

namespace {

struct Term {
    double center;
    double target;
};

std::vector<Term> objective_terms(const CorrespondenceSystem& sys) {
    std::vector<Term> terms;
    for (std::size_t r = 0; r < sys.size(); ++r) {
        const auto reach = reach_from(sys, r);
        for (int j : reach.b_bins)
            terms.push_back({sys.b_centers().at(static_cast<std::size_t>(j)), reach.outer_mean});
    }
    return terms;
}

}  // namespace

double correspondence_objective(const CorrespondenceSystem& sys, const Poly1D& g) {
    double total = 0.0;
    for (const auto& t : objective_terms(sys)) {
        const double d = g(t.center) - t.target;
        total += d * d;
    }
    return total;
}

CorrespondenceFit fit_by_correspondence(const CorrespondenceSystem& sys, int degree) {
    constexpr const char* where = "correspondence/fit_by_correspondence";
    if (degree < 0) throw Error(ErrorKind::InvalidArgument, where, "degree must be >= 0");
    const auto terms = objective_terms(sys);
    std::set<double> distinct;
    for (const auto& t : terms) distinct.insert(t.center);
    if (distinct.size() <= static_cast<std::size_t>(degree))
        throw Error(ErrorKind::DegenerateFit, where,
                    std::to_string(distinct.size()) + " distinct b-bins cannot determine a degree-" +
                        std::to_string(degree) + " polynomial");

    const auto rows = static_cast<Eigen::Index>(terms.size());
    const auto cols = static_cast<Eigen::Index>(degree + 1);
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        double p = 1.0;
        for (Eigen::Index k = 0; k < cols; ++k, p *= terms[i].center) design(i, k) = p;
        rhs(i) = terms[i].target;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < cols) throw Error(ErrorKind::DegenerateFit, where, "rank-deficient design");
    const Eigen::VectorXd c = qr.solve(rhs);

    CorrespondenceFit fit;
    fit.g.coeffs.assign(c.data(), c.data() + c.size());
    fit.terms = terms.size();
    for (const auto& t : terms) {
        const double d = fit.g(t.center) - t.target;
        fit.objective += d * d;
    }
    return fit;
}

CorrespondenceFit fit_by_correspondence(const SampleTable& table, const std::string& var_a,
                                        const std::string& var_b, const BinningSpec& bin_b,
                                        int degree, const std::optional<BinningSpec>& bin_a) {
    if (bin_a) return fit_by_correspondence(build_correspondence(table, var_a, var_b, *bin_a, bin_b), degree);

    for (const auto* v : {&var_a, &var_b})
        if (!table.has_variable(*v))
            throw Error(ErrorKind::Shape, "correspondence/fit_by_correspondence",
                        "unknown variable '" + *v + "'");
    std::vector<std::string> ids;
    for (const auto& row : table.rows()) ids.push_back(row.id);
    auto a = table.column(var_a);
    auto b = table.column(var_b);
    Binning identity;
    for (std::size_t r = 0; r < a.size(); ++r) identity.index.push_back(static_cast<int>(r));
    identity.centers = a;
    auto bb = assign_bins(b, bin_b);
    CorrespondenceSystem sys(var_a, var_b, std::move(ids), std::move(a), std::move(b),
                             std::move(identity), std::move(bb));
    return fit_by_correspondence(sys, degree);
}

}  // namespace spatcorr
