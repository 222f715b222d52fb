#include "spatcorr/elimination.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "spatcorr/error.hpp"

namespace spatcorr {

namespace {

constexpr const char* kResWhere = "elimination/sylvester_resultant";
constexpr const char* kCoupleWhere = "elimination/derive_coupling";

std::vector<std::string> without(const std::vector<std::string>& vars, const std::string& name) {
    std::vector<std::string> out;
    for (const auto& v : vars)
        if (v != name) out.push_back(v);
    return out;
}

// Determinant by cofactor expansion along rows, memoized on the set of
// columns still available. Ring operations only, no division.
class SylvesterDeterminant {
public:
    SylvesterDeterminant(std::vector<std::vector<const MultiPoly*>> matrix, std::vector<std::string> vars)
        : m_(std::move(matrix)), vars_(std::move(vars)), n_(m_.size()) {}

    MultiPoly compute() { return minor((std::uint32_t{1} << n_) - 1); }

private:
    const MultiPoly& minor(std::uint32_t mask) {
        if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
        MultiPoly acc(vars_);
        if (mask == 0) {
            acc = MultiPoly::constant(vars_, 1.0);
        } else {
            const std::size_t row = n_ - static_cast<std::size_t>(std::popcount(mask));
            int parity = 0;
            for (std::size_t c = 0; c < n_; ++c) {
                const std::uint32_t bit = std::uint32_t{1} << c;
                if (!(mask & bit)) continue;
                const MultiPoly* entry = m_[row][c];
                if (entry && !entry->is_zero()) {
                    const MultiPoly& sub = minor(mask & ~bit);
                    if (!sub.is_zero()) {
                        MultiPoly term = *entry * sub;
                        if (parity % 2) acc -= term;
                        else acc += term;
                    }
                }
                ++parity;
            }
        }
        return memo_.emplace(mask, std::move(acc)).first->second;
    }

    std::vector<std::vector<const MultiPoly*>> m_;
    std::vector<std::string> vars_;
    std::size_t n_;
    std::unordered_map<std::uint32_t, MultiPoly> memo_;
};

}  // namespace

MultiPoly sylvester_resultant_raw(const MultiPoly& pA, const MultiPoly& pB, const std::string& var) {
    const auto merged = merge_variables(pA.variables(), pB.variables());
    if (std::find(merged.begin(), merged.end(), var) == merged.end())
        throw Error(ErrorKind::NothingToEliminate, kResWhere, "neither polynomial involves '" + var + "'");
    const auto a = pA.with_variables(merged);
    const auto b = pB.with_variables(merged);
    const unsigned m = a.degree_in(var);
    const unsigned n = b.degree_in(var);
    if (m == 0 || n == 0)
        throw Error(ErrorKind::NothingToEliminate, kResWhere,
                    "both polynomials need positive degree in '" + var + "'");
    if (m > kMaxEliminationDegree || n > kMaxEliminationDegree)
        throw Error(ErrorKind::InvalidArgument, kResWhere,
                    "degree in '" + var + "' exceeds the elimination cap of " +
                        std::to_string(kMaxEliminationDegree));

    const auto rest = without(merged, var);
    std::vector<MultiPoly> ca, cb;
    for (const auto& c : a.coefficients_in(var)) ca.push_back(c.with_variables(rest));
    for (const auto& c : b.coefficients_in(var)) cb.push_back(c.with_variables(rest));

    const std::size_t size = m + n;
    std::vector<std::vector<const MultiPoly*>> matrix(size, std::vector<const MultiPoly*>(size, nullptr));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k <= m; ++k) matrix[r][r + k] = &ca[m - k];
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t k = 0; k <= n; ++k) matrix[n + r][r + k] = &cb[n - k];
    return SylvesterDeterminant(std::move(matrix), rest).compute();
}

NormalizedPoly normalize_coefficients(const MultiPoly& raw, double rel_tol) {
    NormalizedPoly out;
    const double max_abs = raw.max_abs_coefficient();
    if (max_abs == 0.0) {
        out.poly = raw;
        return out;
    }
    const auto pruned = raw.pruned(rel_tol);
    const double sign = pruned.leading_term().second < 0.0 ? -1.0 : 1.0;
    out.scale = sign * max_abs;
    out.poly = pruned * (1.0 / out.scale);
    return out;
}

namespace {

bool numerically_zero(const MultiPoly& raw, const MultiPoly& a, const MultiPoly& b, const std::string& var) {
    if (raw.is_zero()) return true;
    const double bound = std::pow(a.sum_abs_coefficients(), b.degree_in(var)) *
                         std::pow(b.sum_abs_coefficients(), a.degree_in(var));
    return raw.max_abs_coefficient() < kResultantZeroTolerance * bound;
}

NormalizedPoly normalized_resultant(const MultiPoly& pA, const MultiPoly& pB, const std::string& var) {
    const auto raw = sylvester_resultant_raw(pA, pB, var);
    if (numerically_zero(raw, pA, pB, var))
        throw Error(ErrorKind::DegenerateElimination, kResWhere,
                    "resultant in '" + var + "' vanishes identically (common factor)");
    return normalize_coefficients(raw);
}

}  // namespace

MultiPoly sylvester_resultant(const MultiPoly& pA, const MultiPoly& pB, const std::string& var) {
    return normalized_resultant(pA, pB, var).poly;
}

namespace {

MultiPoly unused_dropped(const MultiPoly& p) { return p.without_unused_variables(); }

EliminationStep eliminate(const std::string& label, const std::string& name_a, const MultiPoly& a,
                          const std::string& name_b, const MultiPoly& b, const std::string& var) {
    EliminationStep step{label, name_a, name_b, var, "resultant", {}, 1.0};
    const bool has_a = a.degree_in(var) > 0;
    const bool has_b = b.degree_in(var) > 0;
    try {
        if (has_a && has_b) {
            auto r = normalized_resultant(a, b, var);
            step.result = unused_dropped(r.poly);
            step.scale = r.scale;
        } else if (has_a != has_b) {
            // One input is already free of `var`; it is the eliminated relation.
            step.kind = "pass-through";
            step.result = unused_dropped(has_a ? b : a);
        } else {
            step.kind = "sum-of-squares";
            step.eliminated.clear();
            auto r = normalize_coefficients(a * a + b * b);
            step.result = unused_dropped(r.poly);
            step.scale = r.scale;
        }
    } catch (const Error& e) {
        throw Error(e.kind(), kCoupleWhere, "step " + label + " (" + name_a + ", " + name_b + "): " + e.what());
    }
    return step;
}

bool involves(const MultiPoly& p, const std::string& var) { return p.degree_in(var) > 0; }

}  // namespace

CouplingRelation derive_coupling(const std::array<FittedField, 4>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto& f = fields[i];
        if (f.variable == "x" || f.variable == "y" || f.variable.empty())
            throw Error(ErrorKind::InvalidArgument, kCoupleWhere, "invalid field variable name '" + f.variable + "'");
        for (std::size_t j = 0; j < i; ++j) {
            if (!(fields[j].frame == f.frame))
                throw Error(ErrorKind::InvalidArgument, kCoupleWhere,
                            "fields '" + fields[j].variable + "' and '" + f.variable +
                                "' do not share one coordinate frame");
        }
    }
    std::array<MultiPoly, 4> implicit;
    for (std::size_t i = 0; i < 4; ++i) {
        implicit[i] = to_implicit_standardized(fields[i]).pruned(kResultantPruneTolerance);
        if (!involves(implicit[i], "x") && !involves(implicit[i], "y"))
            throw Error(ErrorKind::NothingToEliminate, kCoupleWhere,
                        "field '" + fields[i].variable + "' does not depend on the coordinates");
    }
    const auto name = [&](std::size_t i) { return "F_" + fields[i].variable; };

    CouplingRelation rel;
    auto& prov = rel.provenance;
    prov.push_back(eliminate("g1", name(0), implicit[0], name(1), implicit[1], "x"));
    prov.push_back(eliminate("g2", name(0), implicit[0], name(2), implicit[2], "x"));
    prov.push_back(eliminate("h1", "g1", prov[0].result, "g2", prov[1].result, "y"));
    prov.push_back(eliminate("g3", name(1), implicit[1], name(2), implicit[2], "x"));
    prov.push_back(eliminate("g4", name(1), implicit[1], name(3), implicit[3], "x"));
    prov.push_back(eliminate("h2", "g3", prov[3].result, "g4", prov[4].result, "y"));

    const auto& h1 = prov[2].result;
    const auto& h2 = prov[5].result;
    std::string shared;
    for (const char* coord : {"x", "y"})
        if (involves(h1, coord) && involves(h2, coord)) shared = coord;
    EliminationStep final_step;
    if (!shared.empty()) {
        final_step = eliminate("final", "h1", h1, "h2", h2, shared);
    } else {
        // Both relations must hold at once: h1^2 + h2^2 vanishes exactly on
        // their common zero set.
        auto r = normalize_coefficients(h1 * h1 + h2 * h2);
        final_step = {"final", "h1", "h2", "", "sum-of-squares", unused_dropped(r.poly), r.scale};
    }
    prov.push_back(final_step);

    rel.poly = prov.back().result;
    rel.scale = prov.back().scale;
    for (const char* coord : {"x", "y"})
        if (involves(rel.poly, coord))
            throw Error(ErrorKind::IncompleteElimination, kCoupleWhere,
                        std::string("final relation still involves coordinate '") + coord + "'");
    if (rel.poly.is_zero())
        throw Error(ErrorKind::DegenerateElimination, kCoupleWhere, "final relation is identically zero");
    return rel;
}

CouplingCheck verify_coupling(const CouplingRelation& rel, const SampleTable& table) {
    CouplingCheck check;
    for (const auto& v : rel.poly.variables())
        if (!table.has_variable(v))
            throw Error(ErrorKind::Shape, "elimination/verify_coupling", "table lacks variable '" + v + "'");
    if (table.empty()) {
        check.warnings.push_back("verify_coupling: table has no rows; nothing evaluated");
        return check;
    }
    double sq = 0.0;
    std::vector<double> pt(rel.poly.variables().size());
    for (const auto& row : table.rows()) {
        for (std::size_t k = 0; k < pt.size(); ++k) pt[k] = row.values.at(rel.poly.variables()[k]);
        const double v = rel.poly.evaluate(pt);
        check.max_abs = std::max(check.max_abs, std::abs(v));
        sq += v * v;
    }
    check.n = table.size();
    check.rms = std::sqrt(sq / static_cast<double>(table.size()));
    return check;
}

}  // namespace spatcorr
