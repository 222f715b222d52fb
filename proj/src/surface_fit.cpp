#include "spatcorr/surface_fit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "spatcorr/error.hpp"

namespace spatcorr {

namespace {

constexpr const char* kFitWhere = "surface-fit/fit_surface";
const std::vector<std::string> kXY{"x", "y"};

}  // namespace

void RectDomain::validate() const {
    if (!(std::isfinite(x_lo) && std::isfinite(x_hi) && std::isfinite(y_lo) && std::isfinite(y_hi) &&
          x_lo < x_hi && y_lo < y_hi))
        throw Error(ErrorKind::InvalidArgument, "surface-fit/RectDomain",
                    "domain needs x_lo < x_hi and y_lo < y_hi");
}

std::optional<RectDomain> RectDomain::intersect(const RectDomain& other) const {
    RectDomain d{std::max(x_lo, other.x_lo), std::min(x_hi, other.x_hi), std::max(y_lo, other.y_lo),
                 std::min(y_hi, other.y_hi)};
    if (!(d.x_lo < d.x_hi && d.y_lo < d.y_hi)) return std::nullopt;
    return d;
}

CoordFrame CoordFrame::of(const RectDomain& d) {
    return {0.5 * (d.x_lo + d.x_hi), 0.5 * (d.x_hi - d.x_lo), 0.5 * (d.y_lo + d.y_hi),
            0.5 * (d.y_hi - d.y_lo)};
}

std::string_view to_string(FitObjective o) { return o == FitObjective::Ols ? "ols" : "correspondence"; }

FitObjective parse_fit_objective(std::string_view text) {
    if (text == "ols") return FitObjective::Ols;
    if (text == "correspondence") return FitObjective::Correspondence;
    throw Error(ErrorKind::InvalidArgument, kFitWhere, "unknown objective '" + std::string(text) + "'");
}

namespace {

// Standardized-frame polynomial -> reporting coordinates.
MultiPoly to_reporting(const MultiPoly& std_poly, const CoordFrame& f) {
    MultiPoly u(kXY), v(kXY);
    u.add_term({1, 0}, 1.0 / f.hx);
    u.add_term({0, 0}, -f.cx / f.hx);
    v.add_term({0, 1}, 1.0 / f.hy);
    v.add_term({0, 0}, -f.cy / f.hy);
    return std_poly.with_variables(kXY).compose({u, v});
}

MultiPoly to_standard(const MultiPoly& poly, const CoordFrame& f) {
    MultiPoly x(kXY), y(kXY);
    x.add_term({1, 0}, f.hx);
    x.add_term({0, 0}, f.cx);
    y.add_term({0, 1}, f.hy);
    y.add_term({0, 0}, f.cy);
    return poly.with_variables(kXY).compose({x, y});
}

void check_variable_name(const std::string& v, const char* where) {
    if (v == "x" || v == "y")
        throw Error(ErrorKind::InvalidArgument, where, "a fitted variable cannot be named x or y");
}

}  // namespace

FittedField FittedField::from_poly(const MultiPoly& poly, std::string variable, const RectDomain& domain) {
    domain.validate();
    check_variable_name(variable, "surface-fit/from_poly");
    FittedField f;
    f.poly = poly.with_variables(kXY);
    f.variable = std::move(variable);
    f.domain = domain;
    f.frame = CoordFrame::of(domain);
    f.std_poly = to_standard(f.poly, f.frame);
    f.diagnostics.degree = static_cast<int>(f.poly.total_degree());
    return f;
}

std::vector<Exponents> surface_monomials(int degree) {
    std::vector<Exponents> out;
    for (int d = 0; d <= degree; ++d)
        for (int i = d; i >= 0; --i) out.push_back({static_cast<unsigned>(i), static_cast<unsigned>(d - i)});
    return out;
}

RectDomain bounding_domain(const SampleTable& table) {
    if (table.empty()) throw Error(ErrorKind::EmptyInput, kFitWhere, "table has no rows");
    const auto xs = table.xs();
    const auto ys = table.ys();
    auto [xl, xh] = std::minmax_element(xs.begin(), xs.end());
    auto [yl, yh] = std::minmax_element(ys.begin(), ys.end());
    RectDomain d{*xl, *xh, *yl, *yh};
    // A zero-width extent gets unit padding so the frame stays invertible.
    if (!(d.x_lo < d.x_hi)) {
        d.x_lo -= 0.5;
        d.x_hi += 0.5;
    }
    if (!(d.y_lo < d.y_hi)) {
        d.y_lo -= 0.5;
        d.y_hi += 0.5;
    }
    return d;
}

FittedField fit_surface(const SampleTable& table, const std::string& variable, const FitOptions& options) {
    if (options.degree < 0 || options.degree > kMaxSurfaceDegree)
        throw Error(ErrorKind::InvalidArgument, kFitWhere,
                    "degree must lie in [0, " + std::to_string(kMaxSurfaceDegree) + "]");
    check_variable_name(variable, kFitWhere);
    if (!table.has_variable(variable))
        throw Error(ErrorKind::Shape, kFitWhere, "unknown variable '" + variable + "'");
    if (table.empty()) throw Error(ErrorKind::EmptyInput, kFitWhere, "table has no rows");

    const auto monos = surface_monomials(options.degree);
    const auto cols = static_cast<Eigen::Index>(monos.size());
    if (table.size() < monos.size())
        throw Error(ErrorKind::Underdetermined, kFitWhere,
                    std::to_string(table.size()) + " rows cannot determine " + std::to_string(monos.size()) +
                        " coefficients");

    const RectDomain domain = options.domain.value_or(bounding_domain(table));
    domain.validate();
    for (const auto& row : table.rows())
        if (!domain.contains(row.x, row.y))
            throw Error(ErrorKind::InvalidArgument, kFitWhere, "row '" + row.id + "' lies outside the domain");
    const CoordFrame frame = CoordFrame::of(domain);

    const auto xs = table.xs();
    const auto ys = table.ys();
    const auto ws = table.column(variable);

    // Fitting targets at standardized locations, with least-squares weights.
    struct Target {
        double u, v, w, weight;
    };
    std::vector<Target> targets;
    if (options.objective == FitObjective::Ols) {
        for (std::size_t i = 0; i < ws.size(); ++i)
            targets.push_back({(xs[i] - frame.cx) / frame.hx, (ys[i] - frame.cy) / frame.hy, ws[i], 1.0});
    } else {
        const int cells = options.cells_per_axis;
        if (cells < 1) throw Error(ErrorKind::InvalidArgument, kFitWhere, "cells_per_axis must be >= 1");
        std::map<std::pair<int, int>, std::pair<double, std::size_t>> acc;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            const double u = (xs[i] - frame.cx) / frame.hx;
            const double v = (ys[i] - frame.cy) / frame.hy;
            const int cu = std::clamp(static_cast<int>(std::floor((u + 1.0) * 0.5 * cells)), 0, cells - 1);
            const int cv = std::clamp(static_cast<int>(std::floor((v + 1.0) * 0.5 * cells)), 0, cells - 1);
            auto& slot = acc[{cu, cv}];
            slot.first += ws[i];
            slot.second += 1;
        }
        for (const auto& [cell, sum] : acc) {
            const double u = -1.0 + (cell.first + 0.5) * 2.0 / cells;
            const double v = -1.0 + (cell.second + 0.5) * 2.0 / cells;
            targets.push_back({u, v, sum.first / static_cast<double>(sum.second),
                               static_cast<double>(sum.second)});
        }
        if (targets.size() < monos.size())
            throw Error(ErrorKind::Underdetermined, kFitWhere,
                        std::to_string(targets.size()) + " occupied cells cannot determine " +
                            std::to_string(monos.size()) + " coefficients");
    }

    const auto rows = static_cast<Eigen::Index>(targets.size());
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& t = targets[static_cast<std::size_t>(r)];
        const double s = std::sqrt(t.weight);
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& e = monos[static_cast<std::size_t>(c)];
            design(r, c) = s * std::pow(t.u, e[0]) * std::pow(t.v, e[1]);
        }
        rhs(r) = s * t.w;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < cols)
        throw Error(ErrorKind::DegenerateGeometry, kFitWhere,
                    "sample geometry cannot support a degree-" + std::to_string(options.degree) + " surface");
    const Eigen::VectorXd coef = qr.solve(rhs);

    FittedField field;
    field.variable = variable;
    field.domain = domain;
    field.frame = frame;
    field.objective = options.objective;
    field.std_poly = MultiPoly(kXY);
    for (Eigen::Index c = 0; c < cols; ++c) field.std_poly.add_term(monos[static_cast<std::size_t>(c)], coef(c));
    field.poly = to_reporting(field.std_poly, frame);

    double mean = 0.0;
    for (double w : ws) mean += w;
    mean /= static_cast<double>(ws.size());
    double rss = 0.0, tss = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const double pt[2] = {xs[i], ys[i]};
        const double d = ws[i] - field.poly.evaluate(pt);
        rss += d * d;
        tss += (ws[i] - mean) * (ws[i] - mean);
    }
    field.diagnostics.rss = rss;
    field.diagnostics.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
    field.diagnostics.n = ws.size();
    field.diagnostics.degree = options.degree;
    return field;
}

FittedField fit_surface(const SampleTable& table, const std::string& variable, int degree,
                        FitObjective objective) {
    FitOptions opts;
    opts.degree = degree;
    opts.objective = objective;
    return fit_surface(table, variable, opts);
}

double evaluate(const FittedField& field, double x, double y) {
    const double pt[2] = {x, y};
    return field.poly.evaluate(pt);
}

MultiPoly to_implicit(const FittedField& field) {
    const std::vector<std::string> vars{"x", "y", field.variable};
    return field.poly.with_variables(vars) - MultiPoly::variable(vars, field.variable);
}

MultiPoly to_implicit_standardized(const FittedField& field) {
    const std::vector<std::string> vars{"x", "y", field.variable};
    return field.std_poly.with_variables(vars) - MultiPoly::variable(vars, field.variable);
}

}  // namespace spatcorr
