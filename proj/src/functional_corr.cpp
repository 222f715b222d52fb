#include "spatcorr/functional_corr.hpp"

#include <cmath>
#include <numbers>

#include "spatcorr/error.hpp"

namespace spatcorr {

namespace {

const std::vector<std::string> kXY{"x", "y"};

MultiPoly as_xy(const MultiPoly& p, const char* where) {
    try {
        return p.with_variables(kXY);
    } catch (const Error&) {
        throw Error(ErrorKind::InvalidArgument, where, "field is not a polynomial in (x, y) alone");
    }
}

// integral of t^k over [-h, h]
double centered_moment(unsigned k, double h) {
    if (k % 2 == 1) return 0.0;
    return 2.0 * std::pow(h, k + 1) / (k + 1);
}

}  // namespace

std::string_view to_string(IntegrationMethod m) {
    return m == IntegrationMethod::ExactMonomial ? "exact-monomial" : "quadrature";
}

namespace {

// (P_n(z), P_n'(z)) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double z) {
    double p0 = 1.0, p1 = z;
    for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double pk = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = pk;
    }
    return {p1, static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0)};
}

}  // namespace

GaussLegendreRule gauss_legendre(int order) {
    if (order < 1)
        throw Error(ErrorKind::InvalidArgument, "functional-corr/gauss_legendre", "order must be >= 1");
    const auto n = static_cast<std::size_t>(order);
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(n, z);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double dp = legendre(n, z).second;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

double integrate(const MultiPoly& poly, const RectDomain& domain) {
    domain.validate();
    const auto p = as_xy(poly, "functional-corr/integrate");
    const auto f = CoordFrame::of(domain);
    // Shift to domain-centred coordinates before integrating termwise.
    MultiPoly x(kXY), y(kXY);
    x.add_term({1, 0}, 1.0);
    x.add_term({0, 0}, f.cx);
    y.add_term({0, 1}, 1.0);
    y.add_term({0, 0}, f.cy);
    const auto shifted = p.compose({x, y});
    double total = 0.0;
    for (const auto& [e, c] : shifted.terms()) total += c * centered_moment(e[0], f.hx) * centered_moment(e[1], f.hy);
    return total;
}

double inner_product(const MultiPoly& f1, const MultiPoly& f2, const RectDomain& domain) {
    auto a = as_xy(f1, "functional-corr/inner_product");
    auto b = as_xy(f2, "functional-corr/inner_product");
    // Fixed operand order keeps the rounding, and so r12, exactly symmetric.
    if (b.terms() < a.terms()) std::swap(a, b);
    return integrate(a * b, domain);
}

double inner_product(const FittedField& f1, const FittedField& f2, const RectDomain& domain) {
    return inner_product(f1.poly, f2.poly, domain);
}

double norm(const MultiPoly& f, const RectDomain& domain) {
    return std::sqrt(std::max(0.0, inner_product(f, f, domain)));
}

double norm(const FittedField& f, const RectDomain& domain) { return norm(f.poly, domain); }

double quadrature_inner_product(const MultiPoly& f1, const MultiPoly& f2, const RectDomain& domain, int order) {
    domain.validate();
    const auto p1 = as_xy(f1, "functional-corr/quadrature_inner_product");
    const auto p2 = as_xy(f2, "functional-corr/quadrature_inner_product");
    const auto rule = gauss_legendre(order);
    const auto fr = CoordFrame::of(domain);
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = fr.cx + fr.hx * rule.nodes[i];
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double pt[2] = {x, fr.cy + fr.hy * rule.nodes[j]};
            total += rule.weights[i] * rule.weights[j] * p1.evaluate(pt) * p2.evaluate(pt);
        }
    }
    return total * fr.hx * fr.hy;
}

double quadrature_inner_product(const FittedField& f1, const FittedField& f2, const RectDomain& domain,
                                int order) {
    return quadrature_inner_product(f1.poly, f2.poly, domain, order);
}

bool negative_on_grid(const MultiPoly& f, const RectDomain& domain, int n) {
    const auto p = as_xy(f, "functional-corr/negative_on_grid");
    for (int i = 0; i < n; ++i) {
        const double x = domain.x_lo + (domain.x_hi - domain.x_lo) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double pt[2] = {x, domain.y_lo + (domain.y_hi - domain.y_lo) * j / (n - 1)};
            if (p.evaluate(pt) < 0.0) return true;
        }
    }
    return false;
}

FunctionalCorrelation functional_correlation(const MultiPoly& f1, const MultiPoly& f2, const RectDomain& domain,
                                             const FunctionalCorrOptions& options) {
    constexpr const char* where = "functional-corr/functional_correlation";
    domain.validate();
    auto p1 = as_xy(f1, where);
    auto p2 = as_xy(f2, where);
    if (options.centered) {
        p1 -= MultiPoly::constant(kXY, integrate(p1, domain) / domain.area());
        p2 -= MultiPoly::constant(kXY, integrate(p2, domain) / domain.area());
    }

    FunctionalCorrelation out;
    out.domain = domain;
    out.method = options.method;
    out.centered = options.centered;
    out.f1_negative = negative_on_grid(p1, domain);
    out.f2_negative = negative_on_grid(p2, domain);

    if (options.method == IntegrationMethod::ExactMonomial) {
        out.inner = inner_product(p1, p2, domain);
        out.norm1 = norm(p1, domain);
        out.norm2 = norm(p2, domain);
    } else {
        int order = options.order;
        if (order == 0) {
            const auto deg = std::max({p1.degree_in("x") + p2.degree_in("x"), p1.degree_in("y") + p2.degree_in("y"),
                                       2 * p1.degree_in("x"), 2 * p1.degree_in("y"), 2 * p2.degree_in("x"),
                                       2 * p2.degree_in("y")});
            order = static_cast<int>(deg / 2 + 1);
        }
        out.quadrature_order = order;
        out.inner = quadrature_inner_product(p1, p2, domain, order);
        out.norm1 = std::sqrt(std::max(0.0, quadrature_inner_product(p1, p1, domain, order)));
        out.norm2 = std::sqrt(std::max(0.0, quadrature_inner_product(p2, p2, domain, order)));
    }
    if (out.norm1 <= kMinFieldNorm || out.norm2 <= kMinFieldNorm)
        throw Error(ErrorKind::DegenerateField, where, "a field has (near-)zero norm on the domain");

    double r = out.inner / (out.norm1 * out.norm2);
    if (std::abs(r) > 1.0) {
        if (std::abs(r) - 1.0 > kMaxCauchySchwarzOvershoot)
            throw Error(ErrorKind::NumericalIntegrity, where,
                        "|r12| exceeds 1 by " + std::to_string(std::abs(r) - 1.0));
        r = r > 0 ? 1.0 : -1.0;
    }
    out.r12 = r;
    return out;
}

FunctionalCorrelation functional_correlation(const FittedField& f1, const FittedField& f2,
                                             const RectDomain& domain, const FunctionalCorrOptions& options) {
    return functional_correlation(f1.poly, f2.poly, domain, options);
}

RectDomain shared_domain(const FittedField& f1, const FittedField& f2) {
    auto d = f1.domain.intersect(f2.domain);
    if (!d)
        throw Error(ErrorKind::InvalidArgument, "functional-corr/shared_domain",
                    "field domains do not overlap in a non-degenerate rectangle");
    return *d;
}

FunctionalCorrelation functional_correlation(const FittedField& f1, const FittedField& f2,
                                             const FunctionalCorrOptions& options) {
    return functional_correlation(f1, f2, shared_domain(f1, f2), options);
}

}  // namespace spatcorr
