#pragma once

#include <vector>

#include "spatcorr/multipoly.hpp"
#include "spatcorr/surface_fit.hpp"

namespace spatcorr {

enum class IntegrationMethod { ExactMonomial, Quadrature };

std::string_view to_string(IntegrationMethod m);

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule; exact for polynomials of degree <= 2n - 1.
GaussLegendreRule gauss_legendre(int order);

/// Exact integral of a polynomial over (x, y) on the domain, by termwise
/// monomial integration.
double integrate(const MultiPoly& poly, const RectDomain& domain);

double inner_product(const MultiPoly& f1, const MultiPoly& f2, const RectDomain& domain);
double inner_product(const FittedField& f1, const FittedField& f2, const RectDomain& domain);
double norm(const MultiPoly& f, const RectDomain& domain);
double norm(const FittedField& f, const RectDomain& domain);

/// Tensor-product Gauss-Legendre estimate of the inner product.
double quadrature_inner_product(const MultiPoly& f1, const MultiPoly& f2, const RectDomain& domain, int order);
double quadrature_inner_product(const FittedField& f1, const FittedField& f2, const RectDomain& domain,
                                int order);

struct FunctionalCorrelation {
    double r12 = 0.0;
    double inner = 0.0;
    double norm1 = 0.0;
    double norm2 = 0.0;
    RectDomain domain;
    IntegrationMethod method = IntegrationMethod::ExactMonomial;
    int quadrature_order = 0;  // 0 for the exact path
    bool centered = false;
    /// Field takes negative values somewhere on a 32x32 probe grid.
    bool f1_negative = false;
    bool f2_negative = false;
};

struct FunctionalCorrOptions {
    IntegrationMethod method = IntegrationMethod::ExactMonomial;
    /// Quadrature order; 0 picks one that integrates the products exactly.
    int order = 0;
    /// Subtract each field's domain mean first. Not the default coefficient.
    bool centered = false;
};

inline constexpr double kMinFieldNorm = 1e-12;
inline constexpr double kMaxCauchySchwarzOvershoot = 1e-9;

/// r12 = <f1|f2> / (|f1| |f2|) over the domain.
FunctionalCorrelation functional_correlation(const MultiPoly& f1, const MultiPoly& f2, const RectDomain& domain,
                                             const FunctionalCorrOptions& options = {});
FunctionalCorrelation functional_correlation(const FittedField& f1, const FittedField& f2,
                                             const RectDomain& domain, const FunctionalCorrOptions& options = {});
/// Over the intersection of the two fields' domains.
FunctionalCorrelation functional_correlation(const FittedField& f1, const FittedField& f2,
                                             const FunctionalCorrOptions& options = {});

/// Intersection of the fields' domains; InvalidArgument when empty.
RectDomain shared_domain(const FittedField& f1, const FittedField& f2);

/// True if the polynomial is negative at some node of an n x n grid spanning the domain.
bool negative_on_grid(const MultiPoly& f, const RectDomain& domain, int n = 32);

}  // namespace spatcorr
