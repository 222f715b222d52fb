#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spatcorr/data_model.hpp"
#include "spatcorr/multipoly.hpp"

namespace spatcorr {

struct RectDomain {
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;

    /// Throws InvalidArgument unless x_lo < x_hi and y_lo < y_hi.
    void validate() const;
    bool contains(double x, double y) const {
        return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi;
    }
    double area() const { return (x_hi - x_lo) * (y_hi - y_lo); }

    /// Intersection; nullopt when empty or degenerate.
    std::optional<RectDomain> intersect(const RectDomain& other) const;

    friend bool operator==(const RectDomain&, const RectDomain&) = default;
};

/// Affine map from reporting coordinates to the standardized fitting frame:
/// u = (x - cx) / hx, v = (y - cy) / hy.
struct CoordFrame {
    double cx = 0.0, hx = 1.0, cy = 0.0, hy = 1.0;

    static CoordFrame of(const RectDomain& d);
    friend bool operator==(const CoordFrame&, const CoordFrame&) = default;
};

enum class FitObjective { Ols, Correspondence };

std::string_view to_string(FitObjective o);
FitObjective parse_fit_objective(std::string_view text);

struct FitDiagnostics {
    double rss = 0.0;
    double r_squared = 1.0;
    std::size_t n = 0;
    int degree = 0;
};

inline constexpr int kMaxSurfaceDegree = 4;

/// A fitted spatial function w ~ poly(x, y) over a rectangular domain.
/// `poly` is in reporting coordinates; `std_poly` is the same function in the
/// standardized frame, over variables (x, y) meaning (u, v).
struct FittedField {
    MultiPoly poly;
    MultiPoly std_poly;
    std::string variable;
    RectDomain domain;
    CoordFrame frame;
    FitDiagnostics diagnostics;
    FitObjective objective = FitObjective::Ols;

    /// Wraps an explicit polynomial over (x, y); the frame is the domain's.
    static FittedField from_poly(const MultiPoly& poly, std::string variable, const RectDomain& domain);
};

struct FitOptions {
    int degree = 2;
    FitObjective objective = FitObjective::Ols;
    /// Grid resolution per axis for the correspondence objective.
    int cells_per_axis = 8;
    /// Defaults to the bounding rectangle of the samples.
    std::optional<RectDomain> domain;
};

/// Monomial exponents (i, j) of x^i y^j with i + j <= degree, graded lex order.
std::vector<Exponents> surface_monomials(int degree);

FittedField fit_surface(const SampleTable& table, const std::string& variable, const FitOptions& options);
FittedField fit_surface(const SampleTable& table, const std::string& variable, int degree,
                        FitObjective objective = FitObjective::Ols);

double evaluate(const FittedField& field, double x, double y);

/// poly(x, y) - w over variables (x, y, w).
MultiPoly to_implicit(const FittedField& field);
/// Same in the standardized frame; used for elimination.
MultiPoly to_implicit_standardized(const FittedField& field);

RectDomain bounding_domain(const SampleTable& table);

}  // namespace spatcorr
