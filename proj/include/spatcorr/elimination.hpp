#pragma once

#include <array>
#include <string>
#include <vector>

#include "spatcorr/data_model.hpp"
#include "spatcorr/multipoly.hpp"
#include "spatcorr/surface_fit.hpp"

namespace spatcorr {

inline constexpr unsigned kMaxEliminationDegree = 4;
/// Coefficients below this fraction of the max-abs coefficient are pruned.
inline constexpr double kResultantPruneTolerance = 1e-10;
/// A raw resultant whose coefficients all fall below this fraction of the
/// Hadamard-style bound is treated as identically zero.
inline constexpr double kResultantZeroTolerance = 1e-10;

/// Determinant of the Sylvester matrix of pA and pB with respect to `var`,
/// unnormalized. Variables are the union of both inputs minus `var`.
/// Sign convention: rows of pA's coefficients come first, highest power of
/// `var` in the first column, so Res(pB, pA) = (-1)^(deg pA * deg pB) Res(pA, pB).
MultiPoly sylvester_resultant_raw(const MultiPoly& pA, const MultiPoly& pB, const std::string& var);

struct NormalizedPoly {
    MultiPoly poly;
    double scale = 1.0;  // poly = raw / scale
};

/// Divides by the max-abs coefficient, flipping sign so the leading term is
/// positive, then prunes coefficients with relative magnitude < rel_tol.
NormalizedPoly normalize_coefficients(const MultiPoly& raw, double rel_tol = kResultantPruneTolerance);

/// Normalized resultant. Throws NothingToEliminate if either input has degree
/// zero in `var`, and DegenerateElimination if the resultant vanishes
/// identically (common factor).
MultiPoly sylvester_resultant(const MultiPoly& pA, const MultiPoly& pB, const std::string& var);

struct EliminationStep {
    std::string label;        // e.g. "g1"
    std::string input_a, input_b;
    std::string eliminated;   // empty for a combination step
    std::string kind;         // "resultant", "pass-through" or "sum-of-squares"
    MultiPoly result;
    double scale = 1.0;
};

struct CouplingRelation {
    MultiPoly poly;
    std::vector<EliminationStep> provenance;
    double scale = 1.0;
    double prune_tolerance = kResultantPruneTolerance;
};

/// Eliminates the coordinates from four fields playing the roles (c, n, p, m)
/// in that order:
///   g1 = Res_x(F1, F2), g2 = Res_x(F1, F3), h1 = Res_y(g1, g2)
///   g3 = Res_x(F2, F3), g4 = Res_x(F2, F4), h2 = Res_y(g3, g4)
/// then combines h1 and h2 into one relation over the field variables.
CouplingRelation derive_coupling(const std::array<FittedField, 4>& fields);

struct CouplingCheck {
    double max_abs = 0.0;
    double rms = 0.0;
    std::size_t n = 0;
    std::vector<std::string> warnings;
};

CouplingCheck verify_coupling(const CouplingRelation& rel, const SampleTable& table);

}  // namespace spatcorr
