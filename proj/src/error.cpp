#include "spatcorr/error.hpp"

namespace spatcorr {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::Format: return "format";
        case ErrorKind::EmptyInput: return "empty-input";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::UnassignableRow: return "unassignable-row";
        case ErrorKind::StratumTooSmall: return "stratum-too-small";
        case ErrorKind::DegenerateInput: return "degenerate-input";
        case ErrorKind::DegeneratePredictors: return "degenerate-predictors";
        case ErrorKind::OutOfRange: return "out-of-range";
        case ErrorKind::EmptySelection: return "empty-selection";
        case ErrorKind::DegenerateFit: return "degenerate-fit";
        case ErrorKind::Underdetermined: return "underdetermined";
        case ErrorKind::DegenerateGeometry: return "degenerate-geometry";
        case ErrorKind::DegenerateField: return "degenerate-field";
        case ErrorKind::NumericalIntegrity: return "numerical-integrity";
        case ErrorKind::NothingToEliminate: return "nothing-to-eliminate";
        case ErrorKind::DegenerateElimination: return "degenerate-elimination";
        case ErrorKind::IncompleteElimination: return "incomplete-elimination";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace spatcorr
