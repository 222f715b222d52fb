#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spatcorr {

enum class ErrorKind {
    InvalidArgument,
    Format,
    EmptyInput,
    Shape,
    UnassignableRow,
    StratumTooSmall,
    DegenerateInput,
    DegeneratePredictors,
    OutOfRange,
    EmptySelection,
    DegenerateFit,
    Underdetermined,
    DegenerateGeometry,
    DegenerateField,
    NumericalIntegrity,
    NothingToEliminate,
    DegenerateElimination,
    IncompleteElimination,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. `where` names the originating module and
/// operation, e.g. "classical-corr/pearson".
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string where, const std::string& message)
        : std::runtime_error(message), kind_(kind), where_(std::move(where)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& where() const noexcept { return where_; }

private:
    ErrorKind kind_;
    std::string where_;
};

}  // namespace spatcorr
