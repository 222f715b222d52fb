#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spatcorr {

struct SampleRow {
    std::string id;
    double x = 0.0;  // longitude-like
    double y = 0.0;  // latitude-like
    std::map<std::string, double> values;
    std::optional<std::string> stratum_override;
};

/// Geo-referenced sample rows. Construction validates that ids are unique,
/// coordinates are finite, and every row carries exactly one finite value per
/// declared variable. Immutable afterwards.
class SampleTable {
public:
    SampleTable() = default;
    SampleTable(std::vector<std::string> variables, std::vector<SampleRow> rows);

    const std::vector<std::string>& variables() const noexcept { return variables_; }
    const std::vector<SampleRow>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }

    bool has_variable(const std::string& name) const;
    /// Values of `name` in row order; throws Shape if the variable is unknown.
    std::vector<double> column(const std::string& name) const;
    std::vector<double> xs() const;
    std::vector<double> ys() const;

    /// Subset keeping the declared variables, rows taken in the given order.
    SampleTable subset(const std::vector<std::size_t>& row_indices) const;

private:
    std::vector<std::string> variables_;
    std::vector<SampleRow> rows_;
};

enum class Axis { X, Y };

struct Band {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

/// Sorted, non-overlapping coordinate bands. Each band is [lo, hi) except the
/// last one, which also includes hi.
class Stratification {
public:
    Stratification(std::vector<Band> bands, Axis axis = Axis::Y);

    const std::vector<Band>& bands() const noexcept { return bands_; }
    Axis axis() const noexcept { return axis_; }

    bool declares(const std::string& name) const;
    /// Index of the band containing `coord`, if any.
    std::optional<std::size_t> band_of(double coord) const;

private:
    std::vector<Band> bands_;
    Axis axis_;
};

struct Stratum {
    std::string name;
    SampleTable table;
};

/// Partitions `table` into one table per band, in band order (empty strata
/// included). A row's stratum_override beats band membership.
std::vector<Stratum> stratify(const SampleTable& table, const Stratification& strat);

}  // namespace spatcorr
