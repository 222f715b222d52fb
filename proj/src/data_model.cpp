#include "spatcorr/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spatcorr/error.hpp"

namespace spatcorr {

namespace {
constexpr const char* kTableWhere = "data-model/SampleTable";
}

SampleTable::SampleTable(std::vector<std::string> variables, std::vector<SampleRow> rows)
    : variables_(std::move(variables)), rows_(std::move(rows)) {
    std::set<std::string> declared;
    for (const auto& v : variables_) {
        if (v.empty()) throw Error(ErrorKind::Format, kTableWhere, "empty variable name");
        if (!declared.insert(v).second)
            throw Error(ErrorKind::Format, kTableWhere, "duplicate variable '" + v + "'");
    }
    std::set<std::string> ids;
    for (const auto& row : rows_) {
        if (!ids.insert(row.id).second)
            throw Error(ErrorKind::Format, kTableWhere, "duplicate row id '" + row.id + "'");
        if (!std::isfinite(row.x) || !std::isfinite(row.y))
            throw Error(ErrorKind::Format, kTableWhere, "non-finite coordinate in row '" + row.id + "'");
        if (row.values.size() != variables_.size())
            throw Error(ErrorKind::Format, kTableWhere,
                        "row '" + row.id + "' does not carry exactly the declared variables");
        for (const auto& v : variables_) {
            auto it = row.values.find(v);
            if (it == row.values.end())
                throw Error(ErrorKind::Format, kTableWhere,
                            "row '" + row.id + "' is missing variable '" + v + "'");
            if (!std::isfinite(it->second))
                throw Error(ErrorKind::Format, kTableWhere,
                            "row '" + row.id + "' has a non-finite value for '" + v + "'");
        }
    }
}

bool SampleTable::has_variable(const std::string& name) const {
    return std::find(variables_.begin(), variables_.end(), name) != variables_.end();
}

std::vector<double> SampleTable::column(const std::string& name) const {
    if (!has_variable(name))
        throw Error(ErrorKind::Shape, "data-model/column", "unknown variable '" + name + "'");
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(row.values.at(name));
    return out;
}

std::vector<double> SampleTable::xs() const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(row.x);
    return out;
}

std::vector<double> SampleTable::ys() const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(row.y);
    return out;
}

SampleTable SampleTable::subset(const std::vector<std::size_t>& row_indices) const {
    SampleTable out;
    out.variables_ = variables_;
    out.rows_.reserve(row_indices.size());
    for (auto i : row_indices) out.rows_.push_back(rows_.at(i));
    return out;
}

Stratification::Stratification(std::vector<Band> bands, Axis axis)
    : bands_(std::move(bands)), axis_(axis) {
    constexpr const char* where = "data-model/Stratification";
    if (bands_.empty()) throw Error(ErrorKind::InvalidArgument, where, "no bands declared");
    std::set<std::string> names;
    for (std::size_t i = 0; i < bands_.size(); ++i) {
        const auto& b = bands_[i];
        if (!names.insert(b.name).second)
            throw Error(ErrorKind::InvalidArgument, where, "duplicate band name '" + b.name + "'");
        if (!(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo < b.hi))
            throw Error(ErrorKind::InvalidArgument, where, "band '" + b.name + "' needs lo < hi");
        if (i > 0 && b.lo < bands_[i - 1].hi)
            throw Error(ErrorKind::InvalidArgument, where,
                        "band '" + b.name + "' overlaps or precedes '" + bands_[i - 1].name + "'");
    }
}

bool Stratification::declares(const std::string& name) const {
    return std::any_of(bands_.begin(), bands_.end(), [&](const Band& b) { return b.name == name; });
}

std::optional<std::size_t> Stratification::band_of(double coord) const {
    for (std::size_t i = 0; i < bands_.size(); ++i) {
        const auto& b = bands_[i];
        const bool last = i + 1 == bands_.size();
        if (coord >= b.lo && (coord < b.hi || (last && coord == b.hi))) return i;
    }
    return std::nullopt;
}

std::vector<Stratum> stratify(const SampleTable& table, const Stratification& strat) {
    const auto& bands = strat.bands();
    std::vector<std::vector<std::size_t>> members(bands.size());
    const auto& rows = table.rows();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::optional<std::size_t> band;
        if (row.stratum_override) {
            for (std::size_t i = 0; i < bands.size(); ++i)
                if (bands[i].name == *row.stratum_override) band = i;
            if (!band)
                throw Error(ErrorKind::UnassignableRow, "data-model/stratify",
                            "row '" + row.id + "' overrides to undeclared stratum '" +
                                *row.stratum_override + "'");
        } else {
            band = strat.band_of(strat.axis() == Axis::Y ? row.y : row.x);
            if (!band)
                throw Error(ErrorKind::UnassignableRow, "data-model/stratify",
                            "row '" + row.id + "' falls outside every band");
        }
        members[*band].push_back(r);
    }
    std::vector<Stratum> out;
    out.reserve(bands.size());
    for (std::size_t i = 0; i < bands.size(); ++i)
        out.push_back({bands[i].name, table.subset(members[i])});
    return out;
}

}  // namespace spatcorr
