#pragma once

#include <random>
#include <string>
#include <vector>

#include "spatcorr/data_model.hpp"
#include "spatcorr/multipoly.hpp"

namespace spatcorr::test {

inline SampleRow row(std::string id, double x, double y, std::map<std::string, double> values,
                     std::optional<std::string> stratum = std::nullopt) {
    return SampleRow{std::move(id), x, y, std::move(values), std::move(stratum)};
}

// Table with variables a, b; row ids "r1", "r2", ...
inline SampleTable ab_table(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<SampleRow> rows;
    for (std::size_t i = 0; i < a.size(); ++i)
        rows.push_back(row("r" + std::to_string(i + 1), double(i), 0.0, {{"a", a[i]}, {"b", b[i]}}));
    return SampleTable({"a", "b"}, std::move(rows));
}

inline MultiPoly random_xy_poly(std::mt19937_64& rng, unsigned degree, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    MultiPoly p({"x", "y"});
    for (unsigned d = 0; d <= degree; ++d)
        for (unsigned i = 0; i <= d; ++i) p.add_term({i, d - i}, u(rng));
    return p;
}

inline MultiPoly xy_poly(std::initializer_list<std::tuple<unsigned, unsigned, double>> terms) {
    MultiPoly p({"x", "y"});
    for (auto [i, j, c] : terms) p.add_term({i, j}, c);
    return p;
}

}  // namespace spatcorr::test
