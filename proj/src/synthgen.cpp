#include "spatcorr/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "spatcorr/error.hpp"

namespace spatcorr {

Pcg32::Pcg32(std::uint64_t init_state, std::uint64_t init_seq) : inc_((init_seq << 1u) | 1u) {
    next();
    state_ += init_state;
    next();
}

std::uint32_t Pcg32::next() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((~rot + 1u) & 31u));
}

double Pcg32::uniform() {
    const std::uint64_t a = next() >> 5u;
    const std::uint64_t b = next() >> 6u;
    return static_cast<double>(a * 67108864ULL + b) * (1.0 / 9007199254740992.0);
}

double Pcg32::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

void validate(const LandscapeSpec& spec) {
    constexpr const char* where = "synthgen/generate_landscape";
    if (spec.processes.empty()) throw Error(ErrorKind::InvalidArgument, where, "at least one process required");
    if (!(spec.x_range.first < spec.x_range.second))
        throw Error(ErrorKind::InvalidArgument, where, "x_range needs lo < hi");
    std::set<std::string> names;
    const auto& first = spec.processes.front().relations;
    for (const auto& p : spec.processes) {
        if (p.name.empty() || !names.insert(p.name).second)
            throw Error(ErrorKind::InvalidArgument, where, "process names must be unique and non-empty");
        if (!(p.band.first < p.band.second))
            throw Error(ErrorKind::InvalidArgument, where, "process '" + p.name + "' band needs lo < hi");
        if (p.sample_count < 3)
            throw Error(ErrorKind::InvalidArgument, where, "process '" + p.name + "' needs sample_count >= 3");
        if (p.relations.empty())
            throw Error(ErrorKind::InvalidArgument, where, "process '" + p.name + "' declares no variables");
        if (p.relations.size() != first.size())
            throw Error(ErrorKind::InvalidArgument, where, "processes must declare the same variables");
        for (std::size_t k = 0; k < p.relations.size(); ++k) {
            const auto& r = p.relations[k];
            if (r.variable != first[k].variable)
                throw Error(ErrorKind::InvalidArgument, where,
                            "processes must declare the same variables in the same order");
            if (!(r.noise_sd >= 0.0))
                throw Error(ErrorKind::InvalidArgument, where, "noise_sd must be >= 0");
        }
    }
}

SampleTable generate_landscape(const LandscapeSpec& spec) {
    validate(spec);
    std::vector<std::string> variables;
    for (const auto& r : spec.processes.front().relations) variables.push_back(r.variable);

    std::vector<SampleRow> rows;
    for (std::size_t k = 0; k < spec.processes.size(); ++k) {
        const auto& proc = spec.processes[k];
        Pcg32 rng(spec.seed, k);
        std::size_t drivers = 0;
        for (const auto& r : proc.relations) drivers = std::max(drivers, r.slopes.size());
        std::vector<double> z(drivers);
        for (int s = 0; s < proc.sample_count; ++s) {
            SampleRow row;
            row.id = proc.name + "-" + std::to_string(s + 1);
            row.x = spec.x_range.first + (spec.x_range.second - spec.x_range.first) * rng.uniform();
            row.y = proc.band.first + (proc.band.second - proc.band.first) * rng.uniform();
            for (auto& zi : z) zi = rng.normal();
            for (const auto& r : proc.relations) {
                double v = r.intercept;
                for (std::size_t d = 0; d < r.slopes.size(); ++d) v += r.slopes[d] * z[d];
                v += r.noise_sd * rng.normal();
                row.values[r.variable] = v;
            }
            rows.push_back(std::move(row));
        }
    }
    return {std::move(variables), std::move(rows)};
}

}  // namespace spatcorr
