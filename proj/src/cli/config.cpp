#include "spatcorr/cli.hpp"

namespace spatcorr::cli {

namespace {

constexpr const char* kConfigWhere = "cli/config";

std::pair<double, double> range_of(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2)
        throw Error(ErrorKind::Format, kConfigWhere, std::string("'") + key + "' must be a [lo, hi] pair");
    return {j[key][0].get<double>(), j[key][1].get<double>()};
}

}  // namespace

Stratification parse_strata(const std::string& text, Axis axis) {
    std::vector<Band> bands;
    for (const auto& item : split_list(text)) {
        const auto eq = item.find('=');
        const auto colon = item.find(':', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || colon == std::string::npos || eq == 0)
            throw Error(ErrorKind::Format, "cli/strata", "expected name=lo:hi, got '" + item + "'");
        Band b;
        b.name = item.substr(0, eq);
        try {
            std::size_t used = 0;
            const auto lo = item.substr(eq + 1, colon - eq - 1);
            const auto hi = item.substr(colon + 1);
            b.lo = std::stod(lo, &used);
            if (used != lo.size()) throw std::invalid_argument(lo);
            b.hi = std::stod(hi, &used);
            if (used != hi.size()) throw std::invalid_argument(hi);
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::Format, "cli/strata", "bad band bounds in '" + item + "'");
        }
        bands.push_back(std::move(b));
    }
    return Stratification(std::move(bands), axis);
}

LandscapeSpec landscape_from_json(const Json& j) {
    try {
        LandscapeSpec spec;
        if (!j.contains("seed")) throw Error(ErrorKind::Format, kConfigWhere, "'seed' is mandatory");
        spec.seed = j.at("seed").get<std::uint64_t>();
        spec.x_range = range_of(j, "x_range");
        for (const auto& pj : j.at("processes")) {
            ProcessSpec p;
            p.name = pj.at("name").get<std::string>();
            p.band = range_of(pj, "band");
            p.sample_count = pj.at("sample_count").get<int>();
            for (const auto& [var, rj] : pj.at("relations").items()) {
                VariableRelation r;
                r.variable = var;
                r.intercept = rj.value("intercept", 0.0);
                r.slopes = rj.value("slopes", std::vector<double>{});
                r.noise_sd = rj.value("noise_sd", 0.0);
                p.relations.push_back(std::move(r));
            }
            spec.processes.push_back(std::move(p));
        }
        validate(spec);
        return spec;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Format, kConfigWhere, std::string("malformed landscape config: ") + e.what());
    }
}

Json landscape_to_json(const LandscapeSpec& spec) {
    Json j;
    j["seed"] = spec.seed;
    j["x_range"] = {spec.x_range.first, spec.x_range.second};
    j["processes"] = Json::array();
    for (const auto& p : spec.processes) {
        Json pj;
        pj["name"] = p.name;
        pj["band"] = {p.band.first, p.band.second};
        pj["sample_count"] = p.sample_count;
        pj["relations"] = Json::object();
        for (const auto& r : p.relations)
            pj["relations"][r.variable] = {{"intercept", r.intercept}, {"slopes", r.slopes}, {"noise_sd", r.noise_sd}};
        j["processes"].push_back(std::move(pj));
    }
    return j;
}

Json poly_to_json(const MultiPoly& poly) {
    Json j;
    j["variables"] = poly.variables();
    j["terms"] = Json::array();
    for (const auto& [e, c] : poly.terms()) j["terms"].push_back({{"exponents", e}, {"coefficient", c}});
    j["text"] = poly.to_string();
    return j;
}

Json field_to_json(const FittedField& field) {
    Json j;
    j["variable"] = field.variable;
    j["objective"] = std::string(to_string(field.objective));
    j["domain"] = {{"x_lo", field.domain.x_lo}, {"x_hi", field.domain.x_hi},
                   {"y_lo", field.domain.y_lo}, {"y_hi", field.domain.y_hi}};
    j["frame"] = {{"cx", field.frame.cx}, {"hx", field.frame.hx}, {"cy", field.frame.cy}, {"hy", field.frame.hy}};
    j["poly"] = poly_to_json(field.poly);
    j["std_poly"] = poly_to_json(field.std_poly);
    j["diagnostics"] = {{"method", std::string(to_string(field.objective))},
                        {"n", field.diagnostics.n},
                        {"degree", field.diagnostics.degree},
                        {"rss", field.diagnostics.rss},
                        {"r_squared", field.diagnostics.r_squared}};
    return j;
}

}  // namespace spatcorr::cli
