#pragma once

#include <fstream>
#include <string>

#include "spatcorr/cli.hpp"

#ifndef SPATCORR_TEST_DATA
#error "SPATCORR_TEST_DATA must point at tests/data"
#endif

namespace spatcorr::test {

inline std::string data_path(const std::string& name) { return std::string(SPATCORR_TEST_DATA) + "/" + name; }

inline cli::Json read_json(const std::string& path) {
    std::ifstream in(path);
    return cli::Json::parse(in);
}

inline LandscapeSpec fixture_spec() { return cli::landscape_from_json(read_json(data_path("fixture.json"))); }

inline cli::Json fixture_snapshot() { return read_json(data_path("fixture_snapshot.json")); }

}  // namespace spatcorr::test
