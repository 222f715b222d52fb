#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spatcorr/data_model.hpp"

namespace spatcorr {

/// PCG32 (XSH-RR 64/32). Portable and fully specified, so generated tables
/// are identical on every IEEE-754 platform.
class Pcg32 {
public:
    Pcg32(std::uint64_t init_state, std::uint64_t init_seq);

    std::uint32_t next();
    /// 53-bit uniform in [0, 1) from two successive draws.
    double uniform();
    /// Standard normal via Box-Muller; both outputs of a pair are consumed.
    double normal();

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct VariableRelation {
    std::string variable;
    double intercept = 0.0;
    std::vector<double> slopes;  // over latent drivers z_0, z_1, ...
    double noise_sd = 0.0;
};

struct ProcessSpec {
    std::string name;
    std::pair<double, double> band{0.0, 1.0};  // y range
    std::vector<VariableRelation> relations;
    int sample_count = 3;
};

struct LandscapeSpec {
    std::vector<ProcessSpec> processes;
    std::uint64_t seed = 0;
    std::pair<double, double> x_range{0.0, 1.0};
};

void validate(const LandscapeSpec& spec);

/// Process k draws from Pcg32(seed, k). Per sample: x, y, then each latent
/// driver, then one noise draw per relation in declared order.
SampleTable generate_landscape(const LandscapeSpec& spec);

}  // namespace spatcorr
