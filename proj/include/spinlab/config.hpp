#pragma once
// Run configuration: JSON file plus flag overrides (flags win).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spinlab/common.hpp"
#include "spinlab/potential.hpp"
#include "spinlab/quad.hpp"

namespace spinlab {

struct RunConfig {
    std::string command;
    std::string potential_name = "cosine-perturbed";
    std::map<std::string, double> potential_params;
    std::string out_dir = "out";
    std::int64_t seed = 20120815;
    // Numeric overrides by dotted key (windows, grids, tolerances).
    std::map<std::string, double> numbers;
    std::vector<int> Ks = {4, 16, 64, 256};
    std::vector<int> Ns = {2, 3};
    std::vector<double> m_values;

    double num(const std::string& key, double fallback) const;
    quad::Options quad_options() const;
    PotentialSpec make_potential() const;
    std::string canonical() const;   // stable dump used for hashing
    std::uint64_t hash() const;
};

// Parses the JSON config file into cfg; unknown keys are an error.
void load_config_file(const std::string& path, RunConfig& cfg);

}  // namespace spinlab
