#include "spinlab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spinlab/report.hpp"

namespace spinlab {

double RunConfig::num(const std::string& key, double fallback) const {
    auto it = numbers.find(key);
    return it == numbers.end() ? fallback : it->second;
}

quad::Options RunConfig::quad_options() const {
    quad::Options opt;
    opt.abs_tol = num("quad.abs_tol", opt.abs_tol);
    opt.log_drop = num("quad.log_drop", opt.log_drop);
    if (opt.abs_tol <= 0 || opt.log_drop <= 0)
        throw Error("ConfigValue", "tolerance overrides must be positive");
    return opt;
}

PotentialSpec RunConfig::make_potential() const {
    return catalog(potential_name, potential_params);
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << "command=" << command << ";potential=" << potential_name;
    for (const auto& [k, v] : potential_params) os << ";p." << k << "=" << format_float(v);
    os << ";seed=" << seed;
    for (const auto& [k, v] : numbers) os << ";n." << k << "=" << format_float(v);
    os << ";Ks=";
    for (int k : Ks) os << k << ",";
    os << ";Ns=";
    for (int n : Ns) os << n << ",";
    os << ";m=";
    for (double m : m_values) os << format_float(m) << ",";
    return os.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw Error("ConfigFile", "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("ConfigFile", std::string("parse error: ") + e.what());
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "command")
            cfg.command = it.value().get<std::string>();
        else if (key == "potential")
            cfg.potential_name = it.value().get<std::string>();
        else if (key == "params")
            for (auto p = it.value().begin(); p != it.value().end(); ++p)
                cfg.potential_params[p.key()] = p.value().get<double>();
        else if (key == "out")
            cfg.out_dir = it.value().get<std::string>();
        else if (key == "seed")
            cfg.seed = it.value().get<std::int64_t>();
        else if (key == "Ks")
            cfg.Ks = it.value().get<std::vector<int>>();
        else if (key == "Ns")
            cfg.Ns = it.value().get<std::vector<int>>();
        else if (key == "m_values")
            cfg.m_values = it.value().get<std::vector<double>>();
        else if (key == "numbers")
            for (auto p = it.value().begin(); p != it.value().end(); ++p)
                cfg.numbers[p.key()] = p.value().get<double>();
        else
            throw Error("ConfigKey", "unknown config key: " + key);
    }
}

}  // namespace spinlab
