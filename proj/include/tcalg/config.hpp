#pragma once

// Run configuration: defaults, JSON loading with field-wise override, and validation.

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "tcalg/blaschke.hpp"
#include "tcalg/circle.hpp"
#include "tcalg/error.hpp"

namespace tcalg {

struct RunConfig {
    double lambda_angle = 0.0;
    std::vector<cplx> zeros{cplx(0.0), cplx(0.5)};
    int truncation = 256;   // N
    int corner = 32;        // m
    int grid = 4096;        // M
    int basis_count = 32;   // L
    int lift_samples = 1024;
    int symbol_band = 8;
    int conjugacy_max_iterations = 200;
    std::map<std::string, double> tolerances; // overrides of the per-check defaults
    std::uint64_t seed = 20240531;

    BlaschkeProduct product() const { return make_blaschke(unit(lambda_angle), zeros); }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json zeros = nlohmann::json::array();
    for (cplx z : c.zeros) zeros.push_back({z.real(), z.imag()});
    nlohmann::json tol = nlohmann::json::object();
    for (const auto& [k, v] : c.tolerances) tol[k] = v;
    return {{"lambda_angle", c.lambda_angle},
            {"zeros", zeros},
            {"truncation", c.truncation},
            {"corner", c.corner},
            {"grid", c.grid},
            {"basis_count", c.basis_count},
            {"lift_samples", c.lift_samples},
            {"symbol_band", c.symbol_band},
            {"conjugacy_max_iterations", c.conjugacy_max_iterations},
            {"tolerances", tol},
            {"seed", c.seed}};
}

namespace detail {

template <class T>
T config_field(const nlohmann::json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

} // namespace detail

/// Overrides every field present in j; unknown keys are rejected.
inline void apply_json(RunConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "lambda_angle") c.lambda_angle = detail::config_field<double>(j, "lambda_angle");
        else if (key == "truncation") c.truncation = detail::config_field<int>(j, "truncation");
        else if (key == "corner") c.corner = detail::config_field<int>(j, "corner");
        else if (key == "grid") c.grid = detail::config_field<int>(j, "grid");
        else if (key == "basis_count") c.basis_count = detail::config_field<int>(j, "basis_count");
        else if (key == "lift_samples") c.lift_samples = detail::config_field<int>(j, "lift_samples");
        else if (key == "symbol_band") c.symbol_band = detail::config_field<int>(j, "symbol_band");
        else if (key == "conjugacy_max_iterations")
            c.conjugacy_max_iterations = detail::config_field<int>(j, "conjugacy_max_iterations");
        else if (key == "seed") c.seed = detail::config_field<std::uint64_t>(j, "seed");
        else if (key == "zeros") {
            if (!value.is_array()) throw ConfigError("config field 'zeros' must be an array of [re, im] pairs");
            std::vector<cplx> zeros;
            for (const auto& z : value) {
                if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                    throw ConfigError("each zero must be a [re, im] pair of numbers");
                zeros.emplace_back(z[0].get<double>(), z[1].get<double>());
            }
            c.zeros = std::move(zeros);
        } else if (key == "tolerances") {
            if (!value.is_object()) throw ConfigError("config field 'tolerances' must be an object");
            for (const auto& [name, tol] : value.items()) {
                if (!tol.is_number()) throw ConfigError("tolerance '" + name + "' must be a number");
                c.tolerances[name] = tol.get<double>();
            }
        } else {
            throw ConfigError("unknown config field '" + key + "'");
        }
    }
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    apply_json(base, j);
    return base;
}

} // namespace tcalg
