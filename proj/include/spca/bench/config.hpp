#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spca/estimators.hpp"
#include "spca/structures.hpp"

namespace spca::bench {

/// Invalid or inconsistent experiment configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StructureDescriptor {
    Variant variant = Variant::tree;
    std::size_t d = 255;
    std::size_t k = 9;

    [[nodiscard]] SparsityStructure build() const;
    /// Same (d, k) under another variant.
    [[nodiscard]] SparsityStructure build_as(Variant other) const;
};

void to_json(nlohmann::json& j, const StructureDescriptor& s);
void from_json(const nlohmann::json& j, StructureDescriptor& s);

enum class Method { ppm_tree, ppm_ksparse, ppm_path, exhaustive, init_only, sdp_witness };

[[nodiscard]] std::string to_string(Method m);
[[nodiscard]] Method method_from_string(const std::string& name);

enum class TruthMode { default_support, random_support };

struct ExperimentConfig {
    StructureDescriptor structure;
    double lambda = 3.0;
    std::vector<std::size_t> n_grid{20, 40, 60, 80, 100, 120, 140, 160, 180, 200};
    std::size_t trials = 50;
    std::uint64_t master_seed = 20240101;
    std::vector<Method> methods{Method::ppm_tree, Method::ppm_ksparse};
    PPMConfig ppm{100, false, 0.0};
    InitConfig init;
    TruthMode truth = TruthMode::default_support;
    bool record_runtime = false;
    std::string output_dir = "out";
};

/// Parses and validates; throws ConfigError.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& j);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& c);

/// Throws ConfigError on inconsistent settings (e.g. ppm_path with (d-2) % k != 0).
void validate(const ExperimentConfig& c);

}  // namespace spca::bench
