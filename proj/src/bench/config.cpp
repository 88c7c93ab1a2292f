#include "spca/bench/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

namespace spca::bench {

using nlohmann::json;

SparsityStructure StructureDescriptor::build() const { return build_as(variant); }

SparsityStructure StructureDescriptor::build_as(Variant other) const {
    try {
        return SparsityStructure::from_descriptor(other, d, k);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("structure: ") + e.what());
    }
}

void to_json(json& j, const StructureDescriptor& s) {
    j = json{{"variant", spca::to_string(s.variant)}, {"d", s.d}, {"k", s.k}};
}

void from_json(const json& j, StructureDescriptor& s) {
    try {
        s.variant = variant_from_string(j.at("variant").get<std::string>());
        s.d = j.at("d").get<std::size_t>();
        s.k = j.at("k").get<std::size_t>();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    // Reject inconsistent d early (e.g. a tree with d != 2^h - 1).
    (void)s.build();
}

std::string to_string(Method m) {
    switch (m) {
        case Method::ppm_tree:
            return "ppm_tree";
        case Method::ppm_ksparse:
            return "ppm_ksparse";
        case Method::ppm_path:
            return "ppm_path";
        case Method::exhaustive:
            return "exhaustive";
        case Method::init_only:
            return "init_only";
        case Method::sdp_witness:
            return "sdp_witness";
    }
    return "unknown";
}

Method method_from_string(const std::string& name) {
    for (auto m : {Method::ppm_tree, Method::ppm_ksparse, Method::ppm_path, Method::exhaustive, Method::init_only,
                   Method::sdp_witness}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw ConfigError("unknown method '" + name + "'");
}

namespace {

TauMode tau_mode_from_string(const std::string& s) {
    if (s == "paper_rule") {
        return TauMode::paper_rule;
    }
    if (s == "explicit") {
        return TauMode::explicit_value;
    }
    throw ConfigError("init.tau_mode must be 'paper_rule' or 'explicit'");
}

}  // namespace

void validate(const ExperimentConfig& c) {
    (void)c.structure.build();
    if (!(c.lambda >= 0.0)) {
        throw ConfigError("lambda must be non-negative");
    }
    if (c.trials < 1) {
        throw ConfigError("trials must be >= 1");
    }
    if (c.n_grid.empty()) {
        throw ConfigError("n_grid must be non-empty");
    }
    if (c.n_grid.front() < 1 || std::adjacent_find(c.n_grid.begin(), c.n_grid.end(), std::greater_equal<>()) !=
                                    c.n_grid.end()) {
        throw ConfigError("n_grid must be strictly ascending positive integers");
    }
    if (c.methods.empty()) {
        throw ConfigError("methods must be non-empty");
    }
    if (c.ppm.max_iters < 1) {
        throw ConfigError("ppm.max_iters must be >= 1");
    }
    if (c.init.tau_mode == TauMode::explicit_value && !(c.init.tau >= 0.0)) {
        throw ConfigError("init.tau must be non-negative");
    }
    for (auto m : c.methods) {
        if (m == Method::ppm_tree) {
            (void)c.structure.build_as(Variant::tree);
        } else if (m == Method::ppm_path) {
            (void)c.structure.build_as(Variant::path);
        }
    }
}

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig c;
    try {
        if (j.contains("structure")) {
            c.structure = j.at("structure").get<StructureDescriptor>();
        }
        c.lambda = j.value("lambda", c.lambda);
        if (j.contains("n_grid")) {
            c.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
        }
        c.trials = j.value("trials", c.trials);
        c.master_seed = j.value("master_seed", c.master_seed);
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& m : j.at("methods")) {
                c.methods.push_back(method_from_string(m.get<std::string>()));
            }
        }
        if (j.contains("ppm")) {
            const auto& p = j.at("ppm");
            c.ppm.max_iters = p.value("max_iters", c.ppm.max_iters);
            c.ppm.record_trace = p.value("record_trace", c.ppm.record_trace);
            c.ppm.stop_tol = p.value("stop_tol", c.ppm.stop_tol);
        }
        if (j.contains("init")) {
            const auto& i = j.at("init");
            c.init.tau_mode = tau_mode_from_string(i.value("tau_mode", std::string("paper_rule")));
            c.init.tau = i.value("tau", c.init.tau);
            c.init.c1_const = i.value("c1_const", c.init.c1_const);
            c.init.c2_const = i.value("c2_const", c.init.c2_const);
        }
        if (j.contains("truth")) {
            const auto t = j.at("truth").get<std::string>();
            if (t == "default") {
                c.truth = TruthMode::default_support;
            } else if (t == "random") {
                c.truth = TruthMode::random_support;
            } else {
                throw ConfigError("truth must be 'default' or 'random'");
            }
        }
        c.record_runtime = j.value("record_runtime", c.record_runtime);
        c.output_dir = j.value("output_dir", c.output_dir);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
    json methods = json::array();
    for (auto m : c.methods) {
        methods.push_back(to_string(m));
    }
    return json{{"structure", c.structure},
                {"lambda", c.lambda},
                {"n_grid", c.n_grid},
                {"trials", c.trials},
                {"master_seed", c.master_seed},
                {"methods", methods},
                {"ppm", {{"max_iters", c.ppm.max_iters}, {"record_trace", c.ppm.record_trace}, {"stop_tol", c.ppm.stop_tol}}},
                {"init",
                 {{"tau_mode", c.init.tau_mode == TauMode::paper_rule ? "paper_rule" : "explicit"},
                  {"tau", c.init.tau},
                  {"c1_const", c.init.c1_const},
                  {"c2_const", c.init.c2_const}}},
                {"truth", c.truth == TruthMode::default_support ? "default" : "random"},
                {"record_runtime", c.record_runtime},
                {"output_dir", c.output_dir}};
}

}  // namespace spca::bench
