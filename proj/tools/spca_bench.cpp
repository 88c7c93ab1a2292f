#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spca/bench/config.hpp"
#include "spca/bench/experiment.hpp"
#include "spca/bench/plot.hpp"
#include "spca/structures.hpp"

int run_selftest(std::ostream& os);

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> out;
    std::string token;
    std::istringstream is(text);
    while (is >> std::ws && std::getline(is, token, ',')) {
        std::istringstream inner(token);
        double x = 0;
        while (inner >> x) {
            out.push_back(x);
        }
        if (!inner.eof()) {
            throw spca::bench::ConfigError("cannot parse vector entry '" + token + "'");
        }
    }
    return out;
}

std::vector<double> read_vector_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw spca::bench::ConfigError("cannot open vector file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    for (auto& ch : text) {
        if (ch == '\n' || ch == '\t' || ch == ';') {
            ch = ',';
        }
    }
    return parse_vector(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structured sparse PCA: projection oracles, projected power method and Monte Carlo benchmarks"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t threads = 0;
    std::string out_dir;
    app.add_option_function<std::uint64_t>(
           "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; }, "Master seed override")
        ->group("Global");
    app.add_option("--threads", threads, "Worker threads (default: STRUCTURED_PCA_THREADS or hardware)")
        ->group("Global");
    app.add_option("--out", out_dir, "Output directory override")->group("Global");
    app.fallthrough();

    auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment from a JSON config");
    std::string config_path;
    bool timing = false;
    run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_flag("--timing", timing, "Record wall-clock runtime per row (makes the CSV non-reproducible)");

    auto* plot = app.add_subcommand("plot", "Render SVG figures from experiment CSVs");
    std::vector<std::string> csv_paths;
    plot->add_option("--csv", csv_paths, "Trial CSV file(s)")->required();

    auto* proj = app.add_subcommand("project", "Project a vector onto a sparsity structure");
    std::string variant = "tree";
    std::size_t d = 0;
    std::size_t k = 0;
    std::string vec_text;
    std::string vec_file;
    bool normalize = false;
    proj->add_option("--structure", variant, "tree | path | ksparse")->required();
    proj->add_option("--d", d, "Ambient dimension")->required();
    proj->add_option("--k", k, "Sparsity parameter")->required();
    auto* vec_opt = proj->add_option("--vec", vec_text, "Comma-separated entries");
    auto* file_opt = proj->add_option("--file", vec_file, "File with entries (comma/whitespace separated)");
    vec_opt->excludes(file_opt);
    proj->add_flag("--normalize", normalize, "Normalise the projection to unit length");

    auto* wit = app.add_subcommand("witness", "SDP witness census (feasibility, objective, distance to truth)");
    spca::bench::WitnessConfig wc;
    wit->add_option("--d", wc.d, "Dimension")->capture_default_str();
    wit->add_option("--n", wc.n, "Samples")->capture_default_str();
    wit->add_option("--k", wc.k, "Sparsity")->capture_default_str();
    wit->add_option("--lambda", wc.lambda, "Eigengap")->capture_default_str();
    wit->add_option("--trials", wc.trials, "Trials")->capture_default_str();

    app.add_subcommand("selftest", "Check the oracles and estimators against independent references");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code != 0) {
            std::cerr << app.help();
        }
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (run->parsed()) {
            auto config = spca::bench::load_config(config_path);
            if (seed_given) {
                config.master_seed = seed;
            }
            if (!out_dir.empty()) {
                config.output_dir = out_dir;
            }
            config.record_runtime = config.record_runtime || timing;
            const auto result = spca::bench::run_experiment(config, spca::bench::resolve_threads(threads));
            spca::bench::write_summary(std::cout, result.summary);
            std::cout << "wrote " << result.csv_path << " and " << result.summary_path << '\n';
            return kOk;
        }
        if (plot->parsed()) {
            const auto files = spca::bench::emit_plots(csv_paths, out_dir.empty() ? "plots" : out_dir);
            for (const auto& f : files) {
                std::cout << f << '\n';
            }
            return kOk;
        }
        if (proj->parsed()) {
            if (vec_text.empty() == vec_file.empty()) {
                throw spca::bench::ConfigError("project: give exactly one of --vec or --file");
            }
            const auto entries = vec_file.empty() ? parse_vector(vec_text) : read_vector_file(vec_file);
            const spca::bench::StructureDescriptor desc{spca::variant_from_string(variant), d, k};
            const auto structure = desc.build();
            const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(entries.data(),
                                                                        static_cast<Eigen::Index>(entries.size()));
            if (static_cast<std::size_t>(v.size()) != structure.dim()) {
                throw spca::bench::ConfigError("project: vector has " + std::to_string(v.size()) +
                                               " entries, structure expects " + std::to_string(structure.dim()));
            }
            const auto p = normalize ? spca::project_normalized(structure, v) : spca::project(structure, v);
            std::cout << "support " << p.support.to_string() << '\n' << "projected ";
            for (Eigen::Index i = 0; i < p.projected.size(); ++i) {
                std::cout << (i ? "," : "") << p.projected[i];
            }
            std::cout << '\n';
            return kOk;
        }
        if (wit->parsed()) {
            if (seed_given) {
                wc.master_seed = seed;
            }
            const auto records = spca::bench::run_witness_census(wc, spca::bench::resolve_threads(threads));
            const std::string dir = out_dir.empty() ? "out" : out_dir;
            std::filesystem::create_directories(dir);
            const auto path = (std::filesystem::path(dir) / "witness.csv").string();
            std::ofstream csv(path);
            spca::bench::write_csv(csv, records);
            if (!csv) {
                throw std::runtime_error("failed writing '" + path + "'");
            }
            std::size_t feasible = 0, objective_ok = 0, gap_ok = 0;
            const double target = 0.9 * static_cast<double>(wc.d) / static_cast<double>(wc.n);
            for (const auto& r : records) {
                const auto& w = *r.witness;
                feasible += w.feasible ? 1 : 0;
                objective_ok += w.objective >= target ? 1 : 0;
                gap_ok += w.spectral_gap >= 0.2 ? 1 : 0;
            }
            std::cout << "trials " << records.size() << ", feasible " << feasible << ", objective >= "
                      << target << " in " << objective_ok << ", spectral gap >= 0.2 in " << gap_ok << '\n'
                      << "wrote " << path << '\n';
            return kOk;
        }
        return run_selftest(std::cout) == 0 ? kOk : kRuntimeError;
    } catch (const spca::bench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}
