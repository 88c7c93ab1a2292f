#include <gtest/gtest.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "spca/bench/config.hpp"
#include "spca/bench/experiment.hpp"
#include "spca/bench/plot.hpp"

namespace fs = std::filesystem;
using namespace spca::bench;
using nlohmann::json;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("spca_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_config(const fs::path& out) {
    ExperimentConfig c;
    c.structure = {spca::Variant::tree, 63, 5};
    c.lambda = 3.0;
    c.n_grid = {30, 90};
    c.trials = 6;
    c.master_seed = 99;
    c.methods = {Method::ppm_tree, Method::ppm_ksparse, Method::init_only, Method::exhaustive};
    c.output_dir = out.string();
    return c;
}

struct Cli {
    int code;
    std::string out;
};

Cli run_cli(const std::string& args) {
    const fs::path log = temp_dir("cli") / "stdout.txt";
    const std::string cmd = std::string(SPCA_BENCH_EXE) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

}  // namespace

TEST(Config, DefaultsAndRoundTrip) {
    const ExperimentConfig c = parse_config(json::object());
    EXPECT_EQ(c.structure.d, 255u);
    EXPECT_EQ(c.structure.k, 9u);
    EXPECT_EQ(c.n_grid.front(), 20u);
    EXPECT_EQ(c.n_grid.back(), 200u);
    EXPECT_EQ(c.trials, 50u);
    const ExperimentConfig again = parse_config(to_json(c));
    EXPECT_EQ(to_json(again), to_json(c));
}

TEST(Config, RejectsInvalidInput) {
    auto bad = [](const char* text) { return parse_config(json::parse(text)); };
    EXPECT_THROW(bad(R"({"structure": {"variant": "tree", "d": 100, "k": 9}})"), ConfigError);
    EXPECT_THROW(bad(R"({"structure": {"variant": "graph", "d": 7, "k": 2}})"), ConfigError);
    EXPECT_THROW(bad(R"({"n_grid": [40, 20]})"), ConfigError);
    EXPECT_THROW(bad(R"({"n_grid": []})"), ConfigError);
    EXPECT_THROW(bad(R"({"methods": ["magic"]})"), ConfigError);
    EXPECT_THROW(bad(R"({"methods": ["ppm_path"]})"), ConfigError);  // 255 - 2 not divisible by 9
    EXPECT_THROW(bad(R"({"trials": 0})"), ConfigError);
    EXPECT_THROW(bad(R"({"lambda": "three"})"), ConfigError);
    EXPECT_THROW(bad(R"({"init": {"tau_mode": "guess"}})"), ConfigError);
    EXPECT_THROW(bad(R"({"truth": "planted"})"), ConfigError);
    EXPECT_THROW((void)load_config("/nonexistent/config.json"), ConfigError);
    const fs::path broken = temp_dir("cfg") / "broken.json";
    std::ofstream(broken) << "{ not json";
    EXPECT_THROW((void)load_config(broken.string()), ConfigError);
}

TEST(Experiment, SeedsAreOrderIndependent) {
    EXPECT_EQ(trial_seed(1, 20, 3), trial_seed(1, 20, 3));
    EXPECT_NE(trial_seed(1, 20, 3), trial_seed(1, 20, 4));
    EXPECT_NE(trial_seed(1, 20, 3), trial_seed(1, 40, 3));
    EXPECT_NE(trial_seed(1, 20, 3), trial_seed(2, 20, 3));
}

TEST(Experiment, OutputIsByteIdenticalAcrossThreadCounts) {
    const fs::path a = temp_dir("det_a"), b = temp_dir("det_b"), c = temp_dir("det_c");
    const auto ra = run_experiment(small_config(a), 1);
    (void)run_experiment(small_config(b), 3);
    (void)run_experiment(small_config(c), 1);
    for (const char* f : {"trials.csv", "summary.csv"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(c / f)) << f;
    }
    // Manifests differ only in the echoed output directory.
    json ma = json::parse(slurp(a / "manifest.json")), mb = json::parse(slurp(b / "manifest.json"));
    ma["config"].erase("output_dir");
    mb["config"].erase("output_dir");
    EXPECT_EQ(ma, mb);
    EXPECT_EQ(ra.records.size(), 2u * 6u * 4u);
    const std::string csv = slurp(a / "trials.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header(false));
    const json manifest = json::parse(slurp(a / "manifest.json"));
    EXPECT_EQ(manifest.at("csv_schema_version"), kCsvSchemaVersion);
    EXPECT_EQ(manifest.at("truth_support").size(), 5u);
}

TEST(Experiment, RecordsAreConsistent) {
    const auto r = run_experiment(small_config(temp_dir("records")), 2);
    for (const auto& rec : r.records) {
        EXPECT_GE(rec.l2_error, 0.0);
        EXPECT_LE(rec.l2_error, std::sqrt(2.0) + 1e-12);
        EXPECT_EQ(rec.runtime_ms, 0.0);
        if (rec.method == Method::exhaustive) {
            EXPECT_TRUE(std::isnan(rec.init_alignment));
        } else {
            EXPECT_GE(rec.init_alignment, 0.0);
            EXPECT_LE(rec.init_alignment, 1.0 + 1e-12);
        }
    }
    ASSERT_EQ(r.summary.size(), 8u);
    // Summary statistics recomputed from the records.
    for (const auto& row : r.summary) {
        double sum = 0, sum2 = 0, rec = 0;
        std::size_t count = 0;
        for (const auto& t : r.records) {
            if (t.n == row.n && t.method == row.method) {
                sum += t.l2_error;
                sum2 += t.l2_error * t.l2_error;
                rec += t.support_recovered ? 1.0 : 0.0;
                ++count;
            }
        }
        ASSERT_EQ(count, row.trials);
        EXPECT_NEAR(row.mean_l2, sum / count, 1e-12);
        EXPECT_NEAR(row.std_l2, std::sqrt((sum2 - sum * sum / count) / (count - 1)), 1e-9);
        EXPECT_NEAR(row.recovery_fraction, rec / count, 1e-15);
    }
}

TEST(Experiment, CsvFormatting) {
    TrialRecord r{};
    r.n = 10;
    r.d = 7;
    r.k = 3;
    r.lambda = 0.1;
    r.method = Method::init_only;
    r.l2_error = 0.5;
    r.init_alignment = std::nan("");
    auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    const std::string row = csv_row(r, false);
    EXPECT_NE(row.find("0.10000000000000001"), std::string::npos);
    EXPECT_NE(row.find(",nan,"), std::string::npos);
    EXPECT_EQ(commas(row), commas(csv_header(false)));
    EXPECT_EQ(commas(csv_row(r, true)), commas(csv_header(true)));
}

TEST(Experiment, WitnessCensusIsDeterministic) {
    WitnessConfig c;
    c.d = 60;
    c.n = 60;
    c.k = 12;
    c.trials = 4;
    std::ostringstream a, b;
    write_csv(a, run_witness_census(c, 1));
    write_csv(b, run_witness_census(c, 4));
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str().substr(0, a.str().find('\n')), csv_header(true));
    c.k = 0;
    EXPECT_THROW((void)run_witness_census(c, 1), std::invalid_argument);
}

TEST(Parallel, CoversEveryIndexAndRethrows) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) {
        EXPECT_EQ(h.load(), 1);
    }
    EXPECT_THROW(parallel_for(10, 3,
                              [](std::size_t i) {
                                  if (i == 7) {
                                      throw std::runtime_error("boom");
                                  }
                              }),
                 std::runtime_error);
    EXPECT_EQ(resolve_threads(3), 3u);
    ::setenv("STRUCTURED_PCA_THREADS", "2", 1);
    EXPECT_EQ(resolve_threads(0), 2u);
    ::unsetenv("STRUCTURED_PCA_THREADS");
    EXPECT_GE(resolve_threads(0), 1u);
}

TEST(Plot, WritesPanelsAndRejectsBadInput) {
    const fs::path dir = temp_dir("plot");
    (void)run_experiment(small_config(dir / "run"), 1);
    const auto files = emit_plots({(dir / "run" / "trials.csv").string()}, (dir / "svg").string());
    ASSERT_EQ(files.size(), 2u);
    for (const auto& f : files) {
        const std::string svg = slurp(f);
        EXPECT_EQ(svg.rfind("<svg", 0), 0u);
        EXPECT_NE(svg.find("ppm_tree"), std::string::npos);
        EXPECT_NE(svg.find("</svg>"), std::string::npos);
    }
    EXPECT_TRUE(fs::exists(dir / "svg" / "error_d63_k5.svg"));

    const fs::path empty = dir / "empty.csv";
    std::ofstream(empty) << csv_header(false) << '\n';
    EXPECT_THROW((void)emit_plots({empty.string()}, (dir / "svg").string()), std::runtime_error);
    const fs::path broken = dir / "broken.csv";
    std::ofstream(broken) << csv_header(false) << "\n1,2,3\n";
    EXPECT_THROW((void)emit_plots({broken.string()}, (dir / "svg").string()), std::invalid_argument);
    EXPECT_THROW((void)emit_plots({(dir / "missing.csv").string()}, (dir / "svg").string()), std::invalid_argument);
}

TEST(Cli, SubcommandsAndExitCodes) {
    const Cli proj = run_cli("project --structure tree --d 7 --k 3 --vec 1,2,0.5,3,0,0,0.1");
    EXPECT_EQ(proj.code, 0);
    EXPECT_NE(proj.out.find("support {1,2,4}"), std::string::npos);
    EXPECT_NE(proj.out.find("projected 1,2,0,3,0,0,0"), std::string::npos);

    const fs::path vec = temp_dir("cli_vec") / "v.txt";
    std::ofstream(vec) << "0 1 -3\n0.5 0.2 0\n2 0\n";
    const Cli path = run_cli("project --structure path --d 8 --k 3 --file " + vec.string());
    EXPECT_EQ(path.code, 0);
    EXPECT_NE(path.out.find("support {1,3,4,7,8}"), std::string::npos);

    EXPECT_EQ(run_cli("project --structure tree --d 8 --k 3 --vec 1").code, 1);
    EXPECT_EQ(run_cli("project --structure tree --d 7 --k 3 --vec 1,2").code, 1);
    EXPECT_EQ(run_cli("project --structure tree --d 7 --k 3 --vec 0,0,0,0,0,0,0 --normalize").code, 2);
    const Cli unknown = run_cli("frobnicate");
    EXPECT_EQ(unknown.code, 1);
    EXPECT_NE(unknown.out.find("Usage"), std::string::npos);
    EXPECT_EQ(run_cli("").code, 1);
    EXPECT_EQ(run_cli("run --config /nonexistent.json").code, 1);
    EXPECT_EQ(run_cli("selftest").code, 0);
    // Exhaustive search over all 9-subsets of 255 coordinates blows the enumeration budget at run time.
    const fs::path cfg = temp_dir("cli_cfg") / "c.json";
    std::ofstream(cfg) << R"({"structure": {"variant": "ksparse", "d": 255, "k": 9}, "n_grid": [20], "trials": 1,)"
                       << R"( "methods": ["exhaustive"], "output_dir": ")"
                       << (cfg.parent_path() / "out").string() << "\"}";
    EXPECT_EQ(run_cli("run --config " + cfg.string()).code, 2);
}

TEST(Cli, RunWitnessAndPlot) {
    const fs::path dir = temp_dir("cli_run");
    const Cli run = run_cli("--threads 2 --out " + (dir / "out").string() + " run --config " + SPCA_SOURCE_DIR +
                            "/configs/fig1_255.json --seed 5");
    ASSERT_EQ(run.code, 0) << run.out;
    EXPECT_TRUE(fs::exists(dir / "out" / "trials.csv"));
    EXPECT_EQ(json::parse(slurp(dir / "out" / "manifest.json")).at("config").at("master_seed"), 5);
    const Cli plot = run_cli("--out " + (dir / "svg").string() + " plot --csv " + (dir / "out" / "trials.csv").string());
    EXPECT_EQ(plot.code, 0) << plot.out;
    EXPECT_TRUE(fs::exists(dir / "svg" / "recovery_d255_k9.svg"));
    const Cli wit = run_cli("--out " + (dir / "wit").string() + " witness --d 50 --n 50 --k 10 --trials 3");
    EXPECT_EQ(wit.code, 0) << wit.out;
    EXPECT_NE(wit.out.find("trials 3"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "wit" / "witness.csv"));
}
