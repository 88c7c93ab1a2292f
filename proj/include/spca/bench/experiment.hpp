#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spca/bench/config.hpp"
#include "spca/support.hpp"

namespace spca::bench {

inline constexpr int kCsvSchemaVersion = 1;

/// Extra columns carried by sdp_witness rows.
struct WitnessMetrics {
    bool feasible;  ///< all four constraint families within tolerance
    double l1_mass;
    double objective;
    double psd_min_eig;
    double spectral_gap;
};

struct TrialRecord {
    std::size_t n;
    std::size_t d;
    std::size_t k;
    double lambda;
    Method method;
    std::size_t trial;
    std::uint64_t seed;
    double l2_error;
    double frob_error;
    bool support_recovered;
    std::size_t iterations;
    double init_alignment;  ///< |<v0, v*>|; NaN when the method has no initialisation
    double runtime_ms;
    std::optional<WitnessMetrics> witness;
};

struct SummaryRow {
    std::size_t n;
    Method method;
    std::size_t trials;
    double mean_l2;
    double std_l2;
    double mean_frob;
    double std_frob;
    double recovery_fraction;
    double mean_init_alignment;
};

struct GroundTruth {
    Eigen::VectorXd v_star;
    SubspaceSupport support;
    std::uint64_t sign_seed;
};

[[nodiscard]] GroundTruth make_ground_truth(const ExperimentConfig& c);

/// Seed of the data for (n, trial): independent of evaluation order.
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial);

/// Runs every configured method on one dataset drawn for (n, trial).
[[nodiscard]] std::vector<TrialRecord> run_trial(const ExperimentConfig& c, const GroundTruth& truth, std::size_t n,
                                                 std::size_t trial);

struct ExperimentResult {
    std::vector<TrialRecord> records;  ///< sorted by (n, trial, method order)
    std::vector<SummaryRow> summary;
    std::string csv_path;
    std::string summary_path;
};

/// Runs the full grid, writing trials.csv, summary.csv and manifest.json into
/// c.output_dir. Output bytes do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& c, std::size_t threads = 1);

[[nodiscard]] std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

[[nodiscard]] std::string csv_header(bool with_witness);
[[nodiscard]] std::string csv_row(const TrialRecord& r, bool with_witness);
void write_summary(std::ostream& os, const std::vector<SummaryRow>& rows);

/// Witness census at a fixed (d, n, k, lambda); the planted support is the
/// rooted block {1..k}, which is tree-connected for any d.
struct WitnessConfig {
    std::size_t d = 400;
    std::size_t n = 400;
    std::size_t k = 80;
    double lambda = 1.0;
    std::size_t trials = 20;
    std::uint64_t master_seed = 20240101;
    bool record_runtime = false;
};

[[nodiscard]] TrialRecord run_witness_trial(const WitnessConfig& c, std::size_t trial);
[[nodiscard]] std::vector<TrialRecord> run_witness_census(const WitnessConfig& c, std::size_t threads = 1);
void write_csv(std::ostream& os, const std::vector<TrialRecord>& records);

/// Worker count from an explicit flag (0 = unset), STRUCTURED_PCA_THREADS, or hardware.
[[nodiscard]] std::size_t resolve_threads(std::size_t flag);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace spca::bench
