#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spca/model.hpp"
#include "spca/structures.hpp"

namespace spca {

struct PPMConfig {
    std::size_t max_iters = 100;
    bool record_trace = true;
    /// Stop once ||v_{t+1} - v_t|| <= stop_tol; 0 disables.
    double stop_tol = 0.0;
};

struct EstimateTrace {
    Eigen::VectorXd final_iterate;
    std::vector<Eigen::VectorXd> iterates;          ///< v_0 .. v_T when recorded
    std::vector<AlignmentError> errors;             ///< against v* when supplied
    std::vector<SubspaceSupport> support_history;   ///< projection support of each iterate
    std::size_t iterations = 0;
    bool stopped_early = false;
};

/// Projected power method: v <- Pi_M(S v / ||S v||), renormalised, T times.
///
/// v0 must be a unit vector lying in the model. Throws DegenerateIterate
/// (carrying t) when S v_t = 0 or the projection vanishes.
[[nodiscard]] EstimateTrace projected_power_method(const Eigen::MatrixXd& sigma_hat, const SparsityStructure& s,
                                                   const Eigen::VectorXd& v0, const PPMConfig& config = {},
                                                   const std::optional<Eigen::VectorXd>& v_star = std::nullopt);

/// Soft-thresholds every entry of sigma_hat - I at tau / sqrt(n).
[[nodiscard]] Eigen::MatrixXd soft_threshold_covariance(const Eigen::MatrixXd& sigma_hat, std::size_t n, double tau);

enum class TauMode { paper_rule, explicit_value };

struct InitConfig {
    TauMode tau_mode = TauMode::paper_rule;
    double tau = 0.0;
    /// Stand-ins for the unvalued universal constants of the threshold rule.
    double c1_const = 1.0;
    double c2_const = 2.0;
};

/// tau* = c1 max(lambda, 1) sqrt(log(d / k^2)), then the three-branch rule
/// against sqrt(log d) / 2. Returns 0 when log(d/k^2) <= 0.
[[nodiscard]] double threshold_level(std::size_t d, std::size_t k, double lambda, const InitConfig& config);

struct InitResult {
    Eigen::VectorXd v0;
    SubspaceSupport support;
    double tau;
    std::vector<std::string> warnings;
};

/// Covariance thresholding with projection: leading eigenvector of G(tau)
/// projected onto the structure and normalised.
[[nodiscard]] InitResult initialize(const DataMatrix& x, const SparsityStructure& s, double lambda,
                                    const InitConfig& config = {});

/// Same as initialize() with the covariance and sample count supplied directly.
[[nodiscard]] InitResult initialize_from_covariance(const Eigen::MatrixXd& sigma_hat, std::size_t n,
                                                    const SparsityStructure& s, double lambda,
                                                    const InitConfig& config = {});

/// Plug-in eigengap estimate max(0, lambda_max(S) - 1). Heuristic: the
/// guarantees above assume lambda is known.
[[nodiscard]] double plug_in_lambda(const Eigen::MatrixXd& sigma_hat);

struct ExhaustiveResult {
    Eigen::VectorXd v_hat;
    SubspaceSupport support;
    double objective;
};

/// Global maximiser of v^T S v over unit vectors of the model, by enumeration.
[[nodiscard]] ExhaustiveResult exhaustive_search(const Eigen::MatrixXd& sigma_hat, const SparsityStructure& s,
                                                 double budget = kDefaultEnumerationBudget);

/// (2 sqrt 2 / lambda) rho(W, S_hat u S*), a certificate for the exhaustive-search error.
[[nodiscard]] double exhaustive_error_bound(const NoiseMatrix& w, const SubspaceSupport& support_hat,
                                            const SubspaceSupport& support_star, double lambda);

enum class Hypothesis { H0, H1 };

struct DetectorVerdict {
    double statistic;
    double threshold;
    Hypothesis decision;
};

/// 1 + lambda/4 - (1 + lambda) sqrt(k ln d / n).
[[nodiscard]] double detection_threshold(double lambda, std::size_t k, std::size_t d, std::size_t n);

/// Path-sparse detector: normalise the estimate (zero falls back to the first
/// member of the model), report v^T S v against detection_threshold().
[[nodiscard]] DetectorVerdict detect(const DataMatrix& x, const Eigen::VectorXd& estimate, double lambda,
                                     const SparsityStructure& path);

[[nodiscard]] DetectorVerdict detect_from_covariance(const Eigen::MatrixXd& sigma_hat, std::size_t n,
                                                     const Eigen::VectorXd& estimate, double lambda,
                                                     const SparsityStructure& path);

}  // namespace spca
