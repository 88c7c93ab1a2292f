#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "spca/structures.hpp"
#include "spca/support.hpp"

namespace spca {

inline constexpr double kUnitNormTol = 1e-9;

/// Ground truth of the spiked Wishart model N(0, lambda v* v*^T + I).
class SpikedModel {
public:
    /// v_star must be unit norm (1e-12) unless lambda = 0, where zero is allowed.
    SpikedModel(double lambda, Eigen::VectorXd v_star);

    /// Null model: lambda = 0, v* = 0.
    static SpikedModel null_model(std::size_t d);

    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(v_star_.size()); }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] const Eigen::VectorXd& v_star() const noexcept { return v_star_; }

    /// Sigma = lambda v* v*^T + I.
    [[nodiscard]] Eigen::MatrixXd covariance() const;

private:
    double lambda_;
    Eigen::VectorXd v_star_;
};

/// n x d sample matrix; rows are observations.
class DataMatrix {
public:
    DataMatrix(Eigen::MatrixXd entries, std::uint64_t seed = 0);

    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.cols()); }
    [[nodiscard]] const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

private:
    Eigen::MatrixXd entries_;
    std::uint64_t seed_;
};

/// W = Sigma_hat - Sigma, symmetric by construction.
class NoiseMatrix {
public:
    explicit NoiseMatrix(Eigen::MatrixXd entries);
    [[nodiscard]] const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }

private:
    Eigen::MatrixXd entries_;
};

/// Draws n rows as x = z + (sqrt(1 + lambda) - 1)(v*^T z) v*, z ~ N(0, I).
[[nodiscard]] DataMatrix sample(const SpikedModel& model, std::size_t n, std::uint64_t seed);

/// X^T X / n, symmetrised.
[[nodiscard]] Eigen::MatrixXd sample_covariance(const DataMatrix& x);

[[nodiscard]] NoiseMatrix noise_matrix(const Eigen::MatrixXd& sigma_hat, const SpikedModel& model);

/// max |v^T M v| over unit v supported on F: the spectral radius of M_F.
[[nodiscard]] double rho(const Eigen::MatrixXd& m, const SubspaceSupport& f);

struct WorstCaseTriple {
    double value;
    std::array<SubspaceSupport, 3> supports;
};

inline constexpr double kDefaultTripleBudget = 1e6;

/// Maximises rho(W, L_a + L_b + L_c) over unordered triples (with repetition)
/// of the structure's supports. Requires M^3 <= budget.
[[nodiscard]] WorstCaseTriple worst_case_rho_triple(const NoiseMatrix& w, const SparsityStructure& s,
                                                    double budget = kDefaultTripleBudget);

struct ConvergenceDiagnostics {
    double rho_f;
    double t1;  ///< NaN when lambda <= 2 rho
    double t2;  ///< NaN when lambda <= 2 rho
    bool eigengap_ok;
};

/// Good-region threshold t1 and eigengap-condition value t2 at noise level rho_f.
[[nodiscard]] ConvergenceDiagnostics good_region_diagnostics(double lambda, double rho_f);

struct AlignmentError {
    double l2;    ///< min(||a - b||, ||a + b||)
    double frob;  ///< ||a a^T - b b^T||_F
    double cos;   ///< |<a, b>|
};

/// Sign-invariant distances between unit vectors; throws on non-unit input.
[[nodiscard]] AlignmentError alignment_error(const Eigen::VectorXd& v_hat, const Eigen::VectorXd& v_star,
                                             double unit_tol = kUnitNormTol);

}  // namespace spca
