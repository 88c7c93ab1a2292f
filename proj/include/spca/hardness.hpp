#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "spca/model.hpp"
#include "spca/support.hpp"

namespace spca {

/// Constraint-by-constraint slack report for the tree-sparse SDP relaxation
///   max <S, M>  s.t.  tr M = 1,  sum |M_ij| <= k,  M >= 0,  M_ii <= M_pp (p = parent).
struct FeasibilityReport {
    double trace;
    double trace_error;        ///< |tr M - 1|
    double l1_mass;            ///< sum_ij |M_ij|
    double l1_slack;           ///< k - l1_mass
    double psd_min_eig;
    double monotone_slack;     ///< min over i >= 2 of M_pp - M_ii
    std::optional<std::size_t> first_monotone_violation;  ///< one-based node index
    bool trace_ok;
    bool l1_ok;
    bool psd_ok;
    bool monotone_ok;

    [[nodiscard]] bool feasible() const noexcept { return trace_ok && l1_ok && psd_ok && monotone_ok; }
};

inline constexpr double kTraceTol = 1e-9;
inline constexpr double kL1Tol = 1e-9;
inline constexpr double kPsdTol = 1e-8;
inline constexpr double kMonotoneTol = 1e-12;

/// A candidate point of the relaxation together with its feasibility report.
struct SdpCandidate {
    Eigen::MatrixXd m;
    FeasibilityReport feasibility;
};

[[nodiscard]] FeasibilityReport check_feasibility(const Eigen::MatrixXd& m, std::size_t k);

/// The explicit feasible point built from column-normalised data: diagonal
/// 1/d everywhere, Gram entries of the normalised columns / (dn) on the
/// complement of the planted support, zero elsewhere.
[[nodiscard]] SdpCandidate build_witness(const DataMatrix& x, const SubspaceSupport& support_star, std::size_t k);

/// <S, M>.
[[nodiscard]] double sdp_objective(const Eigen::MatrixXd& m, const Eigen::MatrixXd& sigma_hat);

/// ||M - v* v*^T||_2.
[[nodiscard]] double spectral_gap_to_truth(const Eigen::MatrixXd& m, const Eigen::VectorXd& v_star);

}  // namespace spca
