#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace spca {

struct EigenPair {
    double value;
    Eigen::VectorXd vector;
    double residual;
};

inline constexpr double kDefaultEigenTol = 1e-10;
inline constexpr std::size_t kDefaultEigenMaxIter = 100000;

/// Above this dimension leading_eigenpair switches from a dense symmetric
/// decomposition to shifted power iteration.
inline constexpr Eigen::Index kDenseEigenLimit = 1500;

/// Eigenpair of the algebraically largest eigenvalue of a symmetric matrix.
///
/// Indefinite input is fine. The returned vector has unit norm and its first
/// nonzero coordinate positive. Throws NonConvergence when the residual
/// ||Mv - theta v|| exceeds tol * max(1, ||M||_inf) after max_iter steps.
[[nodiscard]] EigenPair leading_eigenpair(const Eigen::MatrixXd& m, double tol = kDefaultEigenTol,
                                          std::size_t max_iter = kDefaultEigenMaxIter);

/// Shifted power iteration; exposed so both routes can be exercised at small sizes.
[[nodiscard]] EigenPair leading_eigenpair_power(const Eigen::MatrixXd& m, double tol = kDefaultEigenTol,
                                                std::size_t max_iter = kDefaultEigenMaxIter);

[[nodiscard]] double min_eigenvalue(const Eigen::MatrixXd& m);

/// Largest absolute eigenvalue of a symmetric matrix.
[[nodiscard]] double spectral_norm_symmetric(const Eigen::MatrixXd& m);

/// Flips v so that its first nonzero coordinate is positive.
void fix_sign(Eigen::VectorXd& v);

/// Principal submatrix indexed by a sorted list of zero-based indices.
template <class Indices>
[[nodiscard]] Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& m, const Indices& idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            out(a, b) = m(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
        }
    }
    return out;
}

}  // namespace spca
