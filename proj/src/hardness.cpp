#include "spca/hardness.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>
#include <stdexcept>

#include "spca/linalg.hpp"

namespace spca {

FeasibilityReport check_feasibility(const Eigen::MatrixXd& m, std::size_t k) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("check_feasibility: expected a non-empty square matrix");
    }
    FeasibilityReport r{};
    r.trace = m.trace();
    r.trace_error = std::abs(r.trace - 1.0);
    r.l1_mass = m.cwiseAbs().sum();
    r.l1_slack = static_cast<double>(k) - r.l1_mass;
    r.psd_min_eig = min_eigenvalue((m + m.transpose()) / 2.0);
    r.monotone_slack = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < m.rows(); ++i) {
        const Eigen::Index parent = (i - 1) / 2;
        const double slack = m(parent, parent) - m(i, i);
        r.monotone_slack = std::min(r.monotone_slack, slack);
        if (slack < -kMonotoneTol && !r.first_monotone_violation) {
            r.first_monotone_violation = static_cast<std::size_t>(i) + 1;
        }
    }
    r.trace_ok = r.trace_error <= kTraceTol;
    r.l1_ok = r.l1_slack >= -kL1Tol;
    r.psd_ok = r.psd_min_eig >= -kPsdTol;
    r.monotone_ok = !r.first_monotone_violation.has_value();
    return r;
}

SdpCandidate build_witness(const DataMatrix& x, const SubspaceSupport& support_star, std::size_t k) {
    const auto& e = x.entries();
    const auto n = static_cast<double>(x.n());
    const auto d = e.cols();
    if (!support_star.within(static_cast<std::size_t>(d))) {
        throw std::invalid_argument("build_witness: support out of range");
    }
    std::vector<Eigen::Index> off;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!support_star.contains(static_cast<std::size_t>(i))) {
            off.push_back(i);
        }
    }
    Eigen::MatrixXd normalised(e.rows(), static_cast<Eigen::Index>(off.size()));
    for (std::size_t c = 0; c < off.size(); ++c) {
        const double norm = e.col(off[c]).norm();
        if (!(norm > 0.0)) {
            throw std::invalid_argument("build_witness: zero column " + std::to_string(off[c] + 1));
        }
        normalised.col(static_cast<Eigen::Index>(c)) = std::sqrt(n) * e.col(off[c]) / norm;
    }
    for (auto i : support_star.indices()) {
        if (!(e.col(static_cast<Eigen::Index>(i)).norm() > 0.0)) {
            throw std::invalid_argument("build_witness: zero column " + std::to_string(i + 1));
        }
    }
    const double scale = 1.0 / (static_cast<double>(d) * n);
    const Eigen::MatrixXd gram = scale * (normalised.transpose() * normalised);

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t a = 0; a < off.size(); ++a) {
        for (std::size_t b = 0; b < off.size(); ++b) {
            m(off[a], off[b]) = gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }
    }
    m = (m + m.transpose()).eval() / 2.0;
    // Normalised columns have squared norm n, so every diagonal entry is 1/d.
    m.diagonal().setConstant(1.0 / static_cast<double>(d));
    return {m, check_feasibility(m, k)};
}

double sdp_objective(const Eigen::MatrixXd& m, const Eigen::MatrixXd& sigma_hat) {
    if (m.rows() != sigma_hat.rows() || m.cols() != sigma_hat.cols()) {
        throw std::invalid_argument("sdp_objective: dimension mismatch");
    }
    return m.cwiseProduct(sigma_hat).sum();
}

double spectral_gap_to_truth(const Eigen::MatrixXd& m, const Eigen::VectorXd& v_star) {
    if (m.rows() != v_star.size()) {
        throw std::invalid_argument("spectral_gap_to_truth: dimension mismatch");
    }
    const Eigen::MatrixXd diff = m - v_star * v_star.transpose();
    return spectral_norm_symmetric((diff + diff.transpose()) / 2.0);
}

}  // namespace spca
