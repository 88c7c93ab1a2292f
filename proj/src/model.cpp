#include "spca/model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "spca/errors.hpp"
#include "spca/linalg.hpp"
#include "spca/rng.hpp"

namespace spca {

SpikedModel::SpikedModel(double lambda, Eigen::VectorXd v_star) : lambda_(lambda), v_star_(std::move(v_star)) {
    if (v_star_.size() == 0) {
        throw std::invalid_argument("SpikedModel: dimension must be positive");
    }
    if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) {
        throw std::invalid_argument("SpikedModel: lambda must be finite and non-negative");
    }
    const double norm = v_star_.norm();
    const bool null_vector = lambda_ == 0.0 && norm == 0.0;
    if (!null_vector && std::abs(norm - 1.0) > 1e-12) {
        throw std::invalid_argument("SpikedModel: v_star must be a unit vector");
    }
}

SpikedModel SpikedModel::null_model(std::size_t d) {
    return SpikedModel(0.0, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)));
}

Eigen::MatrixXd SpikedModel::covariance() const {
    const auto d = v_star_.size();
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(d, d);
    sigma.noalias() += lambda_ * v_star_ * v_star_.transpose();
    return sigma;
}

DataMatrix::DataMatrix(Eigen::MatrixXd entries, std::uint64_t seed) : entries_(std::move(entries)), seed_(seed) {
    if (entries_.rows() == 0 || entries_.cols() == 0) {
        throw std::invalid_argument("DataMatrix: empty sample matrix");
    }
}

NoiseMatrix::NoiseMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("NoiseMatrix: not square");
    }
}

DataMatrix sample(const SpikedModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("sample: n must be positive");
    }
    const auto d = static_cast<Eigen::Index>(model.dim());
    auto engine = rng::make_engine(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), d);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            x(i, j) = gauss(engine);
        }
    }
    if (model.lambda() > 0.0) {
        const double stretch = std::sqrt(1.0 + model.lambda()) - 1.0;
        const Eigen::VectorXd proj = x * model.v_star();
        x.noalias() += stretch * proj * model.v_star().transpose();
    }
    return DataMatrix(std::move(x), seed);
}

Eigen::MatrixXd sample_covariance(const DataMatrix& x) {
    const auto& e = x.entries();
    Eigen::MatrixXd gram = (e.transpose() * e) / static_cast<double>(x.n());
    return (gram + gram.transpose()) / 2.0;
}

NoiseMatrix noise_matrix(const Eigen::MatrixXd& sigma_hat, const SpikedModel& model) {
    const auto d = static_cast<Eigen::Index>(model.dim());
    if (sigma_hat.rows() != d || sigma_hat.cols() != d) {
        throw std::invalid_argument("noise_matrix: dimension mismatch");
    }
    Eigen::MatrixXd w = sigma_hat - model.covariance();
    return NoiseMatrix((w + w.transpose()) / 2.0);
}

double rho(const Eigen::MatrixXd& m, const SubspaceSupport& f) {
    if (f.empty()) {
        throw std::invalid_argument("rho: empty support");
    }
    if (m.rows() != m.cols() || !f.within(static_cast<std::size_t>(m.rows()))) {
        throw std::invalid_argument("rho: support index out of range");
    }
    return spectral_norm_symmetric(principal_submatrix(m, f.indices()));
}

WorstCaseTriple worst_case_rho_triple(const NoiseMatrix& w, const SparsityStructure& s, double budget) {
    if (w.dim() != s.dim()) {
        throw std::invalid_argument("worst_case_rho_triple: dimension mismatch");
    }
    const double count = count_supports(s);
    const double required = count * count * count;
    if (required > budget) {
        throw BudgetExceeded("worst_case_rho_triple over " + s.describe(), required, budget);
    }
    const auto supports = enumerate_supports(s);
    WorstCaseTriple best{-1.0, {}};
    for (std::size_t a = 0; a < supports.size(); ++a) {
        for (std::size_t b = a; b < supports.size(); ++b) {
            const SubspaceSupport ab = supports[a].unite(supports[b]);
            for (std::size_t c = b; c < supports.size(); ++c) {
                const double value = rho(w.entries(), ab.unite(supports[c]));
                if (value > best.value) {
                    best = {value, {supports[a], supports[b], supports[c]}};
                }
            }
        }
    }
    return best;
}

ConvergenceDiagnostics good_region_diagnostics(double lambda, double rho_f) {
    ConvergenceDiagnostics out{rho_f, std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN(), false};
    if (!(lambda > 2.0 * rho_f)) {
        return out;
    }
    const double gap = lambda - 2.0 * rho_f;
    const double base = 4.0 / (lambda + 1.0 - rho_f);
    out.t1 = base + 5.0 * rho_f / gap;
    out.t2 = base + 10.0 * rho_f / gap;
    out.eigengap_ok = out.t2 < 1.0;
    return out;
}

AlignmentError alignment_error(const Eigen::VectorXd& v_hat, const Eigen::VectorXd& v_star, double unit_tol) {
    if (v_hat.size() != v_star.size()) {
        throw std::invalid_argument("alignment_error: dimension mismatch");
    }
    if (std::abs(v_hat.norm() - 1.0) > unit_tol || std::abs(v_star.norm() - 1.0) > unit_tol) {
        throw std::invalid_argument("alignment_error: inputs must be unit vectors");
    }
    const double cos = std::min(1.0, std::abs(v_hat.dot(v_star)));
    const double l2 = std::min((v_hat - v_star).norm(), (v_hat + v_star).norm());
    const double frob = std::sqrt(std::max(0.0, 2.0 - 2.0 * cos * cos));
    return {l2, frob, cos};
}

}  // namespace spca
