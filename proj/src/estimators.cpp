#include "spca/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spca/errors.hpp"
#include "spca/linalg.hpp"

namespace spca {

EstimateTrace projected_power_method(const Eigen::MatrixXd& sigma_hat, const SparsityStructure& s,
                                     const Eigen::VectorXd& v0, const PPMConfig& config,
                                     const std::optional<Eigen::VectorXd>& v_star) {
    const auto d = static_cast<Eigen::Index>(s.dim());
    if (sigma_hat.rows() != d || sigma_hat.cols() != d || v0.size() != d) {
        throw std::invalid_argument("projected_power_method: dimension mismatch");
    }
    if (config.max_iters < 1) {
        throw std::invalid_argument("projected_power_method: max_iters must be >= 1");
    }
    if (std::abs(v0.norm() - 1.0) > kUnitNormTol || !in_model(s, v0)) {
        throw std::invalid_argument("projected_power_method: v0 must be a unit vector in the model");
    }
    if (v_star && v_star->size() != d) {
        throw std::invalid_argument("projected_power_method: v_star dimension mismatch");
    }

    EstimateTrace trace;
    auto record = [&](const Eigen::VectorXd& v, SubspaceSupport support) {
        if (config.record_trace) {
            trace.iterates.push_back(v);
        }
        if (v_star) {
            trace.errors.push_back(alignment_error(v, *v_star));
        }
        trace.support_history.push_back(std::move(support));
    };

    Eigen::VectorXd v = v0;
    record(v, project(s, v).support);
    for (std::size_t t = 0; t < config.max_iters; ++t) {
        const Eigen::VectorXd sv = sigma_hat * v;
        const double norm = sv.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw DegenerateIterate(t);
        }
        Projection p = project(s, sv / norm);
        const double pnorm = p.projected.norm();
        if (!(pnorm > 0.0)) {
            throw DegenerateIterate(t);
        }
        Eigen::VectorXd next = p.projected / pnorm;
        const double step = (next - v).norm();
        v = std::move(next);
        ++trace.iterations;
        record(v, std::move(p.support));
        if (config.stop_tol > 0.0 && step <= config.stop_tol) {
            trace.stopped_early = trace.iterations < config.max_iters;
            break;
        }
    }
    trace.final_iterate = std::move(v);
    return trace;
}

Eigen::MatrixXd soft_threshold_covariance(const Eigen::MatrixXd& sigma_hat, std::size_t n, double tau) {
    if (n < 1 || !(tau >= 0.0)) {
        throw std::invalid_argument("soft_threshold_covariance: requires n >= 1 and tau >= 0");
    }
    const double level = tau / std::sqrt(static_cast<double>(n));
    const auto d = sigma_hat.rows();
    Eigen::MatrixXd g(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const double centred = sigma_hat(i, j) - (i == j ? 1.0 : 0.0);
            if (centred >= level) {
                g(i, j) = centred - level;
            } else if (centred <= -level) {
                g(i, j) = centred + level;
            } else {
                g(i, j) = 0.0;
            }
        }
    }
    return g;
}

double threshold_level(std::size_t d, std::size_t k, double lambda, const InitConfig& config) {
    if (config.tau_mode == TauMode::explicit_value) {
        return config.tau;
    }
    const double ratio = static_cast<double>(d) / (static_cast<double>(k) * static_cast<double>(k));
    const double log_ratio = std::log(ratio);
    if (!(log_ratio > 0.0)) {
        return 0.0;
    }
    const double tau_star = config.c1_const * std::max(lambda, 1.0) * std::sqrt(log_ratio);
    const double cut = std::sqrt(std::log(static_cast<double>(d))) / 2.0;
    if (tau_star <= cut) {
        return tau_star;
    }
    if (tau_star >= cut) {
        return config.c2_const * tau_star;
    }
    return 0.0;
}

InitResult initialize_from_covariance(const Eigen::MatrixXd& sigma_hat, std::size_t n, const SparsityStructure& s,
                                      double lambda, const InitConfig& config) {
    const auto d = static_cast<Eigen::Index>(s.dim());
    if (sigma_hat.rows() != d || sigma_hat.cols() != d) {
        throw std::invalid_argument("initialize: dimension mismatch");
    }
    if (config.tau_mode == TauMode::explicit_value && !(config.tau >= 0.0)) {
        throw std::invalid_argument("initialize: tau must be non-negative");
    }
    InitResult out;
    const double kk = static_cast<double>(s.k()) * static_cast<double>(s.k());
    if (kk > static_cast<double>(s.dim()) / std::exp(1.0)) {
        out.warnings.emplace_back("k^2 > d/e: outside the regime where thresholding initialisation is guaranteed");
    }
    if (config.tau_mode == TauMode::paper_rule && !(std::log(static_cast<double>(s.dim()) / kk) > 0.0)) {
        out.warnings.emplace_back("log(d/k^2) <= 0: threshold set to zero");
    }
    out.tau = threshold_level(s.dim(), s.k(), lambda, config);
    const Eigen::MatrixXd g = soft_threshold_covariance(sigma_hat, n, out.tau);
    const EigenPair top = leading_eigenpair(g);
    Projection p = project_normalized(s, top.vector);
    out.v0 = std::move(p.projected);
    out.support = std::move(p.support);
    return out;
}

InitResult initialize(const DataMatrix& x, const SparsityStructure& s, double lambda, const InitConfig& config) {
    return initialize_from_covariance(sample_covariance(x), x.n(), s, lambda, config);
}

double plug_in_lambda(const Eigen::MatrixXd& sigma_hat) {
    return std::max(0.0, leading_eigenpair(sigma_hat).value - 1.0);
}

ExhaustiveResult exhaustive_search(const Eigen::MatrixXd& sigma_hat, const SparsityStructure& s, double budget) {
    const auto d = static_cast<Eigen::Index>(s.dim());
    if (sigma_hat.rows() != d || sigma_hat.cols() != d) {
        throw std::invalid_argument("exhaustive_search: dimension mismatch");
    }
    ExhaustiveResult best{Eigen::VectorXd::Zero(d), {}, -std::numeric_limits<double>::infinity()};
    Eigen::VectorXd best_local;
    for_each_support(
        s,
        [&](const SubspaceSupport& support) {
            const EigenPair pair = leading_eigenpair(principal_submatrix(sigma_hat, support.indices()));
            if (pair.value > best.objective) {
                best.objective = pair.value;
                best.support = support;
                best_local = pair.vector;
            }
        },
        budget);
    const auto& idx = best.support.indices();
    for (std::size_t a = 0; a < idx.size(); ++a) {
        best.v_hat[static_cast<Eigen::Index>(idx[a])] = best_local[static_cast<Eigen::Index>(a)];
    }
    fix_sign(best.v_hat);
    return best;
}

double exhaustive_error_bound(const NoiseMatrix& w, const SubspaceSupport& support_hat,
                              const SubspaceSupport& support_star, double lambda) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("exhaustive_error_bound: lambda must be positive");
    }
    return 2.0 * std::sqrt(2.0) / lambda * rho(w.entries(), support_hat.unite(support_star));
}

double detection_threshold(double lambda, std::size_t k, std::size_t d, std::size_t n) {
    return 1.0 + lambda / 4.0 -
           (1.0 + lambda) * std::sqrt(static_cast<double>(k) * std::log(static_cast<double>(d)) / static_cast<double>(n));
}

DetectorVerdict detect_from_covariance(const Eigen::MatrixXd& sigma_hat, std::size_t n,
                                       const Eigen::VectorXd& estimate, double lambda, const SparsityStructure& path) {
    if (path.variant() != Variant::path) {
        throw std::invalid_argument("detect: requires a path structure");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("detect: lambda must be positive");
    }
    const auto d = static_cast<Eigen::Index>(path.dim());
    if (sigma_hat.rows() != d || estimate.size() != d) {
        throw std::invalid_argument("detect: dimension mismatch");
    }
    Eigen::VectorXd v;
    const double norm = estimate.norm();
    if (norm > 0.0) {
        v = estimate / norm;
    } else {
        v = Eigen::VectorXd::Zero(d);
        const SubspaceSupport first = first_support(path);
        const double m = 1.0 / std::sqrt(static_cast<double>(first.size()));
        for (auto i : first.indices()) {
            v[static_cast<Eigen::Index>(i)] = m;
        }
    }
    DetectorVerdict out{};
    out.statistic = v.dot(sigma_hat * v);
    out.threshold = detection_threshold(lambda, path.k(), path.dim(), n);
    out.decision = out.statistic >= out.threshold ? Hypothesis::H1 : Hypothesis::H0;
    return out;
}

DetectorVerdict detect(const DataMatrix& x, const Eigen::VectorXd& estimate, double lambda,
                       const SparsityStructure& path) {
    return detect_from_covariance(sample_covariance(x), x.n(), estimate, lambda, path);
}

}  // namespace spca
