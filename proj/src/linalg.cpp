#include "spca/linalg.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "spca/errors.hpp"
#include "spca/rng.hpp"

namespace spca {

namespace {

void check_square(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("expected a non-empty square matrix");
    }
}

double inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

double residual_of(const Eigen::MatrixXd& m, const Eigen::VectorXd& v, double theta) {
    return (m * v - theta * v).norm();
}

}  // namespace

void fix_sign(Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] != 0.0) {
            if (v[i] < 0.0) {
                v = -v;
            }
            return;
        }
    }
}

EigenPair leading_eigenpair(const Eigen::MatrixXd& m, double tol, std::size_t max_iter) {
    check_square(m);
    if (!(tol > 0.0)) {
        throw std::invalid_argument("leading_eigenpair: tol must be positive");
    }
    if (m.rows() > kDenseEigenLimit) {
        return leading_eigenpair_power(m, tol, max_iter);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NonConvergence(0, std::numeric_limits<double>::infinity());
    }
    const Eigen::Index top = m.rows() - 1;
    EigenPair out{solver.eigenvalues()[top], solver.eigenvectors().col(top), 0.0};
    out.vector.normalize();
    fix_sign(out.vector);
    out.residual = residual_of(m, out.vector, out.value);
    if (out.residual > tol * std::max(1.0, inf_norm(m))) {
        throw NonConvergence(0, out.residual);
    }
    return out;
}

EigenPair leading_eigenpair_power(const Eigen::MatrixXd& m, double tol, std::size_t max_iter) {
    check_square(m);
    const double scale = std::max(1.0, inf_norm(m));
    // The shift makes M + shift I positive semidefinite, so the dominant
    // eigenvalue of the shifted matrix is the algebraically largest of M.
    const double shift = inf_norm(m);
    auto engine = rng::make_engine(0x1ead5eedULL);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(m.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = gauss(engine);
    }
    v.normalize();
    double theta = v.dot(m * v);
    double residual = residual_of(m, v, theta);
    for (std::size_t it = 0; it < max_iter; ++it) {
        if (residual <= tol * scale) {
            fix_sign(v);
            return {theta, v, residual};
        }
        Eigen::VectorXd next = m * v + shift * v;
        const double norm = next.norm();
        if (!(norm > 0.0)) {
            // M = -shift I on the iterate's span: every vector is an eigenvector.
            fix_sign(v);
            return {theta, v, residual};
        }
        v = next / norm;
        theta = v.dot(m * v);
        residual = residual_of(m, v, theta);
    }
    if (residual <= tol * scale) {
        fix_sign(v);
        return {theta, v, residual};
    }
    throw NonConvergence(max_iter, residual);
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    check_square(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()[0];
}

double spectral_norm_symmetric(const Eigen::MatrixXd& m) {
    check_square(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

}  // namespace spca
