#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

#include "spca/errors.hpp"
#include "spca/linalg.hpp"
#include "spca/model.hpp"
#include "spca/structures.hpp"

using namespace spca;

TEST(Linalg, LeadingEigenpairMatchesJacobi) {
    for (Eigen::Index d : {1, 2, 5, 17, 40}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Eigen::MatrixXd m = oracle::random_symmetric(d, 1000 * static_cast<std::uint64_t>(d) + seed);
            const auto ref = oracle::jacobi_eigen(m);
            for (const auto& got : {leading_eigenpair(m), leading_eigenpair_power(m, 1e-10, 2000000)}) {
                EXPECT_NEAR(got.value, ref.values[d - 1], 1e-8 * std::max(1.0, std::abs(ref.values[d - 1])));
                EXPECT_NEAR(std::abs(got.vector.dot(ref.vectors.col(d - 1))), 1.0, 1e-6);
                EXPECT_NEAR(got.vector.norm(), 1.0, 1e-12);
            }
            EXPECT_NEAR(min_eigenvalue(m), ref.values[0], 1e-9);
            EXPECT_NEAR(spectral_norm_symmetric(m), oracle::jacobi_spectral_radius(m), 1e-9);
        }
    }
}

TEST(Linalg, IndefiniteInputReturnsAlgebraicMaximum) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m.diagonal() << -5.0, 1.0, 0.5;
    const auto e = leading_eigenpair(m);
    EXPECT_NEAR(e.value, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(e.vector[1]), 1.0, 1e-12);
    EXPECT_NEAR(leading_eigenpair_power(m).value, 1.0, 1e-9);
}

TEST(Linalg, SignConvention) {
    Eigen::VectorXd v(3);
    v << 0.0, -2.0, 1.0;
    fix_sign(v);
    EXPECT_GT(v[1], 0.0);
    const auto e = leading_eigenpair(oracle::random_symmetric(6, 3));
    for (Eigen::Index i = 0; i < e.vector.size(); ++i) {
        if (e.vector[i] != 0.0) {
            EXPECT_GT(e.vector[i], 0.0);
            break;
        }
    }
}

TEST(Model, Validation) {
    EXPECT_THROW(SpikedModel(2.0, Eigen::VectorXd::Ones(3)), std::invalid_argument);
    EXPECT_THROW(SpikedModel(-1.0, Eigen::VectorXd::Unit(3, 0)), std::invalid_argument);
    EXPECT_NO_THROW(SpikedModel(0.0, Eigen::VectorXd::Zero(3)));
    const auto null = SpikedModel::null_model(4);
    EXPECT_EQ(null.covariance(), Eigen::MatrixXd::Identity(4, 4));
    EXPECT_THROW((void)sample(null, 0, 1), std::invalid_argument);
}

TEST(Model, SamplingIsSeededAndMatchesCovariance) {
    Eigen::VectorXd v_star = Eigen::VectorXd::Zero(5);
    v_star[0] = v_star[3] = 1.0 / std::sqrt(2.0);
    const SpikedModel model(3.0, v_star);
    const DataMatrix a = sample(model, 20000, 42);
    EXPECT_EQ(a.entries(), sample(model, 20000, 42).entries());
    EXPECT_NE(a.entries(), sample(model, 20000, 43).entries());
    EXPECT_EQ(a.seed(), 42u);
    const Eigen::MatrixXd s = sample_covariance(a);
    EXPECT_EQ(s, s.transpose());
    EXPECT_LT((s - model.covariance()).cwiseAbs().maxCoeff(), 0.1);
    EXPECT_NEAR(v_star.dot(s * v_star), 4.0, 0.15);
    const NoiseMatrix w = noise_matrix(s, model);
    EXPECT_TRUE(w.entries().isApprox(s - model.covariance()));
}

TEST(Model, RhoIsRestrictedSpectralRadius) {
    const Eigen::MatrixXd m = oracle::random_symmetric(12, 9);
    for (const auto& f : {SubspaceSupport({0}), SubspaceSupport({1, 4, 7}), SubspaceSupport({0, 2, 3, 5, 8, 11})}) {
        const double r = rho(m, f);
        EXPECT_NEAR(r, oracle::jacobi_spectral_radius(principal_submatrix(m, f.indices())), 1e-10);
        EXPECT_LE(oracle::sampled_restricted_norm(m, f.indices(), 500, 1), r + 1e-12);
    }
    EXPECT_NEAR(rho(m, SubspaceSupport({2})), std::abs(m(2, 2)), 1e-15);
    EXPECT_THROW((void)rho(m, SubspaceSupport()), std::invalid_argument);
}

TEST(Model, WorstCaseTripleMatchesBruteForce) {
    const SparsityStructure s(TreeSparse{3, 2});
    const NoiseMatrix w(oracle::random_symmetric(7, 77));
    const auto got = worst_case_rho_triple(w, s);
    const auto all = oracle::brute_tree_supports(7, 2);
    double best = 0.0;
    for (const auto& a : all) {
        for (const auto& b : all) {
            for (const auto& c : all) {
                oracle::IndexSet u = a;
                u.insert(u.end(), b.begin(), b.end());
                u.insert(u.end(), c.begin(), c.end());
                std::sort(u.begin(), u.end());
                u.erase(std::unique(u.begin(), u.end()), u.end());
                best = std::max(best, oracle::jacobi_spectral_radius(principal_submatrix(w.entries(), u)));
            }
        }
    }
    EXPECT_NEAR(got.value, best, 1e-10);

    const auto zero = worst_case_rho_triple(NoiseMatrix(Eigen::MatrixXd::Zero(7, 7)), s);
    EXPECT_EQ(zero.value, 0.0);
    EXPECT_EQ(zero.supports[0], first_support(s));
    EXPECT_EQ(zero.supports[2], first_support(s));

    EXPECT_THROW((void)worst_case_rho_triple(NoiseMatrix(Eigen::MatrixXd::Zero(15, 15)), SparsityStructure(TreeSparse{4, 4}), 10),
                 BudgetExceeded);
}

TEST(Model, GoodRegionDiagnostics) {
    const auto a = good_region_diagnostics(40.0, 1.0);
    EXPECT_NEAR(a.t1, 4.0 / 40.0 + 5.0 / 38.0, 1e-15);
    EXPECT_NEAR(a.t2, 4.0 / 40.0 + 10.0 / 38.0, 1e-15);
    EXPECT_TRUE(a.eigengap_ok);
    const auto b = good_region_diagnostics(10.0, 1.0);
    EXPECT_NEAR(b.t2, 0.4 + 1.25, 1e-15);
    EXPECT_FALSE(b.eigengap_ok);
    const auto c = good_region_diagnostics(2.0, 1.0);
    EXPECT_TRUE(std::isnan(c.t1));
    EXPECT_TRUE(std::isnan(c.t2));
    EXPECT_FALSE(c.eigengap_ok);
    // More noise never helps.
    for (double r = 0.0; r < 4.0; r += 0.25) {
        EXPECT_LE(good_region_diagnostics(10.0, r).t2, good_region_diagnostics(10.0, r + 0.25).t2);
    }
}

TEST(Model, AlignmentError) {
    const Eigen::VectorXd e0 = Eigen::VectorXd::Unit(3, 0);
    const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 1);
    const auto same = alignment_error(e0, -e0);
    EXPECT_EQ(same.l2, 0.0);
    EXPECT_EQ(same.frob, 0.0);
    EXPECT_EQ(same.cos, 1.0);
    const auto orth = alignment_error(e0, e1);
    EXPECT_NEAR(orth.l2, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(orth.frob, std::sqrt(2.0), 1e-15);
    EXPECT_EQ(orth.cos, 0.0);
    const Eigen::VectorXd u = (e0 + e1).normalized();
    const auto half = alignment_error(u, e0);
    EXPECT_NEAR(half.l2, std::sqrt(2.0 - std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(half.frob, 1.0, 1e-15);
    EXPECT_THROW((void)alignment_error(2.0 * e0, e1), std::invalid_argument);
}
