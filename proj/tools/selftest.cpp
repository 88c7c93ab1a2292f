// Quick consistency checks against the independent oracles; the full
// property suites live under tests/.

#include <cmath>
#include <ostream>
#include <string>

#include "oracles.hpp"

#include "spca/linalg.hpp"
#include "spca/model.hpp"
#include "spca/structures.hpp"

namespace {

spca::oracle::IndexSet indices(const spca::SubspaceSupport& s) { return s.indices(); }

bool check_projection(const spca::SparsityStructure& s, const std::vector<spca::oracle::IndexSet>& brute,
                      std::uint64_t seed, std::size_t draws) {
    for (std::size_t t = 0; t < draws; ++t) {
        const auto v = spca::oracle::random_vector(static_cast<Eigen::Index>(s.dim()), seed + t);
        const auto best = spca::oracle::best_support(v, brute);
        const auto p = spca::project(s, v);
        if (indices(p.support) != best.support) {
            return false;
        }
    }
    return true;
}

}  // namespace

int run_selftest(std::ostream& os) {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        os << (ok ? "ok   " : "FAIL ") << name << '\n';
        failures += ok ? 0 : 1;
    };

    {
        const spca::SparsityStructure tree(spca::TreeSparse{4, 5});
        const auto brute = spca::oracle::brute_tree_supports(15, 5);
        report("tree projection matches brute force (h=4, k=5)", check_projection(tree, brute, 11, 100));
        report("tree support count matches shape count",
               static_cast<std::size_t>(spca::count_supports(tree)) == spca::oracle::catalan_truncated_count(4, 5) &&
                   brute.size() == spca::oracle::catalan_truncated_count(4, 5));
    }
    {
        const spca::SparsityStructure path(spca::PathSparse{14, 3});
        report("path projection matches brute force (d=14, k=3)",
               check_projection(path, spca::oracle::brute_path_supports(14, 3), 23, 100));
    }
    {
        const spca::SparsityStructure ks(spca::KSparse{12, 4});
        report("k-sparse projection matches brute force (d=12, k=4)",
               check_projection(ks, spca::oracle::brute_ksparse_supports(12, 4), 37, 100));
    }
    {
        bool ok = true;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto m = spca::oracle::random_symmetric(20, 100 + seed);
            const auto jac = spca::oracle::jacobi_eigen(m);
            const auto top = spca::leading_eigenpair(m);
            ok = ok && std::abs(top.value - jac.values[19]) < 1e-9 &&
                 std::abs(std::abs(top.vector.dot(jac.vectors.col(19))) - 1.0) < 1e-8;
        }
        report("leading eigenpair matches Jacobi rotations", ok);
    }
    {
        const auto m = spca::oracle::random_symmetric(15, 7);
        const spca::SubspaceSupport f({0, 1, 3, 7});
        const double r = spca::rho(m, f);
        const double lower = spca::oracle::sampled_restricted_norm(m, f.indices(), 2000, 5);
        const double exact = spca::oracle::jacobi_spectral_radius(spca::principal_submatrix(m, f.indices()));
        report("rho is the restricted spectral radius", lower <= r + 1e-12 && std::abs(exact - r) < 1e-9);
    }

    os << (failures == 0 ? "selftest passed" : "selftest failed: " + std::to_string(failures) + " check(s)") << '\n';
    return failures;
}
