#include "spca/bench/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "spca/errors.hpp"
#include "spca/hardness.hpp"
#include "spca/linalg.hpp"
#include "spca/model.hpp"
#include "spca/rng.hpp"

namespace spca::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Stopwatch {
public:
    explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double elapsed_ms() const {
        if (!enabled_) {
            return 0.0;
        }
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

Eigen::VectorXd uniform_member(const SparsityStructure& s) {
    const SubspaceSupport first = first_support(s);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.dim()));
    for (auto i : first.indices()) {
        v[static_cast<Eigen::Index>(i)] = 1.0 / std::sqrt(static_cast<double>(first.size()));
    }
    return v;
}

TrialRecord base_record(const ExperimentConfig& c, std::size_t n, std::size_t trial, std::uint64_t seed, Method m) {
    TrialRecord r{};
    r.n = n;
    r.d = c.structure.d;
    r.k = c.structure.k;
    r.lambda = c.lambda;
    r.method = m;
    r.trial = trial;
    r.seed = seed;
    r.init_alignment = kNaN;
    return r;
}

void fill_errors(TrialRecord& r, const Eigen::VectorXd& estimate, const GroundTruth& truth) {
    const AlignmentError e = alignment_error(estimate, truth.v_star);
    r.l2_error = e.l2;
    r.frob_error = e.frob;
    r.support_recovered = support_of(estimate) == truth.support;
}

// Thresholding initialisation; a zero projection of the eigenvector falls
// back to the first member of the model so the trial still produces a row.
Eigen::VectorXd robust_init(const DataMatrix& x, const Eigen::MatrixXd& sigma_hat, const SparsityStructure& s,
                            const ExperimentConfig& c) {
    try {
        return initialize_from_covariance(sigma_hat, x.n(), s, c.lambda, c.init).v0;
    } catch (const DegenerateProjection&) {
        return uniform_member(s);
    }
}

TrialRecord run_ppm(const ExperimentConfig& c, const GroundTruth& truth, const DataMatrix& x,
                    const Eigen::MatrixXd& sigma_hat, Variant variant, Method m, std::size_t trial) {
    TrialRecord r = base_record(c, x.n(), trial, x.seed(), m);
    const Stopwatch clock(c.record_runtime);
    const SparsityStructure s = c.structure.build_as(variant);
    const Eigen::VectorXd v0 = robust_init(x, sigma_hat, s, c);
    r.init_alignment = std::abs(v0.dot(truth.v_star));
    PPMConfig ppm = c.ppm;
    ppm.record_trace = false;
    Eigen::VectorXd estimate = v0;
    try {
        const EstimateTrace trace = projected_power_method(sigma_hat, s, v0, ppm);
        estimate = trace.final_iterate;
        r.iterations = trace.iterations;
    } catch (const DegenerateIterate& e) {
        r.iterations = e.iteration();
    }
    fill_errors(r, estimate, truth);
    r.runtime_ms = clock.elapsed_ms();
    return r;
}

}  // namespace

GroundTruth make_ground_truth(const ExperimentConfig& c) {
    const SparsityStructure s = c.structure.build();
    GroundTruth t;
    t.sign_seed = rng::derive(c.master_seed, {0x7275746855ULL});
    if (c.truth == TruthMode::default_support) {
        t.v_star = signed_indicator(s.dim(), default_truth_support(s), t.sign_seed);
    } else {
        t.v_star = random_ground_truth(s, t.sign_seed);
    }
    t.support = support_of(t.v_star);
    return t;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial) {
    return rng::derive(master_seed, {0x73616d70ULL, n, trial});
}

std::vector<TrialRecord> run_trial(const ExperimentConfig& c, const GroundTruth& truth, std::size_t n,
                                   std::size_t trial) {
    const std::uint64_t seed = trial_seed(c.master_seed, n, trial);
    const SpikedModel model(c.lambda, truth.v_star);
    const DataMatrix x = sample(model, n, seed);
    const Eigen::MatrixXd sigma_hat = sample_covariance(x);
    std::vector<TrialRecord> out;
    for (auto m : c.methods) {
        switch (m) {
            case Method::ppm_tree:
                out.push_back(run_ppm(c, truth, x, sigma_hat, Variant::tree, m, trial));
                break;
            case Method::ppm_ksparse:
                out.push_back(run_ppm(c, truth, x, sigma_hat, Variant::ksparse, m, trial));
                break;
            case Method::ppm_path:
                out.push_back(run_ppm(c, truth, x, sigma_hat, Variant::path, m, trial));
                break;
            case Method::exhaustive: {
                TrialRecord r = base_record(c, n, trial, seed, m);
                const Stopwatch clock(c.record_runtime);
                const ExhaustiveResult es = exhaustive_search(sigma_hat, c.structure.build());
                fill_errors(r, es.v_hat, truth);
                r.runtime_ms = clock.elapsed_ms();
                out.push_back(r);
                break;
            }
            case Method::init_only: {
                TrialRecord r = base_record(c, n, trial, seed, m);
                const Stopwatch clock(c.record_runtime);
                const Eigen::VectorXd v0 = robust_init(x, sigma_hat, c.structure.build(), c);
                r.init_alignment = std::abs(v0.dot(truth.v_star));
                fill_errors(r, v0, truth);
                r.runtime_ms = clock.elapsed_ms();
                out.push_back(r);
                break;
            }
            case Method::sdp_witness: {
                TrialRecord r = base_record(c, n, trial, seed, m);
                const Stopwatch clock(c.record_runtime);
                const SdpCandidate w = build_witness(x, truth.support, c.structure.k);
                const EigenPair top = leading_eigenpair(w.m);
                fill_errors(r, top.vector, truth);
                r.witness = WitnessMetrics{w.feasibility.feasible(), w.feasibility.l1_mass, sdp_objective(w.m, sigma_hat),
                                           w.feasibility.psd_min_eig, spectral_gap_to_truth(w.m, truth.v_star)};
                r.runtime_ms = clock.elapsed_ms();
                out.push_back(r);
                break;
            }
        }
    }
    return out;
}

std::size_t resolve_threads(std::size_t flag) {
    if (flag > 0) {
        return flag;
    }
    if (const char* env = std::getenv("STRUCTURED_PCA_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::string csv_header(bool with_witness) {
    std::string h = "n,d,k,lambda,method,trial,seed,l2_error,frob_error,support_recovered,iterations,init_alignment,runtime_ms";
    if (with_witness) {
        h += ",feasible,l1_mass,objective,psd_min_eig,spectral_gap";
    }
    return h;
}

std::string csv_row(const TrialRecord& r, bool with_witness) {
    std::ostringstream os;
    os << r.n << ',' << r.d << ',' << r.k << ',' << fmt(r.lambda) << ',' << to_string(r.method) << ',' << r.trial << ','
       << r.seed << ',' << fmt(r.l2_error) << ',' << fmt(r.frob_error) << ',' << (r.support_recovered ? 1 : 0) << ','
       << r.iterations << ',' << fmt(r.init_alignment) << ',' << fmt(r.runtime_ms);
    if (with_witness) {
        if (r.witness) {
            os << ',' << (r.witness->feasible ? 1 : 0) << ',' << fmt(r.witness->l1_mass) << ',' << fmt(r.witness->objective) << ','
               << fmt(r.witness->psd_min_eig) << ',' << fmt(r.witness->spectral_gap);
        } else {
            os << ",,,,,";
        }
    }
    return os.str();
}

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
    const bool with_witness =
        std::any_of(records.begin(), records.end(), [](const TrialRecord& r) { return r.witness.has_value(); });
    os << csv_header(with_witness) << '\n';
    for (const auto& r : records) {
        os << csv_row(r, with_witness) << '\n';
    }
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
    std::vector<SummaryRow> out;
    // Records arrive grouped by n; keep first-seen method order within each n.
    std::vector<std::pair<std::size_t, Method>> keys;
    for (const auto& r : records) {
        const std::pair key{r.n, r.method};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            keys.push_back(key);
        }
    }
    for (const auto& [n, method] : keys) {
        SummaryRow row{n, method, 0, 0, 0, 0, 0, 0, 0};
        double sum_l2 = 0, sum_l2_sq = 0, sum_f = 0, sum_f_sq = 0, recovered = 0, sum_init = 0;
        std::size_t init_count = 0;
        for (const auto& r : records) {
            if (r.n != n || r.method != method) {
                continue;
            }
            ++row.trials;
            sum_l2 += r.l2_error;
            sum_l2_sq += r.l2_error * r.l2_error;
            sum_f += r.frob_error;
            sum_f_sq += r.frob_error * r.frob_error;
            recovered += r.support_recovered ? 1.0 : 0.0;
            if (!std::isnan(r.init_alignment)) {
                sum_init += r.init_alignment;
                ++init_count;
            }
        }
        const auto t = static_cast<double>(row.trials);
        auto sample_std = [t](double sum, double sum_sq) {
            if (t < 2) {
                return 0.0;
            }
            return std::sqrt(std::max(0.0, (sum_sq - sum * sum / t) / (t - 1)));
        };
        row.mean_l2 = sum_l2 / t;
        row.std_l2 = sample_std(sum_l2, sum_l2_sq);
        row.mean_frob = sum_f / t;
        row.std_frob = sample_std(sum_f, sum_f_sq);
        row.recovery_fraction = recovered / t;
        row.mean_init_alignment = init_count > 0 ? sum_init / static_cast<double>(init_count) : kNaN;
        out.push_back(row);
    }
    return out;
}

void write_summary(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "n,method,trials,mean_l2,std_l2,mean_frob,std_frob,recovery_fraction,mean_init_alignment\n";
    for (const auto& r : rows) {
        os << r.n << ',' << to_string(r.method) << ',' << r.trials << ',' << fmt(r.mean_l2) << ',' << fmt(r.std_l2)
           << ',' << fmt(r.mean_frob) << ',' << fmt(r.std_frob) << ',' << fmt(r.recovery_fraction) << ','
           << fmt(r.mean_init_alignment) << '\n';
    }
}

ExperimentResult run_experiment(const ExperimentConfig& c, std::size_t threads) {
    validate(c);
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(c.output_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory '" + c.output_dir + "': " + ec.message());
    }
    ExperimentResult result;
    result.csv_path = (fs::path(c.output_dir) / "trials.csv").string();
    result.summary_path = (fs::path(c.output_dir) / "summary.csv").string();

    const GroundTruth truth = make_ground_truth(c);
    {
        std::ofstream manifest(fs::path(c.output_dir) / "manifest.json");
        nlohmann::json m{{"csv_schema_version", kCsvSchemaVersion},
                         {"config", to_json(c)},
                         {"truth_support", truth.support.one_based()},
                         {"truth_sign_seed", truth.sign_seed}};
        std::vector<int> signs;
        for (auto i : truth.support.indices()) {
            signs.push_back(truth.v_star[static_cast<Eigen::Index>(i)] > 0 ? 1 : -1);
        }
        m["truth_signs"] = signs;
        manifest << m.dump(2) << '\n';
        if (!manifest) {
            throw std::runtime_error("failed writing manifest.json");
        }
    }

    std::ofstream csv(result.csv_path);
    if (!csv) {
        throw std::runtime_error("cannot open '" + result.csv_path + "' for writing");
    }
    const bool with_witness = std::find(c.methods.begin(), c.methods.end(), Method::sdp_witness) != c.methods.end();
    csv << csv_header(with_witness) << '\n';

    for (const std::size_t n : c.n_grid) {
        std::vector<std::vector<TrialRecord>> per_trial(c.trials);
        parallel_for(c.trials, threads, [&](std::size_t trial) { per_trial[trial] = run_trial(c, truth, n, trial); });
        for (const auto& rows : per_trial) {
            for (const auto& r : rows) {
                csv << csv_row(r, with_witness) << '\n';
                result.records.push_back(r);
            }
        }
        csv.flush();
        if (!csv) {
            throw std::runtime_error("failed writing '" + result.csv_path + "'");
        }
    }

    result.summary = summarize(result.records);
    std::ofstream summary(result.summary_path);
    write_summary(summary, result.summary);
    if (!summary) {
        throw std::runtime_error("failed writing '" + result.summary_path + "'");
    }
    return result;
}

TrialRecord run_witness_trial(const WitnessConfig& c, std::size_t trial) {
    if (c.k < 1 || c.k > c.d) {
        throw std::invalid_argument("witness census requires 1 <= k <= d");
    }
    std::vector<std::size_t> block(c.k);
    for (std::size_t i = 0; i < c.k; ++i) {
        block[i] = i;
    }
    const SubspaceSupport support(block);
    const std::uint64_t seed = trial_seed(c.master_seed, c.n, trial);
    const Eigen::VectorXd v_star = signed_indicator(c.d, support, rng::derive(seed, {0x7369676eULL}));
    const Stopwatch clock(c.record_runtime);
    const DataMatrix x = sample(SpikedModel(c.lambda, v_star), c.n, seed);
    const Eigen::MatrixXd sigma_hat = sample_covariance(x);
    const SdpCandidate w = build_witness(x, support, c.k);
    const EigenPair top = leading_eigenpair(w.m);

    TrialRecord r{};
    r.n = c.n;
    r.d = c.d;
    r.k = c.k;
    r.lambda = c.lambda;
    r.method = Method::sdp_witness;
    r.trial = trial;
    r.seed = seed;
    const AlignmentError e = alignment_error(top.vector, v_star);
    r.l2_error = e.l2;
    r.frob_error = e.frob;
    r.support_recovered = project(SparsityStructure(KSparse{c.d, c.k}), top.vector).support == support;
    r.iterations = 0;
    r.init_alignment = kNaN;
    r.witness = WitnessMetrics{w.feasibility.feasible(), w.feasibility.l1_mass, sdp_objective(w.m, sigma_hat), w.feasibility.psd_min_eig,
                               spectral_gap_to_truth(w.m, v_star)};
    r.runtime_ms = clock.elapsed_ms();
    return r;
}

std::vector<TrialRecord> run_witness_census(const WitnessConfig& c, std::size_t threads) {
    std::vector<TrialRecord> out(c.trials);
    parallel_for(c.trials, threads, [&](std::size_t t) { out[t] = run_witness_trial(c, t); });
    return out;
}

}  // namespace spca::bench
