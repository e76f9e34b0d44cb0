#include "quasiboot/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "quasiboot/analysis.hpp"
#include "quasiboot/bootstrap.hpp"
#include "quasiboot/errors.hpp"
#include "quasiboot/moment_match.hpp"
#include "quasiboot/regression.hpp"
#include "quasiboot/rng.hpp"

namespace quasiboot {

namespace {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Workers pull repetition indices from a shared counter; fn(worker, rep)
// must write only to per-worker or per-rep slots.  First worker exception
// is rethrown after the join.
template <typename Fn>
void run_parallel(int reps, int threads, Fn&& fn) {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
    const auto loop = [&](int w) {
        try {
            for (;;) {
                const int r = next.fetch_add(1, std::memory_order_relaxed);
                if (r >= reps) break;
                fn(w, r);
            }
        } catch (...) {
            errors[static_cast<size_t>(w)] = std::current_exception();
        }
    };
    if (threads == 1) {
        loop(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int w = 0; w < threads; ++w) pool.emplace_back(loop, w);
        for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

void check_common(const ExperimentConfig& config) {
    if (config.n < 1 || config.p < 1)
        throw ConfigError("n and p must be positive");
    if (config.resolved_reps() < 1) throw ConfigError("reps must be positive");
    if (config.boot < 1) throw ConfigError("boot must be positive");
    if (config.levels.empty()) throw ConfigError("levels must be nonempty");
    for (const double l : config.levels)
        if (!(l > 0.0 && l < 1.0))
            throw ConfigError("levels must lie strictly in (0, 1)");
}

void check_budget(const ExperimentConfig& config, long double cost) {
    if (config.force) return;
    if (cost > static_cast<long double>(config.budget))
        throw BudgetExceeded(
            "run cost exceeds the configured budget; raise budget= or pass "
            "force");
}

struct LevelCounts {
    std::vector<long long> hits;  // poor man's padding-free per-worker bins
};

CoverageTable counts_to_table(const ExperimentConfig& config,
                              const std::string& kind,
                              const std::string& x_label,
                              const std::string& scheme_label,
                              const std::vector<long long>& totals) {
    const int R = config.resolved_reps();
    CoverageTable table;
    table.rows.reserve(config.levels.size());
    for (size_t l = 0; l < config.levels.size(); ++l) {
        CoverageRow row;
        row.kind = kind;
        row.n = config.n;
        row.p = config.p;
        row.x_dist = x_label;
        row.scheme = scheme_label;
        row.level = config.levels[l];
        row.frequency = static_cast<double>(totals[l]) / R;
        row.mc_se = std::sqrt(row.frequency * (1.0 - row.frequency) / R);
        row.reps = R;
        row.boot = config.boot;
        row.seed = config.seed;
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace

int ExperimentConfig::resolved_reps() const {
    if (reps > 0) return reps;
    return kind == ExperimentKind::cdf ? 15000 : 7000;
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::coverage: return "coverage";
        case ExperimentKind::cdf: return "cdf";
        case ExperimentKind::regression: return "regression";
        case ExperimentKind::weights_check: return "weights-check";
        case ExperimentKind::moment_fit: return "moment-fit";
    }
    throw SpecError("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& text) {
    std::string t = text;
    std::replace(t.begin(), t.end(), '_', '-');
    if (t == "coverage") return ExperimentKind::coverage;
    if (t == "cdf") return ExperimentKind::cdf;
    if (t == "regression") return ExperimentKind::regression;
    if (t == "weights-check") return ExperimentKind::weights_check;
    if (t == "moment-fit") return ExperimentKind::moment_fit;
    throw ConfigError("unknown experiment kind '" + text + "'");
}

CoverageTable run_coverage(const ExperimentConfig& config) {
    check_common(config);
    const DistributionSpec x = DistributionSpec::parse(config.x_dist);
    const WeightScheme scheme = WeightScheme::parse(config.scheme);
    const std::string x_label = x.to_string();
    const std::string scheme_label = scheme.to_string();

    const int R = config.resolved_reps();
    const int B = config.boot;
    const int n = config.n, p = config.p;
    check_budget(config, static_cast<long double>(R) * B * n * p);

    const std::uint64_t tag =
        fnv1a64("coverage|n=" + std::to_string(n) + "|p=" + std::to_string(p) +
                "|x=" + x_label + "|scheme=" + scheme_label +
                "|B=" + std::to_string(B));

    const int threads = resolve_threads(config.threads);
    const size_t L = config.levels.size();
    std::vector<LevelCounts> local(static_cast<size_t>(threads));
    for (auto& lc : local) lc.hits.assign(L, 0);

    std::vector<Sample> samples(static_cast<size_t>(threads), Sample(n, p));
    std::vector<ReplicateScratch> scratch(static_cast<size_t>(threads));

    run_parallel(R, threads, [&](int w, int r) {
        Sample& s = samples[static_cast<size_t>(w)];
        ReplicateScratch& sc = scratch[static_cast<size_t>(w)];
        RngStream rng = RngStream::derive(config.seed, tag,
                                          static_cast<std::uint64_t>(r));
        sample_vector(x, s.data, rng);
        const double t = euclidean_norm(scaled_sum(s));
        replicate_norms(s, scheme, B, rng, sc);
        std::sort(sc.norms.begin(), sc.norms.end());
        for (size_t l = 0; l < L; ++l) {
            const QuantileEstimate q =
                quantile_from_sorted(sc.norms, 1.0 - config.levels[l]);
            if (t <= q.value) ++local[static_cast<size_t>(w)].hits[l];
        }
    });

    std::vector<long long> totals(L, 0);
    for (const LevelCounts& lc : local)
        for (size_t l = 0; l < L; ++l) totals[l] += lc.hits[l];
    return counts_to_table(config, "coverage", x_label, scheme_label, totals);
}

CdfDataset run_cdf_experiment(const ExperimentConfig& config) {
    check_common(config);
    const DistributionSpec x = DistributionSpec::parse(config.x_dist);
    const double vx = dist_variance(x);
    if (!(vx > 0.0)) throw ConfigError("cdf: x law needs positive variance");

    DistributionSpec y = DistributionSpec::gaussian(0.0, 1.0);
    if (config.y_dist == "auto") {
        const GaussianParetoSplit split =
            fit_gaussian_pareto_split(raw_moments(x, 4), config.shape);
        y = split.convolution;
    } else {
        y = DistributionSpec::parse(config.y_dist);
    }

    const int R = config.resolved_reps();
    const int n = config.n, p = config.p;
    check_budget(config, 2.0L * R * n * p);

    CdfDataset out;
    out.n = n;
    out.p = p;
    out.reps = R;
    out.seed = config.seed;
    out.x_dist = x.to_string();
    out.y_dist = y.to_string();
    out.statistic = (p == 1) ? "signed" : "norm_sq";
    out.reference = (p == 1) ? "normal" : "chisq";
    out.values_sn.assign(static_cast<size_t>(R), 0.0);
    out.values_syn.assign(static_cast<size_t>(R), 0.0);

    const std::uint64_t tag =
        fnv1a64("cdf|n=" + std::to_string(n) + "|p=" + std::to_string(p) +
                "|x=" + out.x_dist + "|y=" + out.y_dist);

    const int threads = resolve_threads(config.threads);
    std::vector<Sample> samples(static_cast<size_t>(threads), Sample(n, p));

    const bool is_signed = (p == 1);
    run_parallel(R, threads, [&](int w, int r) {
        Sample& s = samples[static_cast<size_t>(w)];
        RngStream rng = RngStream::derive(config.seed, tag,
                                          static_cast<std::uint64_t>(r));
        const auto statistic = [&](const DistributionSpec& law) {
            sample_vector(law, s.data, rng);
            const std::vector<double> sum = scaled_sum(s);
            if (is_signed) return sum[0];
            double sq = 0.0;
            for (const double v : sum) sq += v * v;
            return sq;
        };
        out.values_sn[static_cast<size_t>(r)] = statistic(x);   // X rows first
        out.values_syn[static_cast<size_t>(r)] = statistic(y);  // then Y rows
    });

    std::sort(out.values_sn.begin(), out.values_sn.end());
    std::sort(out.values_syn.begin(), out.values_syn.end());

    const EmpiricalCdf fx(out.values_sn);
    const EmpiricalCdf fy(out.values_syn);
    const auto reference = [&](double t) {
        return is_signed ? normal_cdf(t / std::sqrt(vx))
                         : chi_squared_cdf(p, t / vx);
    };
    out.ks_sn_syn = ks_two_sample(fx, fy);
    out.ks_sn_ref = ks_to_reference(fx, reference);
    out.ks_syn_ref = ks_to_reference(fy, reference);
    return out;
}

CoverageTable run_regression_coverage(const ExperimentConfig& config) {
    check_common(config);
    const DistributionSpec err = DistributionSpec::parse(config.error_dist);
    const WeightScheme scheme = WeightScheme::parse(config.scheme);
    const std::string err_label = err.to_string();
    const std::string scheme_label = scheme.to_string();

    const int R = config.resolved_reps();
    const int B = config.boot;
    const int n = config.n, p = config.p;
    check_budget(config, static_cast<long double>(R) * B * n * p);

    DesignMatrix design = [&] {
        if (config.design == "fourier") return DesignMatrix::fourier(n, p);
        if (config.design != "gaussian")
            throw ConfigError("design must be 'gaussian' or 'fourier'");
        const std::uint64_t dtag =
            fnv1a64("regression-design|n=" + std::to_string(n) +
                    "|p=" + std::to_string(p) + "|design=gaussian");
        RngStream rng = RngStream::derive(config.seed, dtag, 0);
        return DesignMatrix::gaussian(n, p, rng);
    }();

    const RegressionModel model{
        std::vector<double>(static_cast<size_t>(p), config.theta_star), err};

    const std::uint64_t tag =
        fnv1a64("regression|n=" + std::to_string(n) + "|p=" + std::to_string(p) +
                "|err=" + err_label + "|scheme=" + scheme_label +
                "|B=" + std::to_string(B) + "|design=" + config.design);

    const int threads = resolve_threads(config.threads);
    const size_t L = config.levels.size();
    std::vector<LevelCounts> local(static_cast<size_t>(threads));
    for (auto& lc : local) lc.hits.assign(L, 0);

    std::vector<Sample> samples(static_cast<size_t>(threads), Sample(n, p));
    std::vector<ReplicateScratch> scratch(static_cast<size_t>(threads));

    run_parallel(R, threads, [&](int w, int r) {
        Sample& s = samples[static_cast<size_t>(w)];
        ReplicateScratch& sc = scratch[static_cast<size_t>(w)];
        RngStream rng = RngStream::derive(config.seed, tag,
                                          static_cast<std::uint64_t>(r));
        const Response resp = simulate_response(design, model, rng);
        const double t = t_statistic(design, resp.y, model.theta_star);
        if (config.residual_mode) {
            fill_score_sample(design, ols_residuals(design, resp.y), s);
        } else {
            fill_score_sample(design, resp.errors, s);
        }
        replicate_norms(s, scheme, B, rng, sc);
        std::sort(sc.norms.begin(), sc.norms.end());
        for (size_t l = 0; l < L; ++l) {
            const QuantileEstimate q =
                quantile_from_sorted(sc.norms, 1.0 - config.levels[l]);
            if (t <= q.value) ++local[static_cast<size_t>(w)].hits[l];
        }
    });

    std::vector<long long> totals(L, 0);
    for (const LevelCounts& lc : local)
        for (size_t l = 0; l < L; ++l) totals[l] += lc.hits[l];
    return counts_to_table(config, "regression", err_label, scheme_label,
                           totals);
}

}  // namespace quasiboot
