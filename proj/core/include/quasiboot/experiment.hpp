#pragma once

// Monte Carlo experiment harness.
//
// Every experiment is R independent repetitions indexed r = 0..R-1.  Each
// repetition derives its own RNG stream from (seed, experiment tag, r), so
// results are bitwise identical for any thread count: threads pull
// repetition indices from a shared counter, per-repetition outputs land in
// slot r, and coverage indicators are summed as integers.  The tag hashes
// the sampling-relevant parameters only (confidence levels are evaluated
// from one shared replicate set, so adding levels does not move any draw).

#include <cstdint>
#include <string>
#include <vector>

#include "quasiboot/distributions.hpp"
#include "quasiboot/weights.hpp"

namespace quasiboot {

enum class ExperimentKind { coverage, cdf, regression, weights_check, moment_fit };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& text);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::coverage;

    int n = 50;
    int p = 5;
    int reps = 0;     // 0 = default: 7000 (coverage/regression), 15000 (cdf)
    int boot = 1000;  // bootstrap replicates B per repetition

    // confidence levels; the bootstrap quantile is taken at alpha = 1-level
    std::vector<double> levels{0.975, 0.95, 0.90, 0.85, 0.80, 0.70, 0.60, 0.50};

    std::string x_dist = "chisq1c";
    std::string scheme = "bernmix(b=0.276)";
    std::string y_dist = "auto";  // cdf: "auto" fits the Gaussian+Pareto split
    std::string design = "gaussian";  // regression: "gaussian" | "fourier"
    std::string error_dist = "gauss(mean=0,var=1)";
    double theta_star = 0.0;     // regression: constant coefficient vector
    bool residual_mode = false;  // regression: reweight OLS residuals

    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency

    std::string out;  // output path ("" = stdout summary only)

    double tol = 1e-9;   // weights_check moment tolerance
    int order = 4;       // moment_fit: x moment order
    double shape = 4.1;  // moment_fit / cdf auto: target Pareto shape

    // guard against accidentally huge runs: R*B*n*p (coverage/regression)
    // or 2*R*n*p (cdf) must stay within budget unless force is set
    std::uint64_t budget = 500'000'000'000ull;
    bool force = false;

    int resolved_reps() const;
};

struct CoverageRow {
    std::string kind;  // "coverage" | "regression"
    int n = 0;
    int p = 0;
    std::string x_dist;  // error law for regression rows
    std::string scheme;
    double level = 0.0;      // confidence level 1 - alpha
    double frequency = 0.0;  // fraction of repetitions with T <= Q(alpha)
    double mc_se = 0.0;      // sqrt(f (1-f) / R)
    int reps = 0;
    int boot = 0;
    std::uint64_t seed = 0;
};

struct CoverageTable {
    std::vector<CoverageRow> rows;
};

struct CdfDataset {
    int n = 0;
    int p = 0;
    int reps = 0;
    std::uint64_t seed = 0;
    std::string x_dist;
    std::string y_dist;       // resolved (never "auto")
    std::string statistic;    // "signed" (p = 1) | "norm_sq"
    std::string reference;    // "normal" | "chisq"
    std::vector<double> values_sn;   // sorted ascending
    std::vector<double> values_syn;  // sorted ascending
    double ks_sn_syn = 0.0;
    double ks_sn_ref = 0.0;
    double ks_syn_ref = 0.0;
};

// P(T <= Q(alpha)) per level, T = ||S_n|| for freshly drawn X samples.
CoverageTable run_coverage(const ExperimentConfig& config);

// Empirical laws of S_n (data) and S_n^Y (quasi-Gaussian surrogate), as the
// signed scalar when p = 1 or the squared norm otherwise, each against its
// limiting reference (normal / chi-square, scaled by Var X).
CdfDataset run_cdf_experiment(const ExperimentConfig& config);

// Wild-bootstrap coverage for the regression t-statistic: the design is
// drawn once (or built deterministically for "fourier"), each repetition
// draws errors and reweights per-observation scores.
CoverageTable run_regression_coverage(const ExperimentConfig& config);

}  // namespace quasiboot
