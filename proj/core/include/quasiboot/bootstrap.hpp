#pragma once

// Scaled sums, multiplier-bootstrap replicates, and the empirical upper
// quantile.
//
// For a sample X_1..X_n in R^p the statistic of interest is
//     S_n = n^{-1/2} sum_i X_i,
// and a bootstrap replicate reweights the same rows with i.i.d. multipliers
//     S_n^b = n^{-1/2} sum_i X_i e_i.
// Upper quantiles follow the conservative definition
//     Q(alpha) = inf{ t : P(||S_n^b|| > t) <= alpha },
// which over B replicate values is the order statistic of rank
//     m = B - floor(alpha B)
// (counting from 1).  Ties need no special casing: the rank-m value is the
// smallest order statistic whose exceedance count is within alpha.

#include <cstdint>
#include <span>
#include <vector>

#include "quasiboot/distributions.hpp"
#include "quasiboot/rng.hpp"
#include "quasiboot/weights.hpp"

namespace quasiboot {

struct Sample {
    int n = 0;
    int p = 0;
    std::vector<double> data;  // row-major, data[i*p + j]

    Sample() = default;
    Sample(int n_, int p_);

    std::span<const double> row(int i) const {
        return {data.data() + static_cast<size_t>(i) * p, static_cast<size_t>(p)};
    }
    std::span<double> row(int i) {
        return {data.data() + static_cast<size_t>(i) * p, static_cast<size_t>(p)};
    }

    // n rows of p i.i.d. coordinates; fills row 0 first, coordinates in
    // order within each row.
    static Sample draw(const DistributionSpec& spec, int n, int p,
                       RngStream& rng);
};

// S_n = n^{-1/2} sum of rows.
std::vector<double> scaled_sum(const Sample& s);

double euclidean_norm(std::span<const double> v);

// || n^{-1/2} sum_i eps_i X_i ||
double bootstrap_replicate_norm(const Sample& s, std::span<const double> eps);

struct QuantileEstimate {
    double alpha = 0.0;
    double value = 0.0;
    int replicates = 0;  // B
    int rank = 0;        // m = B - floor(alpha B), 1-based order statistic
};

// Rank of the upper-alpha order statistic among B values.  alpha*B is
// nudged by 1e-9 before flooring so decimal alphas act at their printed
// value (0.7 * 1000 rounds to 700, not 699).
int upper_quantile_rank(int B, double alpha);

// Q(alpha) over an unsorted value multiset (sorts a copy).
QuantileEstimate empirical_upper_quantile(std::vector<double> values,
                                          double alpha);

// Same, given values already sorted ascending (no copy, no sort).
QuantileEstimate quantile_from_sorted(const std::vector<double>& sorted,
                                      double alpha);

// Reusable buffers for the replicate kernel, so per-repetition work does
// not allocate.
struct ReplicateScratch {
    std::vector<double> eps;
    std::vector<double> acc;
    std::vector<double> norms;
};

// B replicate norms, fresh weights per replicate (replicates consume the
// stream in order b = 0..B-1, weights i = 0..n-1 within each).
void replicate_norms(const Sample& s, const WeightScheme& scheme, int B,
                     RngStream& rng, ReplicateScratch& scratch);
std::vector<double> replicate_norms(const Sample& s, const WeightScheme& scheme,
                                    int B, RngStream& rng);

// One shared replicate set evaluated at every alpha: draws B replicates,
// sorts once, then reads each alpha's rank.  Results are identical to
// re-running per alpha with the same stream.
std::vector<QuantileEstimate> bootstrap_quantile(const Sample& s,
                                                 const WeightScheme& scheme,
                                                 int B,
                                                 std::span<const double> alphas,
                                                 RngStream& rng);

}  // namespace quasiboot
