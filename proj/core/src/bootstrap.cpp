#include "quasiboot/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "quasiboot/errors.hpp"

namespace quasiboot {

Sample::Sample(int n_, int p_) : n(n_), p(p_) {
    if (n < 1 || p < 1) throw SpecError("sample requires n >= 1 and p >= 1");
    data.assign(static_cast<size_t>(n) * p, 0.0);
}

Sample Sample::draw(const DistributionSpec& spec, int n, int p,
                    RngStream& rng) {
    Sample s(n, p);
    for (int i = 0; i < n; ++i) sample_vector(spec, s.row(i), rng);
    return s;
}

std::vector<double> scaled_sum(const Sample& s) {
    std::vector<double> acc(static_cast<size_t>(s.p), 0.0);
    for (int i = 0; i < s.n; ++i) {
        const double* row = s.data.data() + static_cast<size_t>(i) * s.p;
        for (int j = 0; j < s.p; ++j) acc[static_cast<size_t>(j)] += row[j];
    }
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(s.n));
    for (double& v : acc) v *= inv_sqrt_n;
    return acc;
}

double euclidean_norm(std::span<const double> v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return std::sqrt(sq);
}

double bootstrap_replicate_norm(const Sample& s, std::span<const double> eps) {
    if (static_cast<int>(eps.size()) != s.n)
        throw SpecError("weight vector length must equal n");
    thread_local std::vector<double> acc;
    acc.assign(static_cast<size_t>(s.p), 0.0);
    for (int i = 0; i < s.n; ++i) {
        const double e = eps[static_cast<size_t>(i)];
        const double* row = s.data.data() + static_cast<size_t>(i) * s.p;
        for (int j = 0; j < s.p; ++j) acc[static_cast<size_t>(j)] += e * row[j];
    }
    double sq = 0.0;
    for (double v : acc) sq += v * v;
    // reciprocal multiply, matching the batch engine bit for bit
    return std::sqrt(sq * (1.0 / s.n));
}

int upper_quantile_rank(int B, double alpha) {
    if (B < 1) throw SpecError("quantile needs at least one replicate");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw SpecError("alpha must lie in (0,1), got " + format_double(alpha));
    // floor(alpha * B) with a one-sided nudge so decimal alphas behave as
    // printed (see header).
    const int fl = static_cast<int>(std::floor(alpha * B + 1e-9));
    int m = B - fl;
    if (m < 1) m = 1;  // alpha B within a nudge of B: smallest order statistic
    return m;
}

QuantileEstimate quantile_from_sorted(const std::vector<double>& sorted,
                                      double alpha) {
    const int B = static_cast<int>(sorted.size());
    const int m = upper_quantile_rank(B, alpha);
    return QuantileEstimate{alpha, sorted[static_cast<size_t>(m - 1)], B, m};
}

QuantileEstimate empirical_upper_quantile(std::vector<double> values,
                                          double alpha) {
    if (values.empty()) throw SpecError("quantile needs at least one replicate");
    std::sort(values.begin(), values.end());
    return quantile_from_sorted(values, alpha);
}

void replicate_norms(const Sample& s, const WeightScheme& scheme, int B,
                     RngStream& rng, ReplicateScratch& scratch) {
    if (B < 1) throw SpecError("replicate count B must be >= 1");
    const int n = s.n, p = s.p;
    scratch.eps.resize(static_cast<size_t>(n));
    scratch.acc.resize(static_cast<size_t>(p));
    scratch.norms.resize(static_cast<size_t>(B));

    const double inv_n = 1.0 / static_cast<double>(n);
    double* acc = scratch.acc.data();
    for (int b = 0; b < B; ++b) {
        draw_weights(scheme, scratch.eps, rng);
        for (int j = 0; j < p; ++j) acc[j] = 0.0;
        const double* row = s.data.data();
        for (int i = 0; i < n; ++i, row += p) {
            const double e = scratch.eps[static_cast<size_t>(i)];
            for (int j = 0; j < p; ++j) acc[j] += e * row[j];
        }
        double sq = 0.0;
        for (int j = 0; j < p; ++j) sq += acc[j] * acc[j];
        scratch.norms[static_cast<size_t>(b)] = std::sqrt(sq * inv_n);
    }
}

std::vector<double> replicate_norms(const Sample& s, const WeightScheme& scheme,
                                    int B, RngStream& rng) {
    ReplicateScratch scratch;
    replicate_norms(s, scheme, B, rng, scratch);
    return std::move(scratch.norms);
}

std::vector<QuantileEstimate> bootstrap_quantile(const Sample& s,
                                                 const WeightScheme& scheme,
                                                 int B,
                                                 std::span<const double> alphas,
                                                 RngStream& rng) {
    std::vector<double> norms = replicate_norms(s, scheme, B, rng);
    std::sort(norms.begin(), norms.end());
    std::vector<QuantileEstimate> out;
    out.reserve(alphas.size());
    for (double a : alphas) out.push_back(quantile_from_sorted(norms, a));
    return out;
}

}  // namespace quasiboot
