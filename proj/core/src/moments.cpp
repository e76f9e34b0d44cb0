#include "quasiboot/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "quasiboot/errors.hpp"

namespace quasiboot {

MomentVector::MomentVector(std::vector<double> values) : m(std::move(values)) {
    if (m.empty()) throw SpecError("moment vector must contain m0");
    if (m[0] != 1.0) throw SpecError("moment vector must start with m0 = 1");
    for (double v : m)
        if (!std::isfinite(v)) throw MomentNotFinite("non-finite moment entry");
}

double MomentVector::central(int k) const {
    if (k < 0 || k > order()) throw SpecError("central moment order out of range");
    const double mu = mean();
    double acc = 0.0;
    for (int j = 0; j <= k; ++j)
        acc += binomial(k, j) * m[static_cast<size_t>(j)] * std::pow(-mu, k - j);
    return acc;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

double double_factorial_odd(int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= 2 * i - 1;
    return v;
}

MomentVector shifted_scaled_moments(const MomentVector& x, double shift,
                                    double scale) {
    const int K = x.order();
    std::vector<double> out(static_cast<size_t>(K) + 1, 0.0);
    out[0] = 1.0;
    // E (scale (X - shift))^k = scale^k sum_j C(k,j) E X^j (-shift)^{k-j}
    for (int k = 1; k <= K; ++k) {
        double acc = 0.0;
        for (int j = 0; j <= k; ++j)
            acc += binomial(k, j) * x[j] * std::pow(-shift, k - j);
        out[static_cast<size_t>(k)] = std::pow(scale, k) * acc;
    }
    return MomentVector(out);
}

MomentVector convolve_moments(const MomentVector& x, const MomentVector& y) {
    const int K = std::min(x.order(), y.order());
    std::vector<double> out(static_cast<size_t>(K) + 1, 0.0);
    out[0] = 1.0;
    for (int k = 1; k <= K; ++k) {
        double acc = 0.0;
        for (int j = 0; j <= k; ++j) acc += binomial(k, j) * x[j] * y[k - j];
        out[static_cast<size_t>(k)] = acc;
    }
    return MomentVector(out);
}

MomentVector gaussian_raw_moments(double mean, double var, int order) {
    if (var < 0.0) throw SpecError("negative Gaussian variance");
    std::vector<double> out(static_cast<size_t>(order) + 1, 0.0);
    out[0] = 1.0;
    // E X^k = sum_{2l <= k} C(k,2l) (2l-1)!! var^l mean^{k-2l}
    for (int k = 1; k <= order; ++k) {
        double acc = 0.0;
        for (int l = 0; 2 * l <= k; ++l)
            acc += binomial(k, 2 * l) * double_factorial_odd(l) *
                   std::pow(var, l) * std::pow(mean, k - 2 * l);
        out[static_cast<size_t>(k)] = acc;
    }
    return MomentVector(out);
}

}  // namespace quasiboot
