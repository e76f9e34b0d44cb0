#include "quasiboot/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quasiboot/errors.hpp"

namespace quasiboot {

EmpiricalCdf::EmpiricalCdf(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty()) throw SpecError("empirical cdf needs at least one value");
    for (double v : values_)
        if (std::isnan(v)) throw SpecError("empirical cdf value is NaN");
    std::sort(values_.begin(), values_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) /
           static_cast<double>(values_.size());
}

double ks_two_sample(const EmpiricalCdf& a, const EmpiricalCdf& b) {
    const std::vector<double>& x = a.sorted();
    const std::vector<double>& y = b.sorted();
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() || j < y.size()) {
        double t;
        if (i == x.size()) t = y[j];
        else if (j == y.size()) t = x[i];
        else t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= t) ++i;
        while (j < y.size() && y[j] <= t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx -
                                 static_cast<double>(j) / ny));
    }
    return d;
}

double ks_to_reference(const EmpiricalCdf& ecdf,
                       const std::function<double(double)>& reference) {
    const std::vector<double>& x = ecdf.sorted();
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    size_t k = 0;
    while (k < x.size()) {
        size_t last = k;  // collapse a run of tied values to one jump
        while (last + 1 < x.size() && x[last + 1] == x[k]) ++last;
        const double f = reference(x[k]);
        d = std::max(d, std::abs(static_cast<double>(last + 1) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(k) / n));
        k = last + 1;
    }
    return d;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// series expansion of P(a,x), valid and fast for x < a + 1
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// modified Lentz continued fraction for Q(a,x), x >= a + 1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 1000; ++k) {
        const double an = -static_cast<double>(k) * (k - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw SpecError("regularized_gamma_p requires a > 0");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chi_squared_cdf(int p, double x) {
    if (p < 1) throw SpecError("chi-square degrees of freedom must be >= 1");
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(0.5 * p, 0.5 * x);
}

double gaussian_shell_prob(int p, double r, double eps) {
    if (r < 0.0 || eps < 0.0)
        throw SpecError("shell probability requires r >= 0 and eps >= 0");
    const double hi = r + eps;
    return chi_squared_cdf(p, hi * hi) - chi_squared_cdf(p, r * r);
}

double anti_concentration_sup(int p, double eps, double grid_step) {
    if (p < 1 || !(eps > 0.0))
        throw SpecError("anti_concentration_sup requires p >= 1 and eps > 0");
    double step = eps / 10.0;
    if (grid_step > 0.0) step = std::min(grid_step, step);
    const double r_max = std::sqrt(static_cast<double>(p)) + 10.0;
    double sup = 0.0;
    const long long steps = static_cast<long long>(std::ceil(r_max / step));
    for (long long k = 0; k <= steps; ++k) {
        const double r = std::min(static_cast<double>(k) * step, r_max);
        sup = std::max(sup, gaussian_shell_prob(p, r, eps));
    }
    return sup;
}

}  // namespace quasiboot
