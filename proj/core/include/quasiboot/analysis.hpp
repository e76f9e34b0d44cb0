#pragma once

// Empirical CDFs, exact Kolmogorov-Smirnov distances, chi-square tail
// utilities, and the Gaussian-shell anti-concentration bound.

#include <functional>
#include <vector>

namespace quasiboot {

class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(std::vector<double> values);  // sorts, keeps ties

    // F(x) = #{v <= x} / N
    double operator()(double x) const;

    const std::vector<double>& sorted() const { return values_; }
    int size() const { return static_cast<int>(values_.size()); }

  private:
    std::vector<double> values_;
};

// sup_x |F1(x) - F2(x)|, evaluated exactly over the merged jump set.
double ks_two_sample(const EmpiricalCdf& a, const EmpiricalCdf& b);

// sup_x |Fhat(x) - F(x)| for a continuous reference F: the maximum of
// |k/N - F(x_k)| and |(k-1)/N - F(x_k)| over sample points, with tied
// values collapsed to one jump.
double ks_to_reference(const EmpiricalCdf& ecdf,
                       const std::function<double(double)>& reference);

double normal_cdf(double x);

// Regularized lower incomplete gamma P(a, x); series for x < a+1, Lentz
// continued fraction otherwise.  Absolute error well below 1e-12 over the
// ranges used here.
double regularized_gamma_p(double a, double x);

// P(chi^2_p <= x)
double chi_squared_cdf(int p, double x);

// P(r <= ||Z|| <= r + eps) for Z ~ N(0, I_p)
double gaussian_shell_prob(int p, double r, double eps);

// sup_r P(r <= ||Z|| <= r + eps) over r in [0, sqrt(p) + 10], evaluated on
// a grid of step min(grid_step, eps/10) (grid_step <= 0 means eps/10).
double anti_concentration_sup(int p, double eps, double grid_step = 0.0);

}  // namespace quasiboot
