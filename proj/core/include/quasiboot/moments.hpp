#pragma once

// Raw-moment sequences and the small amount of algebra done on them:
// affine transforms, convolution (sums of independent variables), and
// Gaussian moment generation.  Everything downstream (weight validation,
// the deconvolution recursion, quadrature construction) is written in
// terms of these.

#include <vector>

namespace quasiboot {

// m[k] = E X^k for k = 0..order(); m[0] is always 1.
struct MomentVector {
    std::vector<double> m;

    MomentVector() : m{1.0} {}
    explicit MomentVector(std::vector<double> values);

    int order() const { return static_cast<int>(m.size()) - 1; }
    double operator[](int k) const { return m[static_cast<size_t>(k)]; }

    double mean() const { return m.at(1); }
    double variance() const { return m.at(2) - m.at(1) * m.at(1); }

    // E (X - mean)^k, defined for k <= order().
    double central(int k) const;

  private:
    using size_t = std::vector<double>::size_type;
};

// Exact in double for the small n used here (n <= ~50).
double binomial(int n, int k);

// (2k-1)!! = E Z^{2k} for standard normal Z;  double_factorial_odd(0) == 1.
double double_factorial_odd(int k);

// Moments of scale * (X - shift) from the moments of X.
MomentVector shifted_scaled_moments(const MomentVector& x, double shift,
                                    double scale);

// Moments of X + Y for independent X and Y, up to min(order, order).
MomentVector convolve_moments(const MomentVector& x, const MomentVector& y);

// Raw moments of N(mean, var) up to `order`.
MomentVector gaussian_raw_moments(double mean, double var, int order);

}  // namespace quasiboot
