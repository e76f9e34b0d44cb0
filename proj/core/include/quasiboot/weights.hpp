#pragma once

// Multiplier weight schemes for the weighted bootstrap.
//
// A valid scheme draws i.i.d. weights e with
//     E e = 0,   E e^2 = 1,   E e^3 = 1,   E e^4 < infinity.
// All built-in schemes are Gaussian mixtures  e = z + u  with independent
// z ~ N(0, var_z) and a centered, scaled atom u:
//
//   expmix       sqrt(1 - 2^{-2/3}) z + 2^{-1/3} (e - 1),      e ~ Exp(1)
//   chisqmix     z / sqrt(2)        + (c - 1) / 2,             c ~ chi^2_1
//   bernmix(b)   sqrt(var_z) z + sigma_u (beta - b),        beta ~ Bern(b)
//                with sigma_u = (b(1-b)(1-2b))^{-1/3} forcing E u^3 = 1 and
//                var_z = 1 - b(1-b) sigma_u^2 topping variance up to one;
//                feasible only for b <= (5 - sqrt 5)/10 = 0.27639...
//   gauss        z ~ N(0,1) alone -- the classical baseline; it meets the
//                mean/variance conditions but has E e^3 = 0 by symmetry
//                (validate_scheme flags this; it is not a construction error)
//   custom(var_z=...,atom=...)   N(0, var_z) + any distribution spec
//
// Text forms are exactly the names above; parse/serialize round-trips.

#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "quasiboot/distributions.hpp"
#include "quasiboot/moments.hpp"
#include "quasiboot/rng.hpp"

namespace quasiboot {

// sigma_u and var_z solved from the third-moment and variance conditions.
struct BernoulliMixSolution {
    double b;
    double sigma_u;
    double var_z;
};

// Throws InfeasibleMixture when var_z would be negative (b too large) or b
// is outside (0, 1/2).
BernoulliMixSolution solve_bernoulli_mix(double b);

class WeightScheme {
  public:
    struct ExpMix {};
    struct ChiSqMix {};
    struct BernoulliMix {
        BernoulliMixSolution sol;
    };
    struct PureGaussian {};
    struct Custom {
        double var_z;
        DistributionSpec atom;
    };
    using Variant =
        std::variant<ExpMix, ChiSqMix, BernoulliMix, PureGaussian, Custom>;

    static WeightScheme expmix();
    static WeightScheme chisqmix();
    static WeightScheme bernoulli_mix(double b);
    static WeightScheme pure_gaussian();
    static WeightScheme custom(double var_z, DistributionSpec atom);

    static WeightScheme parse(std::string_view text);
    std::string to_string() const;

    const Variant& v() const { return v_; }

  private:
    explicit WeightScheme(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// Exact raw moments of one weight, order >= 4 supported for all built-ins.
MomentVector scheme_moments(const WeightScheme& scheme, int order = 4);

// Fill `out` with i.i.d. weights.  Per-weight stream consumption is fixed:
//   expmix 1 normal + 1 exponential   chisqmix 2 normals
//   bernmix 1 normal + 1 uniform      gauss    1 normal
//   custom  1 normal + atom draws
void draw_weights(const WeightScheme& scheme, std::span<double> out,
                  RngStream& rng);

// Moment-condition report.  PureGaussian fails third_moment_ok by design.
struct SchemeValidation {
    double m1, m2, m3, m4;
    bool mean_ok, variance_ok, third_moment_ok, fourth_finite;
    bool all_ok() const {
        return mean_ok && variance_ok && third_moment_ok && fourth_finite;
    }
};
SchemeValidation validate_scheme(const WeightScheme& scheme, double tol = 1e-9);

// The unique two-point law with moments (0, 1, 1): nodes (1 -+ sqrt 5)/2
// with probabilities (1 +- 1/sqrt 5)/2; fourth moment 2.  This is the
// zero-Gaussian boundary of the Bernoulli mixture family, and the finite
// support makes exact enumeration oracles possible.
DistributionSpec two_point_surrogate();

}  // namespace quasiboot
