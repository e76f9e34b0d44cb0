#pragma once

// Scalar source laws for the experiments, with exact closed-form raw
// moments, deterministic sampling, and an exact text form.
//
// Text grammar (whitespace between tokens is ignored when parsing; the
// serializer emits the canonical compact form with shortest round-trip
// number literals, so parse(to_string(spec)) reproduces the spec bit for
// bit):
//
//   lognormal(sigma=1,std)              (ln N(0,s^2) - mean) / sd
//   lognormal(sigma=1.5,centered)        ln N(0,s^2) - mean   (no rescale)
//   chisq1c                              chi^2_1 - 1
//   pareto(xm=0.5,a=4.1,shift=0.66,scale=4.33)
//                                        scale * (Pareto(xm,a) - shift)
//   gauss(mean=0,var=1)                  N(mean, var)
//   conv(var_z=0.04,atom=<spec>)         N(0,var_z) + atom, independent
//   atomic(nodes=[-1,1],probs=[0.5,0.5]) finite support
//
// Every variant has finite raw moments through order 4 (Pareto therefore
// requires shape a > 4); higher orders may throw MomentNotFinite.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quasiboot/moments.hpp"
#include "quasiboot/rng.hpp"

namespace quasiboot {

class DistributionSpec {
  public:
    struct Lognormal {
        double sigma = 1.0;
        bool standardized = true;  // false: centered only, variance kept
    };
    struct CenteredChiSq1 {};
    struct Pareto {  // law of scale * (P - shift), P ~ Pareto(xm, a)
        double xm = 0.5;
        double a = 4.1;
        double shift = 0.0;
        double scale = 1.0;
    };
    struct Gaussian {
        double mean = 0.0;
        double var = 1.0;
    };
    struct Convolution {  // N(0, var_z) + atom draw, independent
        double var_z = 0.0;
        std::shared_ptr<const DistributionSpec> atom;
    };
    struct FiniteAtomic {  // nodes strictly increasing, probs >= 0, sum 1
        std::vector<double> nodes;
        std::vector<double> probs;
    };

    using Variant = std::variant<Lognormal, CenteredChiSq1, Pareto, Gaussian,
                                 Convolution, FiniteAtomic>;

    // Factories validate parameters and throw SpecError on bad input.
    static DistributionSpec lognormal(double sigma, bool standardized = true);
    static DistributionSpec chisq1c();
    static DistributionSpec pareto(double xm, double a, double shift = 0.0,
                                   double scale = 1.0);
    static DistributionSpec gaussian(double mean, double var);
    static DistributionSpec convolution(double var_z, DistributionSpec atom);
    static DistributionSpec finite_atomic(std::vector<double> nodes,
                                          std::vector<double> probs);

    static DistributionSpec parse(std::string_view text);
    // Parse a spec embedded in a larger grammar, starting at text[pos] and
    // advancing pos past the spec.
    static DistributionSpec parse_prefix(std::string_view text, size_t& pos);
    std::string to_string() const;

    const Variant& v() const { return v_; }
    bool operator==(const DistributionSpec& other) const;

  private:
    explicit DistributionSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// Raw moments E X^k, k = 0..order.  Throws MomentNotFinite when the order
// is not integrable (Pareto order >= shape).
MomentVector raw_moments(const DistributionSpec& spec, int order);

double dist_mean(const DistributionSpec& spec);
double dist_variance(const DistributionSpec& spec);

// Affine parameters making scale * (X - shift) zero-mean unit-variance.
struct AffineStd {
    double shift;
    double scale;
};
AffineStd standardize(const DistributionSpec& spec);

double sample_scalar(const DistributionSpec& spec, RngStream& rng);

// Fill `out` with i.i.d. coordinates sharing the scalar spec.  Dispatch on
// the variant happens once per call, so per-row filling stays cheap.
void sample_vector(const DistributionSpec& spec, std::span<double> out,
                   RngStream& rng);

// Shortest round-trip literal for a double (the canonical number format).
std::string format_double(double v);

}  // namespace quasiboot
