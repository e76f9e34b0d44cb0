#include "quasiboot/weights.hpp"

#include <cmath>
#include <utility>

#include "quasiboot/errors.hpp"
#include "spec_cursor.hpp"

namespace quasiboot {

namespace {

template <class... Ts>
struct overload : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overload(Ts...) -> overload<Ts...>;

// exp(1) and chi^2_1 raw moments: k! and (2k-1)!!
MomentVector exp1_raw_moments(int order) {
    std::vector<double> m(static_cast<size_t>(order) + 1);
    m[0] = 1.0;
    for (int k = 1; k <= order; ++k)
        m[static_cast<size_t>(k)] = m[static_cast<size_t>(k - 1)] * k;
    return MomentVector(std::move(m));
}

MomentVector chisq1_raw_moments(int order) {
    std::vector<double> m(static_cast<size_t>(order) + 1);
    for (int k = 0; k <= order; ++k)
        m[static_cast<size_t>(k)] = double_factorial_odd(k);
    return MomentVector(std::move(m));
}

MomentVector bernoulli_raw_moments(double b, int order) {
    std::vector<double> m(static_cast<size_t>(order) + 1, b);
    m[0] = 1.0;
    return MomentVector(std::move(m));
}

const double kExpMixAtomScale = std::pow(2.0, -1.0 / 3.0);
const double kExpMixGaussVar = 1.0 - std::pow(2.0, -2.0 / 3.0);

}  // namespace

BernoulliMixSolution solve_bernoulli_mix(double b) {
    if (!(std::isfinite(b) && b > 0.0 && b < 0.5))
        throw InfeasibleMixture("bernmix: b must lie in (0, 1/2), got " +
                                format_double(b));
    const double q = b * (1.0 - b);
    const double sigma_u = std::pow(q * (1.0 - 2.0 * b), -1.0 / 3.0);
    double var_z = 1.0 - q * sigma_u * sigma_u;
    // roundoff guard at the feasibility boundary b = (5 - sqrt 5)/10
    if (var_z < 0.0 && var_z > -1e-12) var_z = 0.0;
    if (var_z < 0.0)
        throw InfeasibleMixture(
            "bernmix: b = " + format_double(b) +
            " leaves negative Gaussian variance var_z = " + format_double(var_z) +
            "; feasible range is 0 < b <= (5 - sqrt 5)/10 = 0.276393...");
    return BernoulliMixSolution{b, sigma_u, var_z};
}

WeightScheme WeightScheme::expmix() { return WeightScheme(ExpMix{}); }
WeightScheme WeightScheme::chisqmix() { return WeightScheme(ChiSqMix{}); }
WeightScheme WeightScheme::bernoulli_mix(double b) {
    return WeightScheme(BernoulliMix{solve_bernoulli_mix(b)});
}
WeightScheme WeightScheme::pure_gaussian() { return WeightScheme(PureGaussian{}); }
WeightScheme WeightScheme::custom(double var_z, DistributionSpec atom) {
    if (!(std::isfinite(var_z) && var_z >= 0.0))
        throw SpecError("custom scheme: var_z must be nonnegative");
    return WeightScheme(Custom{var_z, std::move(atom)});
}

WeightScheme WeightScheme::parse(std::string_view text) {
    detail::Cursor c{text, 0};
    const std::string name(c.ident());

    WeightScheme out = pure_gaussian();
    if (name == "expmix") {
        out = expmix();
    } else if (name == "chisqmix") {
        out = chisqmix();
    } else if (name == "gauss") {
        out = pure_gaussian();
    } else if (name == "bernmix") {
        c.expect('(');
        detail::ArgReader args{c, {}};
        std::string key;
        bool flag = false;
        double b = 0.0;
        bool have_b = false;
        while (args.next(key, flag)) {
            if (flag || key != "b") c.fail("bernmix takes a single argument b");
            b = c.number();
            have_b = true;
            args.separator();
        }
        if (!have_b) c.fail("bernmix requires b");
        out = bernoulli_mix(b);
    } else if (name == "custom") {
        c.expect('(');
        detail::ArgReader args{c, {}};
        std::string key;
        bool flag = false;
        double var_z = 0.0;
        bool have_var = false, have_atom = false;
        DistributionSpec atom = DistributionSpec::gaussian(0.0, 1.0);
        while (args.next(key, flag)) {
            if (flag) c.fail("unknown custom flag '" + key + "'");
            if (key == "var_z") {
                var_z = c.number();
                have_var = true;
            } else if (key == "atom") {
                atom = DistributionSpec::parse_prefix(c.s, c.i);
                have_atom = true;
            } else {
                c.fail("unknown custom argument '" + key + "'");
            }
            args.separator();
        }
        if (!have_var || !have_atom) c.fail("custom requires var_z and atom");
        out = custom(var_z, std::move(atom));
    } else {
        c.fail("unknown weight scheme '" + name + "'");
    }
    if (!c.done()) c.fail("trailing characters");
    return out;
}

std::string WeightScheme::to_string() const {
    return std::visit(
        overload{
            [](const ExpMix&) { return std::string("expmix"); },
            [](const ChiSqMix&) { return std::string("chisqmix"); },
            [](const BernoulliMix& s) {
                return "bernmix(b=" + format_double(s.sol.b) + ")";
            },
            [](const PureGaussian&) { return std::string("gauss"); },
            [](const Custom& s) {
                return "custom(var_z=" + format_double(s.var_z) + ",atom=" +
                       s.atom.to_string() + ")";
            },
        },
        v_);
}

MomentVector scheme_moments(const WeightScheme& scheme, int order) {
    return std::visit(
        overload{
            [&](const WeightScheme::ExpMix&) {
                return convolve_moments(
                    gaussian_raw_moments(0.0, kExpMixGaussVar, order),
                    shifted_scaled_moments(exp1_raw_moments(order), 1.0,
                                           kExpMixAtomScale));
            },
            [&](const WeightScheme::ChiSqMix&) {
                return convolve_moments(
                    gaussian_raw_moments(0.0, 0.5, order),
                    shifted_scaled_moments(chisq1_raw_moments(order), 1.0, 0.5));
            },
            [&](const WeightScheme::BernoulliMix& s) {
                return convolve_moments(
                    gaussian_raw_moments(0.0, s.sol.var_z, order),
                    shifted_scaled_moments(bernoulli_raw_moments(s.sol.b, order),
                                           s.sol.b, s.sol.sigma_u));
            },
            [&](const WeightScheme::PureGaussian&) {
                return gaussian_raw_moments(0.0, 1.0, order);
            },
            [&](const WeightScheme::Custom& s) {
                return convolve_moments(gaussian_raw_moments(0.0, s.var_z, order),
                                        raw_moments(s.atom, order));
            },
        },
        scheme.v());
}

void draw_weights(const WeightScheme& scheme, std::span<double> out,
                  RngStream& rng) {
    std::visit(
        overload{
            [&](const WeightScheme::ExpMix&) {
                const double a = std::sqrt(kExpMixGaussVar);
                for (double& e : out)
                    e = a * rng.next_normal() +
                        kExpMixAtomScale * (rng.next_exponential() - 1.0);
            },
            [&](const WeightScheme::ChiSqMix&) {
                const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
                for (double& e : out) {
                    const double z = rng.next_normal();
                    const double c = rng.next_normal();
                    e = inv_sqrt2 * z + 0.5 * (c * c - 1.0);
                }
            },
            [&](const WeightScheme::BernoulliMix& s) {
                const double sd = std::sqrt(s.sol.var_z);
                for (double& e : out) {
                    const double z = sd * rng.next_normal();
                    const double beta =
                        (rng.next_uniform() < s.sol.b) ? 1.0 : 0.0;
                    e = z + s.sol.sigma_u * (beta - s.sol.b);
                }
            },
            [&](const WeightScheme::PureGaussian&) {
                for (double& e : out) e = rng.next_normal();
            },
            [&](const WeightScheme::Custom& s) {
                const double sd = std::sqrt(s.var_z);
                for (double& e : out) {
                    const double z = sd * rng.next_normal();
                    e = z + sample_scalar(s.atom, rng);
                }
            },
        },
        scheme.v());
}

SchemeValidation validate_scheme(const WeightScheme& scheme, double tol) {
    const MomentVector m = scheme_moments(scheme, 4);
    SchemeValidation v{};
    v.m1 = m[1];
    v.m2 = m[2];
    v.m3 = m[3];
    v.m4 = m[4];
    v.mean_ok = std::abs(v.m1) <= tol;
    v.variance_ok = std::abs(v.m2 - 1.0) <= tol;
    v.third_moment_ok = std::abs(v.m3 - 1.0) <= tol;
    v.fourth_finite = std::isfinite(v.m4);
    return v;
}

DistributionSpec two_point_surrogate() {
    const double r = std::sqrt(5.0);
    const double lo = (1.0 - r) / 2.0;
    const double hi = (1.0 + r) / 2.0;
    const double p_hi = -lo / r;  // P(hi): makes mean 0, var 1, third 1
    return DistributionSpec::finite_atomic({lo, hi}, {1.0 - p_hi, p_hi});
}

}  // namespace quasiboot
