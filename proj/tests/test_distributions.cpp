#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "quasiboot/distributions.hpp"
#include "quasiboot/errors.hpp"
#include "quasiboot/rng.hpp"

using namespace quasiboot;

namespace {

// sample raw moments with their empirical standard errors
struct McMoments {
    std::vector<double> m;   // m[k], k = 0..K
    std::vector<double> se;  // se[k]
};

McMoments mc_moments(const DistributionSpec& spec, int K, int N,
                     std::uint64_t domain) {
    RngStream rng = RngStream::derive(12345, domain, 0);
    std::vector<double> sum(static_cast<size_t>(K) + 1, 0.0);
    std::vector<double> sumsq(static_cast<size_t>(K) + 1, 0.0);
    for (int i = 0; i < N; ++i) {
        const double x = sample_scalar(spec, rng);
        double pw = 1.0;
        for (int k = 0; k <= K; ++k) {
            sum[static_cast<size_t>(k)] += pw;
            sumsq[static_cast<size_t>(k)] += pw * pw;
            pw *= x;
        }
    }
    McMoments out;
    out.m.resize(static_cast<size_t>(K) + 1);
    out.se.resize(static_cast<size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
        const double mean = sum[static_cast<size_t>(k)] / N;
        const double var = sumsq[static_cast<size_t>(k)] / N - mean * mean;
        out.m[static_cast<size_t>(k)] = mean;
        out.se[static_cast<size_t>(k)] = std::sqrt(std::max(var, 0.0) / N);
    }
    return out;
}

void check_mc_matches(const DistributionSpec& spec, int K, int N,
                      std::uint64_t domain, double sigmas) {
    const MomentVector exact = raw_moments(spec, K);
    const McMoments mc = mc_moments(spec, K, N, domain);
    for (int k = 1; k <= K; ++k) {
        const double tol =
            sigmas * std::max(mc.se[static_cast<size_t>(k)], 1e-12);
        INFO("k = ", k, " exact = ", exact[k], " mc = ",
             mc.m[static_cast<size_t>(k)], " tol = ", tol);
        CHECK(std::abs(mc.m[static_cast<size_t>(k)] - exact[k]) <= tol);
    }
}

}  // namespace

TEST_CASE("parse / to_string round-trips") {
    const char* forms[] = {
        "lognormal(sigma=1,std)",
        "lognormal(sigma=1.5,centered)",
        "chisq1c",
        "pareto(xm=0.5,a=4.1,shift=0.6612903225806452,scale=1.5)",
        "gauss(mean=0,var=1)",
        "gauss(mean=-2.5,var=0.25)",
        "conv(var_z=0.25,atom=chisq1c)",
        "conv(var_z=0.1,atom=pareto(xm=0.5,a=4.5))",
        "atomic(nodes=[-1,0,2],probs=[0.25,0.5,0.25])",
    };
    for (const char* f : forms) {
        const DistributionSpec spec = DistributionSpec::parse(f);
        const DistributionSpec again = DistributionSpec::parse(spec.to_string());
        CHECK(spec == again);
    }
    // canonical form of shorthand
    CHECK(DistributionSpec::parse("gauss").to_string() == "gauss(mean=0,var=1)");
    CHECK(DistributionSpec::parse("lognormal(sigma=2)").to_string() ==
          "lognormal(sigma=2,std)");
    CHECK(DistributionSpec::parse(" atomic( nodes=[1] , probs=[1] ) ")
              .to_string() == "atomic(nodes=[1],probs=[1])");
}

TEST_CASE("parse rejects malformed text") {
    CHECK_THROWS_AS(DistributionSpec::parse("nonsense"), SpecError);
    CHECK_THROWS_AS(DistributionSpec::parse("gauss(mu=0)"), SpecError);
    CHECK_THROWS_AS(DistributionSpec::parse("gauss(mean=0,var=1"), SpecError);
    CHECK_THROWS_AS(DistributionSpec::parse("gauss(mean=0,var=1)x"), SpecError);
    CHECK_THROWS_AS(DistributionSpec::parse("gauss(mean=0,mean=1,var=1)"),
                    SpecError);
    CHECK_THROWS_AS(DistributionSpec::parse("pareto(xm=1,a=3)"), SpecError);
    CHECK_THROWS_AS(DistributionSpec::parse("atomic(nodes=[1,1],probs=[.5,.5])"),
                    SpecError);
    CHECK_THROWS_AS(
        DistributionSpec::parse("atomic(nodes=[1,2],probs=[0.5,0.4])"),
        SpecError);
    CHECK_THROWS_AS(DistributionSpec::parse("lognormal(sigma=0)"), SpecError);
    CHECK_THROWS_AS(DistributionSpec::parse("conv(var_z=-1,atom=chisq1c)"),
                    SpecError);
}

TEST_CASE("atomic nodes may arrive unsorted; probs follow them") {
    const DistributionSpec a =
        DistributionSpec::finite_atomic({2.0, -1.0}, {0.25, 0.75});
    CHECK(a.to_string() == "atomic(nodes=[-1,2],probs=[0.75,0.25])");
    CHECK(dist_mean(a) == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("standardized lognormal has exact low moments") {
    const DistributionSpec spec = DistributionSpec::lognormal(1.0);
    const MomentVector m = raw_moments(spec, 4);
    CHECK(m[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(m[2] == doctest::Approx(1.0).epsilon(1e-12));

    // independent evaluation from E L^k = e^{k^2/2}, L = e^Z:
    // skewness of the standardized law is (e+2) sqrt(e-1)
    const double e1 = std::exp(1.0);
    const double m3_expected = (e1 + 2.0) * std::sqrt(e1 - 1.0);
    CHECK(m[3] == doctest::Approx(m3_expected).epsilon(1e-12));
    CHECK(m[3] == doctest::Approx(6.184877138632554).epsilon(1e-12));

    // kurtosis (fourth standardized moment): e^4 + 2 e^3 + 3 e^2 - 3
    const double m4_expected =
        std::pow(e1, 4.0) + 2.0 * std::pow(e1, 3.0) + 3.0 * e1 * e1 - 3.0;
    CHECK(m[4] == doctest::Approx(m4_expected).epsilon(1e-12));
}

TEST_CASE("centered lognormal keeps the raw scale") {
    const DistributionSpec spec = DistributionSpec::lognormal(1.0, false);
    const double e1 = std::exp(1.0);
    CHECK(dist_mean(spec) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // Var(e^Z) = e^2 - e
    CHECK(dist_variance(spec) == doctest::Approx(e1 * e1 - e1).epsilon(1e-12));
}

TEST_CASE("centered chi-square(1) moments") {
    const DistributionSpec spec = DistributionSpec::chisq1c();
    const MomentVector m = raw_moments(spec, 4);
    CHECK(m[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(m[2] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m[3] == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(m[4] == doctest::Approx(60.0).epsilon(1e-14));
}

TEST_CASE("Pareto moments and the integrability boundary") {
    const DistributionSpec spec = DistributionSpec::pareto(0.5, 4.1);
    const MomentVector m = raw_moments(spec, 4);
    CHECK(m[1] == doctest::Approx(4.1 * 0.5 / 3.1).epsilon(1e-14));
    CHECK(m[2] == doctest::Approx(4.1 * 0.25 / 2.1).epsilon(1e-14));
    CHECK(m[3] == doctest::Approx(4.1 * 0.125 / 1.1).epsilon(1e-14));
    CHECK(m[4] == doctest::Approx(4.1 * 0.0625 / 0.1).epsilon(1e-14));
    CHECK(m[4] == doctest::Approx(2.5625).epsilon(1e-14));
    CHECK_THROWS_AS(raw_moments(spec, 5), MomentNotFinite);

    // shifted/scaled variant: mean moves to zero
    const DistributionSpec centered =
        DistributionSpec::pareto(0.5, 4.1, 4.1 * 0.5 / 3.1, 2.0);
    CHECK(dist_mean(centered) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(dist_variance(centered) ==
          doctest::Approx(4.0 * (4.1 * 0.25 / 2.1 -
                                 std::pow(4.1 * 0.5 / 3.1, 2.0)))
              .epsilon(1e-12));
}

TEST_CASE("convolution moments by hand") {
    // N(0, 1/2) + chisq1c: m2 = 2.5, m3 = 8, m4 = 66.75
    const DistributionSpec spec =
        DistributionSpec::convolution(0.5, DistributionSpec::chisq1c());
    const MomentVector m = raw_moments(spec, 4);
    CHECK(m[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(m[2] == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(m[3] == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(m[4] == doctest::Approx(66.75).epsilon(1e-14));
}

TEST_CASE("standardize produces a zero-mean unit-variance transform") {
    for (const char* text :
         {"chisq1c", "pareto(xm=0.5,a=4.1)", "lognormal(sigma=1,centered)",
          "gauss(mean=3,var=4)", "atomic(nodes=[-1,0,5],probs=[0.3,0.5,0.2])"}) {
        const DistributionSpec spec = DistributionSpec::parse(text);
        const AffineStd t = standardize(spec);
        const MomentVector m = raw_moments(spec, 2);
        const MomentVector std2 = shifted_scaled_moments(m, t.shift, t.scale);
        INFO(text);
        CHECK(std2[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(std2[2] == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(standardize(DistributionSpec::finite_atomic({1.0}, {1.0})),
                    SpecError);
}

TEST_CASE("sampling matches exact moments (Monte Carlo oracle)") {
    check_mc_matches(DistributionSpec::parse("gauss(mean=1,var=4)"), 4,
                     1000000, 1, 5.0);
    check_mc_matches(DistributionSpec::chisq1c(), 4, 1000000, 2, 6.0);
    check_mc_matches(DistributionSpec::lognormal(1.0), 3, 1000000, 3, 6.0);
    check_mc_matches(
        DistributionSpec::parse("atomic(nodes=[-2,0,1],probs=[0.2,0.3,0.5])"),
        4, 1000000, 4, 5.0);
    check_mc_matches(DistributionSpec::parse("conv(var_z=0.5,atom=chisq1c)"), 4,
                     1000000, 5, 6.0);
}

TEST_CASE("Pareto sampling: heavy tail needs more draws for m4") {
    const DistributionSpec spec = DistributionSpec::pareto(0.5, 4.1);
    check_mc_matches(spec, 3, 1000000, 6, 6.0);
    // fourth moment converges slowly: 10^7 draws, 10 empirical SEs
    RngStream rng = RngStream::derive(12345, 7, 0);
    const int N = 10000000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = sample_scalar(spec, rng);
        const double p4 = x * x * x * x;
        sum += p4;
        sq += p4 * p4;
    }
    const double mean = sum / N;
    const double se = std::sqrt((sq / N - mean * mean) / N);
    CHECK(std::abs(mean - 2.5625) <= 10.0 * se);
}

TEST_CASE("per-coordinate draw budget in sample_vector") {
    // gauss / lognormal / chisq1c: one normal each; pareto / atomic: one
    // uniform; conv: one normal plus its atom's draws
    const struct {
        const char* text;
        int u64_per_draw;
    } cases[] = {
        {"gauss(mean=0,var=1)", 1},     {"lognormal(sigma=1,std)", 1},
        {"chisq1c", 1},                 {"pareto(xm=0.5,a=4.1)", 1},
        {"atomic(nodes=[0,1],probs=[0.5,0.5])", 1},
        {"conv(var_z=0.5,atom=chisq1c)", 2},
    };
    for (const auto& c : cases) {
        const DistributionSpec spec = DistributionSpec::parse(c.text);
        RngStream a = RngStream::derive(5, 50, 0);
        RngStream b = a;
        std::vector<double> buf(7);
        sample_vector(spec, buf, a);
        for (int i = 0; i < 7 * c.u64_per_draw; ++i) b.next_u64();
        INFO(c.text);
        CHECK(a.state() == b.state());
    }
}

TEST_CASE("sample_vector equals repeated sample_scalar on the same stream") {
    const DistributionSpec spec =
        DistributionSpec::parse("conv(var_z=0.25,atom=pareto(xm=0.5,a=5))");
    RngStream a = RngStream::derive(6, 60, 0);
    RngStream b = a;
    std::vector<double> buf(11);
    sample_vector(spec, buf, a);
    for (double v : buf) CHECK(v == sample_scalar(spec, b));
}

TEST_CASE("format_double round-trips doubles exactly") {
    for (double v : {0.0, 1.0, -1.5, 0.1, 0.6612903225806452,
                     4.334224129333936, 1e-300, -2.5e17}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}
