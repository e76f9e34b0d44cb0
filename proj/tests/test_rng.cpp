#include <doctest.h>

#include <cmath>
#include <vector>

#include "quasiboot/analysis.hpp"
#include "quasiboot/rng.hpp"

using namespace quasiboot;

TEST_CASE("xoshiro256++ first output from the documented state") {
    // state {1,2,3,4}: rotl(s0 + s3, 23) + s0 = rotl(5, 23) + 1
    RngStream r;
    CHECK(r.next_u64() == (5ull << 23) + 1ull);
}

TEST_CASE("streams are reproducible and keys split them") {
    RngStream a = RngStream::derive(42, 7, 0);
    RngStream b = RngStream::derive(42, 7, 0);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    // changing any component of (seed, domain, index) moves the stream
    RngStream base = RngStream::derive(42, 7, 0);
    RngStream seed2 = RngStream::derive(43, 7, 0);
    RngStream dom2 = RngStream::derive(42, 8, 0);
    RngStream idx2 = RngStream::derive(42, 7, 1);
    const std::uint64_t x = base.next_u64();
    CHECK(x != seed2.next_u64());
    CHECK(x != dom2.next_u64());
    CHECK(x != idx2.next_u64());
}

TEST_CASE("from_key never produces the invalid all-zero state") {
    // No key maps to all-zero through SplitMix64 in practice; the guard is
    // still exercised on a few keys by checking the state is nonzero.
    for (std::uint64_t k : {0ull, 1ull, 0xffffffffffffffffull}) {
        RngStream r = RngStream::from_key(k);
        const auto s = r.state();
        CHECK((s[0] | s[1] | s[2] | s[3]) != 0);
    }
}

TEST_CASE("uniforms stay inside the open interval") {
    RngStream r = RngStream::derive(1, 100, 0);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) {
        const double u = r.next_uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(sum / N == doctest::Approx(0.5).epsilon(0.01));
    CHECK(lo < 0.001);   // the range is actually exercised
    CHECK(hi > 0.999);
}

TEST_CASE("normal_quantile reproduces reference quantiles") {
    // reference values from the standard normal distribution
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(normal_quantile(0.975) ==
          doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.025) ==
          doctest::Approx(-1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.9986501019683699) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(normal_quantile(0.0013498980316301035) ==
          doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(std::isinf(normal_quantile(0.0)));
    CHECK(normal_quantile(0.0) < 0.0);
    CHECK(std::isinf(normal_quantile(1.0)));
    CHECK(normal_quantile(1.0) > 0.0);
}

TEST_CASE("normal_quantile inverts normal_cdf over a wide range") {
    for (double x = -6.0; x <= 6.0; x += 0.25) {
        const double u = normal_cdf(x);
        // the inverse is ill-conditioned where u sits next to 1: one ulp of
        // u moves the result by ~ulp(1)/phi(x), so the tolerance must grow
        // with that bound in the tails
        const double phi = 0.3989422804014327 * std::exp(-0.5 * x * x);
        const double tol = std::max(1e-9 * (1.0 + std::abs(x)), 3e-16 / phi);
        CHECK(std::abs(normal_quantile(u) - x) <= tol);
    }
}

TEST_CASE("per-variate draw budget is exactly one u64") {
    RngStream a = RngStream::derive(9, 9, 9);
    RngStream b = a;
    RngStream c = a;
    a.next_normal();
    b.next_uniform();
    c.next_exponential();
    CHECK(a.state() == b.state());
    CHECK(a.state() == c.state());
}

TEST_CASE("normal draws match their first two moments") {
    RngStream r = RngStream::derive(2, 200, 0);
    const int N = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < N; ++i) {
        const double z = r.next_normal();
        sum += z;
        sq += z * z;
    }
    const double mean = sum / N;
    const double var = sq / N - mean * mean;
    CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(N)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("exponential draws have unit mean and positive support") {
    RngStream r = RngStream::derive(3, 300, 0);
    const int N = 200000;
    double sum = 0.0;
    for (int i = 0; i < N; ++i) {
        const double e = r.next_exponential();
        CHECK(e > 0.0);
        sum += e;
    }
    CHECK(sum / N == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("mix64 is a bijective-looking scrambler on small inputs") {
    // sanity: distinct small inputs map to distinct outputs, no fixed zeros
    std::vector<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 64; ++i) seen.push_back(mix64(i));
    for (size_t i = 0; i < seen.size(); ++i)
        for (size_t j = i + 1; j < seen.size(); ++j)
            CHECK(seen[i] != seen[j]);
}
