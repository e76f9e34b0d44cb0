#pragma once

// Deterministic, splittable random streams.
//
// Every Monte Carlo task derives its own stream from (master seed, domain,
// index), so a result never depends on thread count or scheduling order:
// repetition r always consumes stream (seed, domain, r) from its start.
//
// The core generator is xoshiro256++ (Blackman & Vigna).  Stream states are
// expanded from a 64-bit key by SplitMix64, the seeding procedure the
// xoshiro authors recommend; distinct (seed, domain, index) triples are
// first compressed into one key with the same finalizer.
//
// Variate transforms and their per-call draw budget (fixed, documented, and
// relied on by the reproducibility tests):
//   next_uniform      1 x u64   uniform on (0,1), ((x >> 11) + 0.5) * 2^-53
//   next_normal       1 x u64   inverse-CDF (AS241 rational approximation)
//   next_exponential  1 x u64   mean one, -log(U)
// No transform caches state or rejects, so draw counts per variate are
// constants.

#include <array>
#include <cmath>
#include <cstdint>

namespace quasiboot {

// SplitMix64 finalizer: bijective 64-bit mix with good avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Inverse of the standard normal CDF, AS241 algorithm PPND16 (Wichura 1988).
// Absolute error below 1e-15 for u in (0,1); the tails use a log transform.
double normal_quantile(double u);

class RngStream {
  public:
    RngStream() : state_{1, 2, 3, 4} {}

    // Expand a 64-bit key into a full xoshiro256++ state via SplitMix64.
    static RngStream from_key(std::uint64_t key) {
        RngStream r;
        std::uint64_t sm = key;
        for (auto& w : r.state_) {
            sm += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            w = z ^ (z >> 31);
        }
        // all-zero state is the one invalid xoshiro state
        if ((r.state_[0] | r.state_[1] | r.state_[2] | r.state_[3]) == 0)
            r.state_[0] = 0x9e3779b97f4a7c15ull;
        return r;
    }

    // Stream for task `index` of namespace `domain` under `master_seed`.
    static RngStream derive(std::uint64_t master_seed, std::uint64_t domain,
                            std::uint64_t index) {
        std::uint64_t key = mix64(master_seed);
        key = mix64(key ^ mix64(domain));
        key = mix64(key ^ mix64(index));
        return from_key(key);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1): 53-bit mantissa, offset by half an
    // ulp so 0 and 1 are unreachable (safe for log() and normal_quantile()).
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    double next_normal() { return normal_quantile(next_uniform()); }

    double next_exponential() { return -std::log(next_uniform()); }

    const std::array<std::uint64_t, 4>& state() const { return state_; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace quasiboot
