#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace raxcode {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// log(e^a + e^b) without leaving the log domain.
inline double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = a > b ? a : b;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline double log_sum_exp(std::span<const double> v) {
    double m = kNegInf;
    for (double x : v) m = x > m ? x : m;
    if (m == kNegInf || m == kPosInf) return m;
    double acc = 0.0;
    for (double x : v) acc += std::exp(x - m);
    return m + std::log(acc);
}

// e * log_p with the zero-base convention: a zero base (log_p = -inf) gives a
// zero result for every exponent, including e == 0.
inline double log_pow(double log_p, double e) {
    if (log_p == kNegInf) return kNegInf;
    return e * log_p;
}

// SplitMix64 step.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent substream seed from (seed, index). Used for
// per-trial, per-codeword and per-purpose stream splitting; the sequence is
// fixed for a given build and documented in the README.
inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
    uint64_t s = seed ^ (0xd1342543de82ef95ULL * (index + 0x632be59bd9b4e019ULL));
    return splitmix64(s);
}

// Small deterministic generator built on SplitMix64.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

// Inverse-CDF sample from a finite distribution.
inline uint8_t sample_discrete(Rng& rng, std::span<const double> probs) {
    const double u = rng.next_unit();
    double acc = 0.0;
    for (size_t i = 0; i + 1 < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<uint8_t>(i);
    }
    return static_cast<uint8_t>(probs.size() - 1);
}

// Bit k set means user k is a member.
using SubsetMask = uint32_t;

inline SubsetMask full_mask(uint32_t num_users) {
    return (SubsetMask{1} << num_users) - 1;
}

inline bool in_subset(SubsetMask mask, uint32_t user) {
    return (mask >> user) & 1u;
}

}  // namespace raxcode
