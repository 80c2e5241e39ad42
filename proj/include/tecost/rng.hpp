#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tecost {

// SplitMix64 finalizer, used as a stateless mixing function.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based stream. Stream (seed, index) draws value k as
// splitmix64(key + k) with key = splitmix64(seed ^ splitmix64(index)), so
// every sample index owns an independent stream and results do not depend
// on the order samples are processed in.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(splitmix64(seed ^ splitmix64(stream + 0x5851f42d4c957f2dULL))) {}

    std::uint64_t next_u64() { return splitmix64(key_ + 0x632be59bd9b4e019ULL * ++ctr_); }

    // Uniform in (0, 1).
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace tecost
