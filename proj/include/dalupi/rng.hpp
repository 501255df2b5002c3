#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "dalupi/common.hpp"

namespace dalupi {

/// Counter-based 64-bit generator (splitmix64 applied to seed + counter).
/// Every draw is a pure function of (seed, counter), so streams can be
/// split by deriving child seeds and replayed exactly on any platform.
/// The standard <random> engines are portable but the standard
/// distributions are not, so the uniform / normal / categorical
/// transforms below are part of the pinned behaviour.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), counter_(0) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (++counter_);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1): top 53 bits scaled by 2^-53.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Standard normal via Box-Muller. Consumes two uniforms per pair and
    /// caches the second value, so draw counts stay reproducible.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        // Guard the log: next_double() can return exactly 0.
        double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Index draw by inverse CDF over an (unnormalized) weight row.
    std::size_t categorical(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw ValidationError("categorical: negative weight");
            total += w;
        }
        if (total <= 0.0) throw ValidationError("categorical: zero mass row");
        double u = next_double() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

    /// Child stream whose draws are independent of this stream's position.
    Rng split(std::uint64_t stream_id) const {
        std::uint64_t z = seed_ ^ (0x9e3779b97f4a7c15ULL + stream_id * 0xd1342543de82ef95ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace dalupi
