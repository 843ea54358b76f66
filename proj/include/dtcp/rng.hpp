#pragma once

#include <cmath>
#include <cstdint>

namespace dtcp::rng {

/// Philox4x32-10 counter-based generator. Each (seed, stream) pair is an
/// independent sequence, so per-path streams are reproducible regardless of
/// thread scheduling.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream) {
        key_[0] = static_cast<std::uint32_t>(seed);
        key_[1] = static_cast<std::uint32_t>(seed >> 32);
        ctr_[0] = 0;
        ctr_[1] = 0;
        ctr_[2] = static_cast<std::uint32_t>(stream);
        ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
    }

    /// uniform double in the open interval (0, 1)
    double uniform() {
        if (idx_ >= 4) refill();
        const std::uint32_t v = out_[idx_++];
        return (static_cast<double>(v) + 0.5) * (1.0 / 4294967296.0);
    }

    /// standard normal via Box-Muller (pairs cached)
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Poisson count by inversion (Knuth product method); mean is small in
    /// every use here (intensity times step size).
    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        long n = 0;
        double prod = uniform();
        while (prod > limit) {
            ++n;
            prod *= uniform();
            if (n > 10000) break; // guard against pathological means
        }
        return n;
    }

private:
    void refill() {
        std::uint32_t c[4] = {ctr_[0], ctr_[1], ctr_[2], ctr_[3]};
        std::uint32_t k[2] = {key_[0], key_[1]};
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * c[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * c[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c[1] ^ k[0];
            const std::uint32_t n2 = hi0 ^ c[3] ^ k[1];
            c[0] = n0;
            c[1] = lo1;
            c[2] = n2;
            c[3] = lo0;
            k[0] += 0x9E3779B9u;
            k[1] += 0xBB67AE85u;
        }
        out_[0] = c[0];
        out_[1] = c[1];
        out_[2] = c[2];
        out_[3] = c[3];
        idx_ = 0;
        if (++ctr_[0] == 0) ++ctr_[1]; // 2^64 blocks per stream
    }

    std::uint32_t key_[2];
    std::uint32_t ctr_[4];
    std::uint32_t out_[4] = {};
    int idx_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace dtcp::rng
