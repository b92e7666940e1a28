#ifndef QCL_RNG_HPP
#define QCL_RNG_HPP

// Counter-based random streams.
//
// Algorithm (part of the reproducibility contract; any implementation of it
// in any language yields the same draws given the same seed):
//
//   mix(z)            = splitmix64 finalizer
//                       (z ^= z>>30; z *= 0xBF58476D1CE4E5B9;
//                        z ^= z>>27; z *= 0x94D049BB133111EB; z ^= z>>31)
//   root key(seed)    = mix(seed + GOLDEN)
//   output i          = mix(key + i * GOLDEN),       i = 1, 2, ...
//   child(key, id)    = mix(key ^ mix((id+1) * GOLDEN + DERIVE_SALT))
//   unit double       = (output >> 11 + 0.5) * 2^-53          in (0,1)
//   normal            = inverse standard normal CDF of a unit draw
//
// with GOLDEN = 0x9E3779B97F4A7C15 and DERIVE_SALT = 0x6A09E667F3BCC909.
// Because every value is a pure function of (key, counter), work can be
// partitioned across threads by deriving child streams from logical indices;
// the results never depend on scheduling.

#include <cmath>
#include <cstdint>

#include "qcl/special.hpp"

namespace qcl::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kDeriveSalt = 0x6A09E667F3BCC909ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

class Stream {
  public:
    explicit Stream(std::uint64_t seed) : key_(mix64(seed + kGolden)) {}

    // Independent substream addressed by id; does not disturb this stream.
    Stream child(std::uint64_t id) const {
        return Stream(from_key{}, mix64(key_ ^ mix64((id + 1) * kGolden + kDeriveSalt)));
    }

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

    // Uniform on the open interval (0,1); never exactly 0 or 1, so inverse
    // CDF transforms are always finite.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * next_unit(); }

    double normal() { return special::normal_quantile(next_unit()); }

    double exponential(double lambda) { return -std::log1p(-next_unit()) / lambda; }

    // Student t with 3 df: standard normal over sqrt(chi^2_3 / 3), the
    // chi-squared built from three more normals of the same stream.
    double student_t3() {
        double z = normal();
        double c1 = normal(), c2 = normal(), c3 = normal();
        return z / std::sqrt((c1 * c1 + c2 * c2 + c3 * c3) / 3.0);
    }

    // Marsaglia-Tsang gamma(shape, scale 1).
    double gamma(double shape) {
        if (shape < 1.0) {
            double g = gamma(shape + 1.0);
            return g * std::pow(next_unit(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = next_unit();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        double ga = gamma(a);
        double gb = gamma(b);
        double s = ga + gb;
        if (s <= 0.0) return 0.5;  // both underflowed; essentially impossible
        return ga / s;
    }

  private:
    struct from_key {};
    Stream(from_key, std::uint64_t key) : key_(key) {}

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// A fresh 64-bit seed for logical unit `id` under a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t id) {
    return mix64(mix64(master + kGolden) ^ mix64((id + 1) * kGolden + kDeriveSalt));
}

}  // namespace qcl::rng

#endif  // QCL_RNG_HPP
