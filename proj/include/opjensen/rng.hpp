#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace opjensen {

// Seeded generator with hand-rolled uniform/normal draws so that a given
// seed produces the same stream on every platform (std::*_distribution is
// implementation-defined; mt19937_64 itself is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t raw() { return gen_(); }

    // standard normal, polar Box-Muller
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

    // uniform on the unit sphere in R^n
    std::vector<double> unit_sphere(int n) {
        std::vector<double> x(static_cast<std::size_t>(n));
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& xi : x) {
                xi = normal();
                norm2 += xi * xi;
            }
        } while (norm2 < 1e-16);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& xi : x) xi *= inv;
        return x;
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace opjensen
