#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "opjensen/matrix.hpp"
#include "opjensen/rng.hpp"

namespace opjensen {

// QR of a Gaussian matrix via modified Gram-Schmidt; a second pass keeps the
// columns orthonormal to working precision.
inline Matrix random_orthogonal(int n, Rng& rng) {
    Matrix q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q(i, j) = rng.normal();
    for (int j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                double r = 0.0;
                for (int i = 0; i < n; ++i) r += q(i, k) * q(i, j);
                for (int i = 0; i < n; ++i) q(i, j) -= r * q(i, k);
            }
        }
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) norm2 += q(i, j) * q(i, j);
        if (norm2 < 1e-20) {
            // Gaussian column collapsed under projection; redraw it.
            for (int i = 0; i < n; ++i) q(i, j) = rng.normal();
            --j;
            continue;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < n; ++i) q(i, j) *= inv;
    }
    return q;
}

struct RandomInstance {
    SymMatrix A;
    UnitVector x;
    std::vector<double> eigenvalues;  // as sampled, ascending
    Matrix basis;                     // the conjugating orthogonal matrix
};

// Spectrum sampled uniformly in [lo, hi]; with probability 1/4 one
// eigenvalue is pinned at each endpoint (n >= 2) so equality cases of the
// endpoint bound get exercised. `pin_endpoints` forces that placement.
// The raw form exists for override-mode campaigns whose interval may reach
// below 0.
inline RandomInstance generate_instance_raw(int n, double lo, double hi, std::uint64_t seed,
                                            bool pin_endpoints = false) {
    if (n < 1) throw DimensionError("instance dimension must be >= 1");
    if (!(lo < hi)) throw ConfigError("sampling interval requires lo < hi");
    Rng rng(seed);
    std::vector<double> lambda(static_cast<std::size_t>(n));
    for (auto& l : lambda) l = rng.uniform(lo, hi);
    const bool pin = pin_endpoints || rng.uniform() < 0.25;
    if (pin && n >= 2) {
        lambda.front() = lo;
        lambda.back() = hi;
    }
    std::sort(lambda.begin(), lambda.end());

    Matrix q = random_orthogonal(n, rng);
    std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += q(i, k) * lambda[static_cast<std::size_t>(k)] * q(j, k);
            entries[static_cast<std::size_t>(i) * n + j] = acc;
        }

    UnitVector x = UnitVector::normalized(rng.unit_sphere(n));
    return RandomInstance{SymMatrix(n, entries), std::move(x), std::move(lambda), std::move(q)};
}

inline RandomInstance generate_instance(int n, const SpectrumInterval& interval,
                                        std::uint64_t seed, bool pin_endpoints = false) {
    return generate_instance_raw(n, interval.m, interval.M, seed, pin_endpoints);
}

inline std::pair<SymMatrix, UnitVector> random_instance(int n, const SpectrumInterval& interval,
                                                        std::uint64_t seed) {
    auto inst = generate_instance(n, interval, seed);
    return {std::move(inst.A), std::move(inst.x)};
}

}  // namespace opjensen
