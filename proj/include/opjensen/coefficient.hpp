#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "opjensen/errors.hpp"
#include "opjensen/functions.hpp"
#include "opjensen/matrix.hpp"
#include "opjensen/rng.hpp"
#include "opjensen/rootfind.hpp"

namespace opjensen {

// Which multiplicative constant goes in front of <f(A)x,x>.
//
// PaperLiteral is inf over (0,1) of h(t)/t; Safe is 2h(1/2), the value the
// inequality actually supports when h(t)/t is decreasing; PointwiseLambda
// is h(lambda)/lambda for one chosen lambda.
struct CoefficientPolicy {
    enum class Mode { PaperLiteral, Safe, PointwiseLambda };

    Mode mode = Mode::Safe;
    double lambda = 0.5;

    static CoefficientPolicy paper() { return {Mode::PaperLiteral, 0.5}; }
    static CoefficientPolicy safe() { return {Mode::Safe, 0.5}; }
    static CoefficientPolicy pointwise(double lambda) {
        if (!(lambda > 0.0 && lambda < 1.0))
            throw ConfigError("pointwise lambda must lie in (0,1), got " + std::to_string(lambda));
        return {Mode::PointwiseLambda, lambda};
    }

    static CoefficientPolicy parse(std::string_view s) {
        if (s == "paper") return paper();
        if (s == "safe") return safe();
        if (s.rfind("pointwise:", 0) == 0) {
            std::size_t pos = 10;
            const double lambda = detail::parse_number(s, pos);
            detail::expect_end(s, pos);
            return pointwise(lambda);
        }
        throw ParseError("unknown policy '" + std::string(s) + "' (paper|safe|pointwise:l)", 0);
    }

    std::string to_string() const {
        switch (mode) {
            case Mode::PaperLiteral: return "paper";
            case Mode::Safe: return "safe";
            case Mode::PointwiseLambda: {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "pointwise:%.17g", lambda);
                return buf;
            }
        }
        return "safe";
    }
};

inline constexpr double kDivergenceCutoff = 1e12;  // grid minimum above this reports +inf

// inf over (0,1) of h(t)/t for the PaperLiteral mode; 2h(1/2) for Safe;
// h(lambda)/lambda for PointwiseLambda. Closed forms cover the five named
// families; Tabulated h uses a 10001-point grid on [1e-6, 1-1e-6] with
// golden-section refinement around the best point.
inline double jensen_coefficient(const HFunction& h, const CoefficientPolicy& policy,
                                 double tol = 1e-10) {
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
    switch (policy.mode) {
        case CoefficientPolicy::Mode::Safe:
            return 2.0 * h(0.5);
        case CoefficientPolicy::Mode::PointwiseLambda:
            return h(policy.lambda) / policy.lambda;
        case CoefficientPolicy::Mode::PaperLiteral:
            break;
    }
    switch (h.family()) {
        case HFunction::Family::Identity:
            return 1.0;
        case HFunction::Family::Constant:
            // c/t decreases toward t -> 1, infimum c (not attained on the open interval).
            return h(1.0);
        case HFunction::Family::Power:
        case HFunction::Family::Reciprocal:
        case HFunction::Family::ReciprocalPower:
            // h(t)/t = t^{s-1}, t^{-2}, t^{-1-s}: all nonincreasing, infimum at t -> 1.
            return 1.0;
        case HFunction::Family::Tabulated:
            break;
    }

    constexpr int kGridPoints = 10001;
    constexpr double lo = 1e-6;
    const double hi = 1.0 - 1e-6;
    const auto ratio = [&h](double t) {
        const double ht = h(t);
        if (ht < 0.0)
            throw NonnegativityError("h('" + h.spec() + "') is negative at t=" +
                                     std::to_string(t));
        return ht / t;
    };
    double best_t = lo;
    double best_r = ratio(lo);
    for (int k = 1; k < kGridPoints; ++k) {
        const double t = lo + (hi - lo) * k / (kGridPoints - 1);
        const double r = ratio(t);
        if (r < best_r) {
            best_r = r;
            best_t = t;
        }
    }
    if (best_r > kDivergenceCutoff) return std::numeric_limits<double>::infinity();
    if (best_r == 0.0) return 0.0;
    const double step = (hi - lo) / (kGridPoints - 1);
    const auto [t_ref, r_ref] =
        golden_min(ratio, std::max(lo, best_t - step), std::min(hi, best_t + step), tol);
    (void)t_ref;
    return std::min(best_r, r_ref);
}

// Closed-form Safe coefficients of the five named families.
inline double classify_coefficient(const HFunction& h) {
    switch (h.family()) {
        case HFunction::Family::Identity: return 1.0;
        case HFunction::Family::Constant: return 2.0 * h(1.0);
        case HFunction::Family::Power: return std::pow(2.0, 1.0 - h.param());
        case HFunction::Family::Reciprocal: return 4.0;
        case HFunction::Family::ReciprocalPower: return std::pow(2.0, 1.0 + h.param());
        case HFunction::Family::Tabulated:
            throw ConfigError("classify_coefficient: tabulated h has no closed form");
    }
    throw ConfigError("classify_coefficient: unknown family");
}

// The five named families all have nonincreasing h(t)/t (Identity is
// constant, which counts in the weak sense). Tabulated h is checked on a
// monotone grid with 1e-12 slack.
inline bool is_h_over_t_decreasing(const HFunction& h, int samples = 1001) {
    if (samples < 2) throw ConfigError("need at least 2 samples");
    if (h.family() != HFunction::Family::Tabulated) return true;
    constexpr double lo = 1e-6;
    const double hi = 1.0 - 1e-6;
    double prev = h(lo) / lo;
    for (int k = 1; k < samples; ++k) {
        const double t = lo + (hi - lo) * k / (samples - 1);
        const double r = h(t) / t;
        if (r > prev + 1e-12) return false;
        prev = r;
    }
    return true;
}

struct ConvexityViolation {
    double u, v, lambda;
    double lhs, rhs;
};

struct ConvexityWitness {
    bool holds = true;
    std::optional<ConvexityViolation> violation;
};

// Randomized check of f(lu + (1-l)v) <= h(l)f(u) + h(1-l)f(v) on [m, M].
// Deterministic per seed; the first violation beyond the relative margin is
// stored as a witness.
inline ConvexityWitness check_h_convex(const ScalarFunction& f, const HFunction& h,
                                       const SpectrumInterval& interval, int trials,
                                       std::uint64_t seed) {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (!f.in_domain(interval.m) || !f.in_domain(interval.M))
        throw FunctionDomainError("f('" + f.spec() + "') is not defined on the whole interval");
    Rng rng(seed);
    const auto sample_f = [&f](double t) {
        const double v = f(t);
        if (v < 0.0)
            throw NonnegativityError("f('" + f.spec() + "') is negative at t=" +
                                     std::to_string(t) + "; h-convex functions are nonnegative");
        return v;
    };
    for (int k = 0; k < trials; ++k) {
        const double u = rng.uniform(interval.m, interval.M);
        const double v = rng.uniform(interval.m, interval.M);
        const double lambda = rng.uniform(1e-9, 1.0 - 1e-9);
        const double mix = lambda * u + (1.0 - lambda) * v;
        const double lhs = sample_f(mix);
        const double rhs = h(lambda) * sample_f(u) + h(1.0 - lambda) * sample_f(v);
        if (lhs > rhs + 1e-9 * std::max(1.0, std::abs(rhs)))
            return ConvexityWitness{false, ConvexityViolation{u, v, lambda, lhs, rhs}};
    }
    return ConvexityWitness{};
}

}  // namespace opjensen
