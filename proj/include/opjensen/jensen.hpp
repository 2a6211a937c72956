#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opjensen/coefficient.hpp"
#include "opjensen/matrix.hpp"
#include "opjensen/report.hpp"
#include "opjensen/rng.hpp"
#include "opjensen/rootfind.hpp"

namespace opjensen {

struct CheckContext {
    CoefficientPolicy policy = CoefficientPolicy::safe();
    bool override_positivity = false;  // accept spectra reaching <= 0 (paper's own example does)
    std::uint64_t seed = 0;            // bookkeeping only, recorded in the witness
    double coeff_tol = 1e-10;
};

namespace detail {

inline void require_positive_spectrum(const EigenDecomposition& ed, bool override_positivity) {
    if (override_positivity) return;
    if (!(ed.eigenvalues.front() > 0.0))
        throw PositivityError("spectrum reaches " + std::to_string(ed.eigenvalues.front()) +
                              "; rerun with the positivity override to accept it");
}

inline double f_quadratic_form(const SymMatrix& A, const EigenDecomposition& ed,
                               const ScalarFunction& f, const UnitVector& x) {
    return quadratic_form(matrix_function(A, f, ed), x);
}

// Enclosing interval endpoints: the caller-supplied interval (which must
// contain the spectrum) or the spectrum hull. Positivity is the business of
// require_positive_spectrum, so override-mode spectra pass through here.
struct Hull {
    double m, M;
};

inline Hull enclosing_interval(const EigenDecomposition& ed,
                               const std::optional<SpectrumInterval>& interval) {
    const double lo = ed.eigenvalues.front();
    const double hi = ed.eigenvalues.back();
    if (interval) {
        if (lo < interval->m - 1e-9 || hi > interval->M + 1e-9)
            throw ConfigError("spectrum [" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "] is not contained in the supplied interval");
        return Hull{interval->m, interval->M};
    }
    if (lo == hi)
        throw DegenerateSpectrumError("scalar operator: m == M == " + std::to_string(lo));
    return Hull{lo, hi};
}

}  // namespace detail

// f(<Ax,x>) <= C <f(A)x,x> with C given by the policy.
inline InequalityReport mond_pecaric_check(const ScalarFunction& f, const HFunction& h,
                                           const SymMatrix& A, const UnitVector& x,
                                           const CheckContext& ctx = {},
                                           const std::string& name = "thm1") {
    const auto ed = eigh(A);
    detail::require_positive_spectrum(ed, ctx.override_positivity);
    const double g_bar = quadratic_form(A, x);
    const double fx_form = detail::f_quadratic_form(A, ed, f, x);
    const double coeff = jensen_coefficient(h, ctx.policy, ctx.coeff_tol);
    const double lhs = f(g_bar);
    const double rhs = coeff * fx_form;
    return make_report(name, lhs, rhs, coeff, ctx.policy,
                       make_witness(A, x, f.spec(), h.spec(), ctx.seed,
                                    ctx.override_positivity));
}

// The pointwise form with coefficient h(lambda)/lambda.
inline InequalityReport lambda_pointwise_check(const ScalarFunction& f, const HFunction& h,
                                               const SymMatrix& A, const UnitVector& x,
                                               double lambda, const CheckContext& ctx = {}) {
    CheckContext pointwise_ctx = ctx;
    pointwise_ctx.policy = CoefficientPolicy::pointwise(lambda);
    return mond_pecaric_check(f, h, A, x, pointwise_ctx, "pointwise");
}

enum class RefinementStatus { Refined, NotApplicable, Violated };

inline const char* to_string(RefinementStatus s) {
    switch (s) {
        case RefinementStatus::Refined: return "refined";
        case RefinementStatus::NotApplicable: return "not_applicable";
        case RefinementStatus::Violated: return "violated";
    }
    return "?";
}

struct RefinementReport {
    RefinementStatus status = RefinementStatus::NotApplicable;
    double paper_coefficient = 0.0;  // M_(0,1)(h)
    double lhs = 0.0;                // f(<Ax,x>)
    double mid = 0.0;                // M * <f(A)x,x>
    double rhs = 0.0;                // <f(A)x,x>
};

// Strict-improvement chain lhs <= M <f(A)x,x> < <f(A)x,x>, which only
// applies when M < 1 and the Jensen gap is strict.
inline RefinementReport refinement_check(const ScalarFunction& f, const HFunction& h,
                                         const SymMatrix& A, const UnitVector& x,
                                         bool override_positivity = false) {
    const auto ed = eigh(A);
    detail::require_positive_spectrum(ed, override_positivity);
    RefinementReport r;
    r.paper_coefficient = jensen_coefficient(h, CoefficientPolicy::paper());
    r.lhs = f(quadratic_form(A, x));
    r.rhs = detail::f_quadratic_form(A, ed, f, x);
    r.mid = r.paper_coefficient * r.rhs;
    const bool strict_gap = r.rhs - r.lhs > 1e-12;
    if (!(r.paper_coefficient < 1.0) || !strict_gap) {
        r.status = RefinementStatus::NotApplicable;
        return r;
    }
    const bool first = r.lhs <= r.mid + 1e-9 * std::max(1.0, std::abs(r.mid));
    const bool second = r.mid < r.rhs;
    r.status = (first && second) ? RefinementStatus::Refined : RefinementStatus::Violated;
    return r;
}

// <f(A)x,x> <= C [ (M-g)/(M-m) f(m) + (g-m)/(M-m) f(M) ] with g = <Ax,x>.
inline InequalityReport endpoint_bound_check(const ScalarFunction& f, const HFunction& h,
                                             const SymMatrix& A, const UnitVector& x,
                                             const CheckContext& ctx = {},
                                             const std::optional<SpectrumInterval>& interval = {},
                                             const std::string& name = "thm3") {
    const auto ed = eigh(A);
    detail::require_positive_spectrum(ed, ctx.override_positivity);
    const auto iv = detail::enclosing_interval(ed, interval);
    const double g_bar = quadratic_form(A, x);
    const double coeff = jensen_coefficient(h, ctx.policy, ctx.coeff_tol);
    const double lhs = detail::f_quadratic_form(A, ed, f, x);
    const double chord =
        (iv.M - g_bar) / (iv.M - iv.m) * f(iv.m) + (g_bar - iv.m) / (iv.M - iv.m) * f(iv.M);
    const double rhs = coeff * chord;
    return make_report(name, lhs, rhs, coeff, ctx.policy,
                       make_witness(A, x, f.spec(), h.spec(), ctx.seed,
                                    ctx.override_positivity));
}

// Objective for the endpoint maximization: F(u, v) with u the coefficient
// times the endpoint chord and v = f at the matching point. The caller
// asserts monotonicity in u; it is spot-checked on 100 sampled triples.
struct FObjective {
    std::function<double(double, double)> rule;
    bool monotone_in_u = true;
};

struct MaximizeResult {
    double theta = 0.0;
    double value = 0.0;
};

// max over theta in [0,1] of F(C (theta f(m) + (1-theta) f(M)), f(theta m + (1-theta) M)).
// Uniform grid scan, then golden-section refinement to 1e-10 in theta; ties
// break toward smaller theta.
inline MaximizeResult maximize_F(const FObjective& F, const ScalarFunction& f, const HFunction& h,
                                 const SpectrumInterval& interval,
                                 const CoefficientPolicy& policy = CoefficientPolicy::safe(),
                                 int grid = 101) {
    const double coeff = jensen_coefficient(h, policy);
    const double fm = f(interval.m);
    const double fM = f(interval.M);
    const auto eval = [&](double theta) {
        const double u = coeff * (theta * fm + (1.0 - theta) * fM);
        const double v = f(theta * interval.m + (1.0 - theta) * interval.M);
        const double value = F.rule(u, v);
        if (!std::isfinite(value))
            throw ObjectiveDomainError("objective not finite at theta=" + std::to_string(theta) +
                                       " (u=" + std::to_string(u) + ", v=" + std::to_string(v) +
                                       ")");
        return value;
    };

    if (F.monotone_in_u) {
        const double u_lo = coeff * std::min(fm, fM);
        const double u_hi = coeff * std::max(fm, fM);
        const double v_lo = std::min(fm, fM);
        const double v_hi = std::max(fm, fM);
        Rng rng(12345);
        for (int k = 0; k < 100; ++k) {
            double u1 = rng.uniform(u_lo, u_hi);
            double u2 = rng.uniform(u_lo, u_hi);
            if (u2 < u1) std::swap(u1, u2);
            const double v = rng.uniform(v_lo, v_hi);
            const double a = F.rule(u1, v);
            const double b = F.rule(u2, v);
            if (std::isfinite(a) && std::isfinite(b) &&
                a > b + 1e-12 * std::max(1.0, std::abs(b)))
                throw ConfigError("objective asserted monotone in u but F(" +
                                  std::to_string(u1) + ",v) > F(" + std::to_string(u2) + ",v)");
        }
    }

    const auto [theta, neg_value] =
        grid_golden_min([&eval](double t) { return -eval(t); }, 0.0, 1.0, grid, 1e-10);
    return MaximizeResult{theta, -neg_value};
}

struct HermiteHadamardResult {
    InequalityReport lower;          // (1/C) f(barycenter) <= <f(A)x,x>
    InequalityReport upper;          // <f(A)x,x> <= C (p f(m) + q f(M))/(p+q)
    InequalityReport chain_squared;  // f(barycenter) <= C^2 (p f(m) + q f(M))/(p+q)
};

// Two-sided bound at a matched barycenter <Ax,x> = (pm+qM)/(p+q). The
// squared-coefficient chain is reported separately: the two-step derivation
// (Jensen then endpoint bound) yields C^2 on the outer path even though the
// statement form carries a single C.
inline HermiteHadamardResult hermite_hadamard_check(
    const ScalarFunction& f, const HFunction& h, const SymMatrix& A, const UnitVector& x,
    double p, double q, const CheckContext& ctx = {},
    const std::optional<SpectrumInterval>& interval = {}) {
    if (p < 0.0 || q < 0.0 || !(p + q > 0.0))
        throw ConfigError("weights must satisfy p, q >= 0 and p + q > 0");
    const auto ed = eigh(A);
    detail::require_positive_spectrum(ed, ctx.override_positivity);
    const auto iv = detail::enclosing_interval(ed, interval);
    const double g_bar = quadratic_form(A, x);
    const double barycenter = (p * iv.m + q * iv.M) / (p + q);
    const double residual = std::abs(g_bar - barycenter);
    if (residual > 1e-9)
        throw ConfigError("<Ax,x> does not match the (p,q) barycenter: residual " +
                          std::to_string(residual));
    const double coeff = jensen_coefficient(h, ctx.policy, ctx.coeff_tol);
    const double fx_form = detail::f_quadratic_form(A, ed, f, x);
    const double endpoint_avg = (p * f(iv.m) + q * f(iv.M)) / (p + q);
    auto witness =
        make_witness(A, x, f.spec(), h.spec(), ctx.seed, ctx.override_positivity);

    HermiteHadamardResult out{
        make_report("hh-lower", f(barycenter) / coeff, fx_form, coeff, ctx.policy, witness),
        make_report("hh-upper", fx_form, coeff * endpoint_avg, coeff, ctx.policy, witness),
        make_report("hh-chain-squared", f(barycenter), coeff * coeff * endpoint_avg, coeff,
                    ctx.policy, std::move(witness))};
    return out;
}

// f(sum <A_i x_i, x_i>) <= C sum <f(A_i) x_i, x_i> with sum ||x_i||^2 = 1.
// The block-diagonal single-operator path must agree to 1e-10; both sides
// of that agreement are recomputed here.
inline InequalityReport multi_operator_check(const ScalarFunction& f, const HFunction& h,
                                             const std::vector<SymMatrix>& As,
                                             const VectorFamily& xs,
                                             const CheckContext& ctx = {},
                                             const std::string& name = "thm6") {
    if (As.empty()) throw DimensionError("multi-operator check requires at least one operator");
    if (As.size() != xs.size())
        throw DimensionError("operator count " + std::to_string(As.size()) +
                             " does not match vector count " + std::to_string(xs.size()));
    double g_sum = 0.0;
    double fx_sum = 0.0;
    for (std::size_t i = 0; i < As.size(); ++i) {
        if (static_cast<int>(xs[i].size()) != As[i].dim())
            throw DimensionError("vector " + std::to_string(i) + " does not match its operator");
        const auto ed = eigh(As[i]);
        detail::require_positive_spectrum(ed, ctx.override_positivity);
        const auto& xi = xs[i];
        const auto yi = As[i].apply(xi);
        const SymMatrix fAi = matrix_function(As[i], f, ed);
        const auto fyi = fAi.apply(xi);
        for (std::size_t k = 0; k < xi.size(); ++k) {
            g_sum += xi[k] * yi[k];
            fx_sum += xi[k] * fyi[k];
        }
    }
    const double coeff = jensen_coefficient(h, ctx.policy, ctx.coeff_tol);
    const double lhs = f(g_sum);
    const double rhs = coeff * fx_sum;

    // Block-diagonal path: same inequality on the composed operator.
    const SymMatrix block = block_diag(As);
    std::vector<double> stacked;
    for (const auto& xi : xs.vectors()) stacked.insert(stacked.end(), xi.begin(), xi.end());
    const UnitVector x_tilde = UnitVector::normalized(std::move(stacked));
    const double g_block = quadratic_form(block, x_tilde);
    const double fx_block = detail::f_quadratic_form(block, eigh(block), f, x_tilde);
    if (std::abs(g_block - g_sum) > 1e-10 || std::abs(fx_block - fx_sum) > 1e-10)
        throw ConvergenceError("block-diagonal path disagrees with the summed path beyond 1e-10");

    auto report = make_report(name, lhs, rhs, coeff, ctx.policy,
                              make_witness(block, x_tilde, f.spec(), h.spec(), ctx.seed,
                                           ctx.override_positivity));
    return report;
}

// f(sum p_i <A_i x, x>) <= C sum p_i <f(A_i) x, x> for a weight vector
// summing to 1; equivalent to the multi-operator form under x_i = sqrt(p_i) x.
inline InequalityReport weighted_multi_check(const ScalarFunction& f, const HFunction& h,
                                             const std::vector<SymMatrix>& As,
                                             const UnitVector& x, const std::vector<double>& ps,
                                             const CheckContext& ctx = {}) {
    if (As.empty()) throw DimensionError("weighted check requires at least one operator");
    if (As.size() != ps.size())
        throw DimensionError("operator count does not match weight count");
    double p_sum = 0.0;
    for (double p : ps) {
        if (p < 0.0) throw ConfigError("weights must be nonnegative");
        p_sum += p;
    }
    if (std::abs(p_sum - 1.0) > 1e-12)
        throw ConfigError("weights sum to " + std::to_string(p_sum) + ", not 1 within 1e-12");

    double g_sum = 0.0;
    double fx_sum = 0.0;
    for (std::size_t i = 0; i < As.size(); ++i) {
        const auto ed = eigh(As[i]);
        detail::require_positive_spectrum(ed, ctx.override_positivity);
        g_sum += ps[i] * quadratic_form(As[i], x);
        fx_sum += ps[i] * detail::f_quadratic_form(As[i], ed, f, x);
    }
    const double coeff = jensen_coefficient(h, ctx.policy, ctx.coeff_tol);
    const double lhs = f(g_sum);
    const double rhs = coeff * fx_sum;

    // Substitution path x_i = sqrt(p_i) x must match to 1e-12.
    std::vector<std::vector<double>> family;
    family.reserve(As.size());
    for (double p : ps) {
        std::vector<double> xi = x.components();
        const double root = std::sqrt(p);
        for (double& c : xi) c *= root;
        family.push_back(std::move(xi));
    }
    double g_subst = 0.0;
    double fx_subst = 0.0;
    for (std::size_t i = 0; i < As.size(); ++i) {
        const auto& xi = family[i];
        const auto yi = As[i].apply(xi);
        const auto fyi = matrix_function(As[i], f).apply(xi);
        for (std::size_t k = 0; k < xi.size(); ++k) {
            g_subst += xi[k] * yi[k];
            fx_subst += xi[k] * fyi[k];
        }
    }
    if (std::abs(g_subst - g_sum) > 1e-12 || std::abs(fx_subst - fx_sum) > 1e-12)
        throw ConvergenceError("sqrt(p_i) substitution path disagrees beyond 1e-12");

    const SymMatrix block = block_diag(As);
    std::vector<double> stacked;
    for (const auto& xi : family) stacked.insert(stacked.end(), xi.begin(), xi.end());
    auto report = make_report("cor6", lhs, rhs, coeff, ctx.policy,
                              Witness{block.dim(), block.data(), stacked, f.spec(), h.spec(),
                                      ctx.seed, ctx.override_positivity});
    return report;
}

}  // namespace opjensen
