#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opjensen/coefficient.hpp"
#include "opjensen/jensen.hpp"
#include "opjensen/matrix.hpp"
#include "opjensen/report.hpp"
#include "opjensen/rootfind.hpp"

namespace opjensen {

enum class PieceClass { Convex, Concave, FlatOrNeither };

inline const char* to_string(PieceClass c) {
    switch (c) {
        case PieceClass::Convex: return "convex";
        case PieceClass::Concave: return "concave";
        case PieceClass::FlatOrNeither: return "flat_or_neither";
    }
    return "?";
}

// Per-piece data of the converse construction: chord slope mu, chord L,
// classification by the sign of f'', the stationary points of the ratio and
// difference problems, and the resulting per-piece contributions.
struct PieceData {
    int index = 0;  // 1-based
    double x_lo = 0.0;
    double x_hi = 0.0;
    double mu = 0.0;
    PieceClass cls = PieceClass::FlatOrNeither;
    std::optional<double> t_bar_ratio;
    std::optional<double> t_bar_diff;
    double lambda_ratio = 1.0;  // contribution to alpha (max of L/f on the piece)
    double lambda_diff = 0.0;   // contribution to beta (max of L - f on the piece)

    double chord(double t) const { return f_lo + mu * (t - x_lo); }
    double f_lo = 0.0;  // f(x_lo), fixed at classification time
};

// Piecewise continuously twice differentiable function on [m, M]: a base
// function plus a strictly increasing subdivision m = x_0 < ... < x_n = M.
// The constant-sign requirement on f'' per piece is enforced when the
// pieces are classified.
class PiecewiseC2Function {
public:
    PiecewiseC2Function(ScalarFunction base, const SpectrumInterval& interval,
                        std::vector<double> interior_knots = {})
        : f_(std::move(base)) {
        knots_.push_back(interval.m);
        for (double k : interior_knots) {
            if (!(k > knots_.back()))
                throw InvalidSubdivisionError("subdivision must be strictly increasing inside (" +
                                              std::to_string(interval.m) + ", " +
                                              std::to_string(interval.M) + ")");
            if (!(k < interval.M))
                throw InvalidSubdivisionError("interior knot " + std::to_string(k) +
                                              " is not below M");
            knots_.push_back(k);
        }
        knots_.push_back(interval.M);
        if (!f_.in_domain(interval.m) || !f_.in_domain(interval.M))
            throw FunctionDomainError("f('" + f_.spec() + "') is not defined on [m, M]");
    }

    const ScalarFunction& base() const { return f_; }
    const std::vector<double>& knots() const { return knots_; }
    double m() const { return knots_.front(); }
    double M() const { return knots_.back(); }
    SpectrumInterval interval() const { return SpectrumInterval(m(), M()); }
    int piece_count() const { return static_cast<int>(knots_.size()) - 1; }

private:
    ScalarFunction f_;
    std::vector<double> knots_;
};

namespace detail {

inline constexpr int kSignSamples = 101;
inline constexpr double kSignEps = 1e-12;

inline double mu_tolerance(double f_lo, double f_hi) {
    return 1e-13 * std::max({1.0, std::abs(f_lo), std::abs(f_hi)});
}

}  // namespace detail

// Labels each piece by the sampled sign of f'' (101 interior points plus
// the one-sided limits at the knots). A sign change within a piece is a
// subdivision defect, not a classification: the caller must refine.
inline std::vector<PieceData> classify_intervals(const PiecewiseC2Function& pf) {
    const auto& f = pf.base();
    std::vector<PieceData> pieces;
    for (int i = 1; i < static_cast<int>(pf.knots().size()); ++i) {
        const double lo = pf.knots()[static_cast<std::size_t>(i - 1)];
        const double hi = pf.knots()[static_cast<std::size_t>(i)];
        bool any_pos = false, any_neg = false, all_pos = true, all_neg = true;
        for (int k = 1; k <= detail::kSignSamples; ++k) {
            const double t = lo + (hi - lo) * k / (detail::kSignSamples + 1);
            const double d2 = f.deriv2(t);
            if (d2 > detail::kSignEps) any_pos = true;
            else all_pos = false;
            if (d2 < -detail::kSignEps) any_neg = true;
            else all_neg = false;
        }
        if (any_pos && any_neg)
            throw InvalidSubdivisionError(
                "f'' changes sign inside piece [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]; refine the subdivision at the inflection point");

        PieceData piece;
        piece.index = i;
        piece.x_lo = lo;
        piece.x_hi = hi;
        piece.f_lo = f(lo);
        piece.mu = (f(hi) - f(lo)) / (hi - lo);
        const double d2_lo = f.deriv2(lo);
        const double d2_hi = f.deriv2(hi);
        if (all_pos && d2_lo > 0.0 && d2_hi > 0.0) piece.cls = PieceClass::Convex;
        else if (all_neg && d2_lo < 0.0 && d2_hi < 0.0) piece.cls = PieceClass::Concave;
        else piece.cls = PieceClass::FlatOrNeither;
        pieces.push_back(piece);
    }
    return pieces;
}

// Root of G(t) = mu f(t) - L(t) f'(t) in (x_lo, x_hi). For a convex piece
// G(x_lo) and G(x_hi) have opposite signs, so bisection applies.
inline double solve_ratio_stationary(const PieceData& piece, const ScalarFunction& f) {
    const auto g = [&](double t) { return piece.mu * f(t) - piece.chord(t) * f.deriv(t); };
    return bisect(g, piece.x_lo, piece.x_hi, 1e-12, 200);
}

// Root of mu - f'(t): f' is increasing on a convex piece and crosses mu.
inline double solve_diff_stationary(const PieceData& piece, const ScalarFunction& f) {
    const auto g = [&](double t) { return piece.mu - f.deriv(t); };
    return bisect(g, piece.x_lo, piece.x_hi, 1e-12, 200);
}

// The pair (alpha, beta) of the converse inequalities together with the
// per-piece diagnostics and the active coefficient.
struct ConverseConstants {
    double alpha = 1.0;
    double beta = 0.0;
    double coefficient = 1.0;
    std::vector<PieceData> pieces;

    double prefactor_i() const { return 1.0 / (coefficient * alpha); }
    double prefactor_ii() const { return 1.0 / coefficient; }
};

// alpha = max(1, per-piece max of L/f), beta = max(0, per-piece max of L-f).
// Convex pieces get their maxima from the stationary-point solvers; concave
// pieces contribute the floors exactly; flat pieces with a nonzero slope
// have L == f, so they contribute the floors as well. A flat piece with
// zero slope uses the interior stationary point of f' when one exists.
inline ConverseConstants compute_constants(const PiecewiseC2Function& pf, const HFunction& h,
                                           const CoefficientPolicy& policy,
                                           double coeff_tol = 1e-10) {
    const auto& f = pf.base();

    // The ratio mode divides by f; require strict positivity on a grid.
    constexpr int kPositivityGrid = 1001;
    for (int k = 0; k <= kPositivityGrid; ++k) {
        const double t = pf.m() + (pf.M() - pf.m()) * k / kPositivityGrid;
        if (f(t) < 1e-12)
            throw PositivityError("f('" + f.spec() + "') drops to " + std::to_string(f(t)) +
                                  " at t=" + std::to_string(t) +
                                  "; the ratio mode requires f > 0 on [m, M]");
    }

    ConverseConstants out;
    out.coefficient = jensen_coefficient(h, policy, coeff_tol);
    out.pieces = classify_intervals(pf);
    for (auto& piece : out.pieces) {
        switch (piece.cls) {
            case PieceClass::Concave:
                piece.lambda_ratio = 1.0;
                piece.lambda_diff = 0.0;
                break;
            case PieceClass::Convex: {
                const double t_r = solve_ratio_stationary(piece, f);
                const double t_d = solve_diff_stationary(piece, f);
                piece.t_bar_ratio = t_r;
                piece.t_bar_diff = t_d;
                piece.lambda_ratio = piece.chord(t_r) / f(t_r);
                piece.lambda_diff = piece.chord(t_d) - f(t_d);
                break;
            }
            case PieceClass::FlatOrNeither: {
                const double tol = detail::mu_tolerance(f(piece.x_lo), f(piece.x_hi));
                if (std::abs(piece.mu) > tol) {
                    // Nonzero slope with f'' vanishing: the chord equals f.
                    piece.lambda_ratio = 1.0;
                    piece.lambda_diff = 0.0;
                    break;
                }
                const double d_lo = f.deriv(piece.x_lo);
                const double d_hi = f.deriv(piece.x_hi);
                if (d_lo == 0.0 && d_hi == 0.0) {
                    // Constant piece: nothing to maximize.
                    piece.lambda_ratio = 1.0;
                    piece.lambda_diff = 0.0;
                    break;
                }
                if ((d_lo > 0.0) == (d_hi > 0.0)) {
                    piece.lambda_ratio = 1.0;
                    piece.lambda_diff = 0.0;
                    break;
                }
                const double t_bar =
                    bisect([&](double t) { return f.deriv(t); }, piece.x_lo, piece.x_hi, 1e-12,
                           200);
                if (!(t_bar > piece.x_lo && t_bar < piece.x_hi))
                    throw StationaryPointError("stationary point of f' is not interior to piece " +
                                               std::to_string(piece.index));
                piece.t_bar_ratio = t_bar;
                piece.t_bar_diff = t_bar;
                piece.lambda_ratio = f(piece.x_lo) / f(t_bar);
                piece.lambda_diff = f(piece.x_lo) - f(t_bar);
                break;
            }
        }
        out.alpha = std::max(out.alpha, piece.lambda_ratio);
        out.beta = std::max(out.beta, piece.lambda_diff);
    }
    return out;
}

// (i)  <f(A)x,x> / (C alpha) <= f(<Ax,x>)
// (ii) <f(A)x,x> / C - beta  <= f(<Ax,x>)
inline std::pair<InequalityReport, InequalityReport> converse_check(
    const PiecewiseC2Function& pf, const HFunction& h, const SymMatrix& A, const UnitVector& x,
    const CheckContext& ctx = {}) {
    const auto ed = eigh(A);
    detail::require_positive_spectrum(ed, ctx.override_positivity);
    if (ed.eigenvalues.front() < pf.m() - 1e-9 || ed.eigenvalues.back() > pf.M() + 1e-9)
        throw ConfigError("spectrum is not contained in [m, M] = [" + std::to_string(pf.m()) +
                          ", " + std::to_string(pf.M()) + "]");
    const auto constants = compute_constants(pf, h, ctx.policy, ctx.coeff_tol);
    const double fx_form = detail::f_quadratic_form(A, ed, pf.base(), x);
    const double f_gbar = pf.base()(quadratic_form(A, x));
    auto witness =
        make_witness(A, x, pf.base().spec(), h.spec(), ctx.seed, ctx.override_positivity);
    InequalityReport first =
        make_report("converse-i", fx_form * constants.prefactor_i(), f_gbar,
                    constants.coefficient, ctx.policy, witness);
    InequalityReport second =
        make_report("converse-ii", fx_form * constants.prefactor_ii() - constants.beta, f_gbar,
                    constants.coefficient, ctx.policy, std::move(witness));
    return {std::move(first), std::move(second)};
}

// The converse specialized to the five named families at their Safe
// coefficients 1, 2, 2^{1-s}, 4, 2^{1+s}.
inline ConverseConstants corollary4_constants(const PiecewiseC2Function& pf,
                                              const HFunction& family) {
    if (family.family() == HFunction::Family::Tabulated)
        throw ConfigError("corollary4_constants requires one of the five named families");
    return compute_constants(pf, family, CoefficientPolicy::safe());
}

// Converse pair for several operators at once via the block-diagonal
// composition.
inline std::pair<InequalityReport, InequalityReport> multi_converse_check(
    const PiecewiseC2Function& pf, const HFunction& h, const std::vector<SymMatrix>& As,
    const VectorFamily& xs, const CheckContext& ctx = {}) {
    if (As.empty()) throw DimensionError("multi-converse requires at least one operator");
    if (As.size() != xs.size())
        throw DimensionError("operator count does not match vector count");
    const SymMatrix block = block_diag(As);
    std::vector<double> stacked;
    for (const auto& xi : xs.vectors()) stacked.insert(stacked.end(), xi.begin(), xi.end());
    auto pair = converse_check(pf, h, block, UnitVector::normalized(std::move(stacked)), ctx);
    pair.first.name = "multi-converse-i";
    pair.second.name = "multi-converse-ii";
    return pair;
}

// Inserts the inflection points of f (sign changes of f'' located by
// bisection to 1e-10 in t) into the subdivision so every piece has a
// constant-sign f''.
inline std::vector<double> refine_subdivision(const ScalarFunction& f,
                                              const SpectrumInterval& interval,
                                              std::vector<double> interior_knots = {}) {
    constexpr int kScanPoints = 512;
    std::vector<double> knots = std::move(interior_knots);
    double prev_t = interval.m + (interval.M - interval.m) * 1.0 / (kScanPoints + 1);
    double prev = f.deriv2(prev_t);
    for (int k = 2; k <= kScanPoints; ++k) {
        const double t = interval.m + (interval.M - interval.m) * k / (kScanPoints + 1);
        const double cur = f.deriv2(t);
        if ((prev > detail::kSignEps && cur < -detail::kSignEps) ||
            (prev < -detail::kSignEps && cur > detail::kSignEps))
            knots.push_back(
                bisect([&f](double s) { return f.deriv2(s); }, prev_t, t, 1e-10, 200));
        prev_t = t;
        prev = cur;
    }
    std::sort(knots.begin(), knots.end());
    const double gap = 1e-9 * (interval.M - interval.m);
    std::vector<double> interior;
    for (double k : knots) {
        if (k <= interval.m + gap || k >= interval.M - gap) continue;
        if (!interior.empty() && k - interior.back() <= gap) continue;
        interior.push_back(k);
    }
    return interior;
}

}  // namespace opjensen
