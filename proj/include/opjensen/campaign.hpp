#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opjensen/converse.hpp"
#include "opjensen/instance.hpp"
#include "opjensen/jensen.hpp"
#include "opjensen/report.hpp"

namespace opjensen {

struct CampaignConfig {
    std::string target = "thm1";
    std::string f_spec = "square";
    std::string h_spec = "identity";
    int n_lo = 1;
    int n_hi = 8;
    double m = 1.0;
    double M = 2.0;
    int trials = 100;
    std::uint64_t seed = 0;
    CoefficientPolicy policy = CoefficientPolicy::safe();
    bool override_positivity = false;
    int operators = 3;                 // thm6 / cor6 / multi-converse
    std::vector<double> subdivision;   // interior knots, converse target only
    bool paper_instance = false;       // search: the diag(1,0) counterexample instance
    int lambda_grid = 0;               // search: deterministic lambda grid size (0 = sampled)
};

struct CampaignSummary {
    long total = 0;
    long held = 0;
    long violated = 0;
    long vacuous = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::optional<ordered_json> first_violation;
    long lower_half_violations = 0;  // search only: violations in lambda <= 1/2
    double wall_seconds = 0.0;

    void add(const InequalityReport& r) {
        ++total;
        if (r.vacuous) ++vacuous;
        else if (r.holds) ++held;
        else ++violated;
        if (std::isfinite(r.slack)) worst_slack = std::min(worst_slack, r.slack);
        if (!r.holds && !r.vacuous && !first_violation) first_violation = to_json(r);
    }
};

using ReportSink = std::function<void(const ordered_json&)>;

inline ordered_json summary_to_json(const CampaignSummary& s) {
    ordered_json j;
    j["total"] = s.total;
    j["held"] = s.held;
    j["violated"] = s.violated;
    j["vacuous"] = s.vacuous;
    if (std::isfinite(s.worst_slack)) j["worst_slack"] = s.worst_slack;
    else j["worst_slack"] = nullptr;
    j["first_violation"] = s.first_violation ? *s.first_violation : ordered_json(nullptr);
    return j;
}

namespace detail {

inline int sample_dim(Rng& rng, int lo, int hi) {
    if (lo == hi) return lo;
    return lo + static_cast<int>(rng.raw() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline void validate_campaign(const CampaignConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (cfg.n_lo < 1 || cfg.n_hi < cfg.n_lo) throw ConfigError("invalid dimension range");
    if (cfg.n_hi > kMaxDim) throw ConfigError("dimension cap is " + std::to_string(kMaxDim));
    if (!(cfg.m < cfg.M)) throw ConfigError("interval must satisfy m < M");
    if (!(cfg.m > 0.0) && !cfg.override_positivity)
        throw ConfigError("interval requires 0 < m (or the positivity override)");
    const bool needs_two = cfg.target == "thm3" || cfg.target == "thm5" ||
                           cfg.target == "converse" || cfg.target == "multi-converse";
    if (needs_two && cfg.n_hi < 2)
        throw ConfigError("target '" + cfg.target + "' needs dimension >= 2");
}

// Matched-barycenter instance for the two-sided bound: endpoint-pinned
// spectrum, x supported on the extreme eigenvectors so <Ax,x> lands on
// (pm+qM)/(p+q) by construction.
struct BarycenterInstance {
    SymMatrix A;
    UnitVector x;
    double p, q;
};

inline BarycenterInstance barycenter_instance(int n, const SpectrumInterval& interval,
                                              std::uint64_t seed) {
    Rng rng(seed);
    const double theta = rng.uniform(1e-6, 1.0 - 1e-6);
    const double scale = rng.uniform(0.5, 2.0);
    auto inst = generate_instance(n, interval, rng.raw(), /*pin_endpoints=*/true);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    const double c_lo = std::sqrt(theta);
    const double c_hi = std::sqrt(1.0 - theta);
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] =
            c_lo * inst.basis(i, 0) + c_hi * inst.basis(i, n - 1);
    return BarycenterInstance{std::move(inst.A), UnitVector::normalized(std::move(x)),
                              theta * scale, (1.0 - theta) * scale};
}

}  // namespace detail

// Seeded campaign for the selected inequality. One seed per trial
// (cfg.seed + index); pair-producing targets emit two report lines per
// trial and the summary counts reports.
inline CampaignSummary run_verify(const CampaignConfig& cfg, const ReportSink& sink) {
    detail::validate_campaign(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const ScalarFunction f = ScalarFunction::parse(cfg.f_spec);
    const HFunction h = HFunction::parse(cfg.h_spec);
    CampaignSummary summary;

    const auto emit = [&](const InequalityReport& r) {
        summary.add(r);
        if (sink) sink(to_json(r));
    };

    const bool pair_target = cfg.target == "thm5" || cfg.target == "converse" ||
                             cfg.target == "multi-converse";
    const bool multi_target = cfg.target == "thm6" || cfg.target == "cor6" ||
                              cfg.target == "multi-converse";
    if (multi_target && cfg.operators < 1) throw ConfigError("need at least one operator");
    if (multi_target && cfg.operators * cfg.n_hi > kMaxDim)
        throw ConfigError("operators * max dimension exceeds the cap of " +
                          std::to_string(kMaxDim));

    std::optional<PiecewiseC2Function> pf;
    if (pair_target && cfg.target != "thm5")
        pf.emplace(f, SpectrumInterval(cfg.m, cfg.M), cfg.subdivision);

    for (int idx = 0; idx < cfg.trials; ++idx) {
        const std::uint64_t trial_seed = cfg.seed + static_cast<std::uint64_t>(idx);
        Rng trial_rng(trial_seed);
        CheckContext ctx{cfg.policy, cfg.override_positivity, trial_seed};

        if (cfg.target == "thm1" || cfg.target == "thm1-paper-literal") {
            if (cfg.target == "thm1-paper-literal") ctx.policy = CoefficientPolicy::paper();
            const int n = detail::sample_dim(trial_rng, cfg.n_lo, cfg.n_hi);
            auto inst = generate_instance_raw(n, cfg.m, cfg.M, trial_rng.raw());
            emit(mond_pecaric_check(f, h, inst.A, inst.x, ctx, cfg.target));
        } else if (cfg.target == "thm3") {
            // n >= 2: a 1-dim operator has a degenerate spectrum hull.
            const int n = detail::sample_dim(trial_rng, std::max(2, cfg.n_lo), cfg.n_hi);
            auto inst = generate_instance_raw(n, cfg.m, cfg.M, trial_rng.raw());
            emit(endpoint_bound_check(f, h, inst.A, inst.x, ctx));
        } else if (cfg.target == "thm5") {
            const int n = detail::sample_dim(trial_rng, std::max(2, cfg.n_lo), cfg.n_hi);
            auto inst = detail::barycenter_instance(n, SpectrumInterval(cfg.m, cfg.M),
                                                    trial_rng.raw());
            auto hh = hermite_hadamard_check(f, h, inst.A, inst.x, inst.p, inst.q, ctx);
            emit(hh.lower);
            emit(hh.upper);
        } else if (cfg.target == "thm6") {
            std::vector<SymMatrix> As;
            std::vector<std::vector<double>> raw;
            for (int k = 0; k < cfg.operators; ++k) {
                const int n = detail::sample_dim(trial_rng, cfg.n_lo, cfg.n_hi);
                auto inst = generate_instance_raw(n, cfg.m, cfg.M, trial_rng.raw());
                As.push_back(std::move(inst.A));
                std::vector<double> v(static_cast<std::size_t>(n));
                for (auto& c : v) c = trial_rng.normal();
                raw.push_back(std::move(v));
            }
            emit(multi_operator_check(f, h, As, VectorFamily::normalized(std::move(raw)), ctx));
        } else if (cfg.target == "cor6") {
            const int n = detail::sample_dim(trial_rng, cfg.n_lo, cfg.n_hi);
            std::vector<SymMatrix> As;
            std::vector<double> ps;
            double p_sum = 0.0;
            for (int k = 0; k < cfg.operators; ++k) {
                auto inst = generate_instance_raw(n, cfg.m, cfg.M, trial_rng.raw());
                As.push_back(std::move(inst.A));
                ps.push_back(trial_rng.uniform(0.01, 1.0));
                p_sum += ps.back();
            }
            for (auto& p : ps) p /= p_sum;
            const UnitVector x = UnitVector::normalized(trial_rng.unit_sphere(n));
            emit(weighted_multi_check(f, h, As, x, ps, ctx));
        } else if (cfg.target == "converse") {
            const int n = detail::sample_dim(trial_rng, std::max(2, cfg.n_lo), cfg.n_hi);
            auto inst = generate_instance_raw(n, cfg.m, cfg.M, trial_rng.raw(),
                                              /*pin_endpoints=*/true);
            auto pair = converse_check(*pf, h, inst.A, inst.x, ctx);
            emit(pair.first);
            emit(pair.second);
        } else if (cfg.target == "multi-converse") {
            std::vector<SymMatrix> As;
            std::vector<std::vector<double>> raw;
            for (int k = 0; k < cfg.operators; ++k) {
                const int n = detail::sample_dim(trial_rng, std::max(2, cfg.n_lo), cfg.n_hi);
                auto inst = generate_instance_raw(n, cfg.m, cfg.M, trial_rng.raw(),
                                                  /*pin_endpoints=*/true);
                As.push_back(std::move(inst.A));
                std::vector<double> v(static_cast<std::size_t>(n));
                for (auto& c : v) c = trial_rng.normal();
                raw.push_back(std::move(v));
            }
            auto pair = multi_converse_check(*pf, h, As, VectorFamily::normalized(std::move(raw)),
                                             ctx);
            emit(pair.first);
            emit(pair.second);
        } else {
            throw ConfigError("unknown verify target '" + cfg.target + "'");
        }
    }
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

// Samples the pointwise inequality over lambda in (1/2, 1) recording every
// violation; when h(t)/t is decreasing it also sweeps lambda in (0, 1/2],
// where zero violations are expected (any hit is flagged separately).
inline CampaignSummary run_search(const CampaignConfig& cfg, const ReportSink& sink) {
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const ScalarFunction f = ScalarFunction::parse(cfg.f_spec);
    const HFunction h = HFunction::parse(cfg.h_spec);
    CampaignSummary summary;

    const auto paper_A = SymMatrix::diagonal({1.0, 0.0});
    const auto paper_x = UnitVector::normalized({1.0, 1.0});

    const auto run_phase = [&](bool upper) {
        const int count = cfg.lambda_grid > 0 ? cfg.lambda_grid : cfg.trials;
        for (int j = 0; j < count; ++j) {
            const std::uint64_t trial_seed = cfg.seed + static_cast<std::uint64_t>(j);
            Rng trial_rng(trial_seed);
            double lambda;
            if (cfg.lambda_grid > 0) {
                const double frac = static_cast<double>(j + 1) / (count + 1);
                lambda = upper ? 0.5 + 0.5 * frac : 0.5 * (j + 1) / count;
            } else {
                lambda = upper ? trial_rng.uniform(0.5 + 1e-9, 1.0 - 1e-9)
                               : trial_rng.uniform(1e-9, 0.5);
            }
            CheckContext ctx{cfg.policy, cfg.override_positivity, trial_seed};
            InequalityReport report = [&] {
                if (cfg.paper_instance) {
                    CheckContext paper_ctx = ctx;
                    paper_ctx.override_positivity = true;
                    return lambda_pointwise_check(f, h, paper_A, paper_x, lambda, paper_ctx);
                }
                Rng inst_rng(trial_rng.raw());
                const int n = detail::sample_dim(inst_rng, cfg.n_lo, cfg.n_hi);
                auto inst = generate_instance_raw(n, cfg.m, cfg.M, inst_rng.raw());
                return lambda_pointwise_check(f, h, inst.A, inst.x, lambda, ctx);
            }();
            summary.add(report);
            if (!upper && !report.holds && !report.vacuous) ++summary.lower_half_violations;
            if (sink) sink(to_json(report));
        }
    };

    run_phase(/*upper=*/true);
    if (is_h_over_t_decreasing(h)) run_phase(/*upper=*/false);

    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

// Reruns a serialized report from its witness alone.
inline InequalityReport replay(const nlohmann::json& jr) {
    const std::string name = jr.at("name").get<std::string>();
    const CoefficientPolicy policy =
        CoefficientPolicy::parse(jr.at("policy").get<std::string>());
    const Witness w = witness_from_json(jr.at("witness"));
    const SymMatrix A(w.n, w.matrix);
    const UnitVector x(w.x);
    const ScalarFunction f = ScalarFunction::parse(w.f);
    const HFunction h = HFunction::parse(w.h);
    const CheckContext ctx{policy, w.override_positivity, w.seed};

    if (name == "thm1" || name == "thm1-paper-literal" || name == "thm6" || name == "cor6")
        return mond_pecaric_check(f, h, A, x, ctx, name);
    if (name == "pointwise") {
        if (policy.mode != CoefficientPolicy::Mode::PointwiseLambda)
            throw ConfigError("pointwise report without a pointwise policy");
        return lambda_pointwise_check(f, h, A, x, policy.lambda, ctx);
    }
    if (name == "thm3") return endpoint_bound_check(f, h, A, x, ctx);
    if (name == "hh-lower" || name == "hh-upper" || name == "hh-chain-squared") {
        const auto ed = eigh(A);
        const double lo = ed.eigenvalues.front();
        const double hi = ed.eigenvalues.back();
        const double g_bar = quadratic_form(A, x);
        const double theta = (hi - g_bar) / (hi - lo);
        auto hh = hermite_hadamard_check(f, h, A, x, theta, 1.0 - theta, ctx);
        if (name == "hh-lower") return hh.lower;
        if (name == "hh-upper") return hh.upper;
        return hh.chain_squared;
    }
    if (name == "converse-i" || name == "converse-ii" || name == "multi-converse-i" ||
        name == "multi-converse-ii") {
        const auto ed = eigh(A);
        const PiecewiseC2Function pf(f,
                                     SpectrumInterval(ed.eigenvalues.front(),
                                                      ed.eigenvalues.back()));
        auto pair = converse_check(pf, h, A, x, ctx);
        auto& chosen = (name == "converse-i" || name == "multi-converse-i") ? pair.first
                                                                            : pair.second;
        chosen.name = name;
        return chosen;
    }
    throw ConfigError("cannot replay report named '" + name + "'");
}

}  // namespace opjensen
