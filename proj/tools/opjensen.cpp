// Command-line front end: coefficient tables, seeded verification
// campaigns, converse constants, and counterexample search. Exit codes:
// 0 on zero violations, 1 when violations were recorded, 2 on config errors.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opjensen/campaign.hpp"
#include "opjensen/converse.hpp"

namespace {

using namespace opjensen;

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
    const auto values = detail::parse_number_list(text, 0);
    if (values.size() != 2) throw ConfigError(std::string(what) + " expects two numbers 'a,b'");
    return {values[0], values[1]};
}

std::uint64_t effective_seed(std::uint64_t cli_seed) {
    if (const char* env = std::getenv("OPJENSEN_SEED")) {
        char* end = nullptr;
        const std::uint64_t v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw ConfigError("OPJENSEN_SEED is not an integer: '" + std::string(env) + "'");
        return v;
    }
    return cli_seed;
}

// JSON lines go to --out when given, stdout otherwise; summaries stay
// deterministic (wall time is reported on stderr only).
class JsonOutput {
public:
    explicit JsonOutput(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    void write(const ordered_json& j) { stream() << j.dump() << "\n"; }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void print_summary(const CampaignConfig& cfg, const CampaignSummary& s) {
    std::fprintf(stderr,
                 "target=%s trials=%d reports=%ld held=%ld violated=%ld vacuous=%ld "
                 "worst_slack=%.6g wall=%.3fs\n",
                 cfg.target.c_str(), cfg.trials, s.total, s.held, s.violated, s.vacuous,
                 s.worst_slack, s.wall_seconds);
}

ordered_json constants_to_json(const ConverseConstants& cc) {
    ordered_json j;
    j["alpha"] = cc.alpha;
    j["beta"] = cc.beta;
    j["coefficient"] = cc.coefficient;
    ordered_json pieces = ordered_json::array();
    for (const auto& p : cc.pieces) {
        ordered_json pj;
        pj["i"] = p.index;
        pj["x_lo"] = p.x_lo;
        pj["x_hi"] = p.x_hi;
        pj["mu"] = p.mu;
        pj["class"] = to_string(p.cls);
        pj["t_bar_ratio"] = p.t_bar_ratio ? ordered_json(*p.t_bar_ratio) : ordered_json(nullptr);
        pj["t_bar_diff"] = p.t_bar_diff ? ordered_json(*p.t_bar_diff) : ordered_json(nullptr);
        pj["lambda_ratio"] = p.lambda_ratio;
        pj["lambda_diff"] = p.lambda_diff;
        pieces.push_back(std::move(pj));
    }
    j["pieces"] = std::move(pieces);
    return j;
}

struct CommonFlags {
    std::string f_spec = "square";
    std::string h_spec = "identity";
    std::string policy = "safe";
    std::string interval = "1,2";
    std::string n_range;
    int n = 0;
    int trials = 100;
    std::uint64_t seed = 0;
    bool override_positivity = false;
    std::string out;

    void apply(CampaignConfig& cfg) const {
        cfg.f_spec = f_spec;
        cfg.h_spec = h_spec;
        cfg.policy = CoefficientPolicy::parse(policy);
        const auto [m, M] = parse_pair(interval, "--interval");
        cfg.m = m;
        cfg.M = M;
        if (n > 0) {
            cfg.n_lo = cfg.n_hi = n;
        } else if (!n_range.empty()) {
            const auto [lo, hi] = parse_pair(n_range, "--n-range");
            cfg.n_lo = static_cast<int>(lo);
            cfg.n_hi = static_cast<int>(hi);
        }
        cfg.trials = trials;
        cfg.seed = effective_seed(seed);
        cfg.override_positivity = override_positivity;
    }
};

void only_long_help(CLI::App* cmd) { cmd->set_help_flag("--help", "print help"); }

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_f = true) {
    only_long_help(cmd);
    if (with_f) cmd->add_option("--f", flags.f_spec, "scalar function specifier");
    cmd->add_option("--h", flags.h_spec, "h function specifier");
    cmd->add_option("--policy", flags.policy, "coefficient policy: paper|safe|pointwise:l");
    cmd->add_option("--interval", flags.interval, "spectrum interval m,M");
    cmd->add_option("--n", flags.n, "fixed operator dimension");
    cmd->add_option("--n-range", flags.n_range, "dimension range lo,hi");
    cmd->add_option("--trials", flags.trials, "number of seeded trials");
    cmd->add_option("--seed", flags.seed, "base seed (OPJENSEN_SEED overrides)");
    cmd->add_flag("--override", flags.override_positivity,
                  "skip the 0 < m positivity check on spectra");
    cmd->add_option("--out", flags.out, "write JSON lines to this file");
}

int cmd_coeff(const std::string& h_spec, const std::string& policy_str, double tol) {
    const HFunction h = HFunction::parse(h_spec);
    const CoefficientPolicy policy = CoefficientPolicy::parse(policy_str);
    std::printf("%.13g\n", jensen_coefficient(h, policy, tol));
    return 0;
}

int cmd_table(double s) {
    std::printf("family,coefficient\n");
    std::printf("identity,%.13g\n", classify_coefficient(HFunction::identity()));
    std::printf("constant,%.13g\n", classify_coefficient(HFunction::constant(1.0)));
    std::printf("power:%g,%.13g\n", s, classify_coefficient(HFunction::power(s)));
    std::printf("reciprocal,%.13g\n", classify_coefficient(HFunction::reciprocal()));
    std::printf("recpower:%g,%.13g\n", s, classify_coefficient(HFunction::reciprocal_power(s)));
    return 0;
}

int run_campaign_command(const CampaignConfig& cfg, const std::string& out, bool search) {
    JsonOutput output(out);
    const auto sink = [&output](const ordered_json& j) { output.write(j); };
    const CampaignSummary summary = search ? run_search(cfg, sink) : run_verify(cfg, sink);
    output.write(summary_to_json(summary));
    print_summary(cfg, summary);
    if (search && summary.lower_half_violations > 0)
        std::fprintf(stderr,
                     "WARNING: %ld violations at lambda <= 1/2 where h(t)/t is decreasing "
                     "promises none\n",
                     summary.lower_half_violations);
    return summary.violated > 0 ? 1 : 0;
}

int cmd_hh(const std::string& f_spec, const std::string& h_spec, const std::string& interval,
           double p, double q, const std::string& policy_str, const std::string& out) {
    const ScalarFunction f = ScalarFunction::parse(f_spec);
    const HFunction h = HFunction::parse(h_spec);
    const auto [m, M] = parse_pair(interval, "--interval");
    const SpectrumInterval iv(m, M);
    if (p < 0.0 || q < 0.0 || !(p + q > 0.0))
        throw ConfigError("weights must satisfy p, q >= 0 and p + q > 0");
    const SymMatrix A = SymMatrix::diagonal({iv.m, iv.M});
    const UnitVector x({std::sqrt(p / (p + q)), std::sqrt(q / (p + q))});
    CheckContext ctx;
    ctx.policy = CoefficientPolicy::parse(policy_str);
    const auto result = hermite_hadamard_check(f, h, A, x, p, q, ctx, iv);
    JsonOutput output(out);
    output.write(to_json(result.lower));
    output.write(to_json(result.upper));
    output.write(to_json(result.chain_squared));
    return (result.lower.holds && result.upper.holds) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mond-Pecaric / Jensen operator inequality toolkit"};
    app.require_subcommand(1);
    // --h is an option name here, so the help flag keeps only its long form.
    app.set_help_flag("--help", "print help");

    // coeff
    std::string coeff_h, coeff_policy = "safe";
    double coeff_tol = 1e-10;
    auto* coeff = app.add_subcommand("coeff", "print the Jensen coefficient for h");
    only_long_help(coeff);
    coeff->add_option("--h", coeff_h, "h function specifier")->required();
    coeff->add_option("--policy", coeff_policy, "paper|safe|pointwise:l");
    coeff->add_option("--tol", coeff_tol, "refinement tolerance (tabulated h)");

    // table
    double table_s = 0.5;
    auto* table = app.add_subcommand("table", "CSV of the five safe coefficients");
    only_long_help(table);
    table->add_option("--s", table_s, "exponent for the power families");

    // verify
    CommonFlags verify_flags;
    std::string verify_target;
    int verify_k = 3;
    std::vector<double> verify_subdivision;
    auto* verify = app.add_subcommand("verify", "seeded verification campaign");
    verify->add_option("--target", verify_target,
                       "thm1|thm1-paper-literal|thm3|thm5|thm6|cor6|converse|multi-converse")
        ->required();
    verify->add_option("--k", verify_k, "operator count for multi targets");
    verify->add_option("--subdivision", verify_subdivision, "interior knots (converse)")
        ->delimiter(',');
    add_common(verify, verify_flags);

    // converse
    CommonFlags conv_flags;
    conv_flags.trials = 100;
    std::vector<double> conv_subdivision;
    bool conv_check = false, conv_auto_refine = false;
    auto* conv = app.add_subcommand("converse", "converse constants alpha and beta");
    conv->add_option("--subdivision", conv_subdivision, "interior knots x1,x2,...")
        ->delimiter(',');
    conv->add_flag("--check", conv_check, "also run seeded converse_check trials");
    conv->add_flag("--auto-refine", conv_auto_refine,
                   "insert detected inflection points into the subdivision");
    add_common(conv, conv_flags);

    // search
    CommonFlags search_flags;
    search_flags.trials = 1000;
    bool search_paper = false;
    int search_lambdas = 0;
    auto* search = app.add_subcommand("search", "falsification sweep over pointwise lambda");
    search->add_flag("--paper-instance", search_paper,
                     "use the diag(1,0) counterexample instance");
    search->add_option("--lambdas", search_lambdas, "deterministic lambda grid size");
    add_common(search, search_flags);

    // hh
    std::string hh_f = "square", hh_h = "identity", hh_interval, hh_policy = "safe", hh_out;
    double hh_p = 1.0, hh_q = 1.0;
    auto* hh = app.add_subcommand("hh", "two-sided bound at a matched barycenter");
    only_long_help(hh);
    hh->add_option("--f", hh_f, "scalar function specifier");
    hh->add_option("--h", hh_h, "h function specifier");
    hh->add_option("--interval", hh_interval, "interval m,M")->required();
    hh->add_option("--p", hh_p, "left weight")->required();
    hh->add_option("--q", hh_q, "right weight")->required();
    hh->add_option("--policy", hh_policy, "coefficient policy");
    hh->add_option("--out", hh_out, "write JSON lines to this file");

    // multi
    CommonFlags multi_flags;
    int multi_k = 3;
    bool multi_weighted = false, multi_converse = false;
    auto* multi = app.add_subcommand("multi", "multi-operator campaigns");
    multi->add_option("--k", multi_k, "operator count");
    multi->add_flag("--weighted", multi_weighted, "weighted form (cor6)");
    multi->add_flag("--converse", multi_converse, "converse pair via block composition");
    add_common(multi, multi_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (coeff->parsed()) return cmd_coeff(coeff_h, coeff_policy, coeff_tol);
        if (table->parsed()) return cmd_table(table_s);
        if (verify->parsed()) {
            CampaignConfig cfg;
            verify_flags.apply(cfg);
            cfg.target = verify_target;
            cfg.operators = verify_k;
            cfg.subdivision = verify_subdivision;
            return run_campaign_command(cfg, verify_flags.out, /*search=*/false);
        }
        if (conv->parsed()) {
            CampaignConfig cfg;
            conv_flags.apply(cfg);
            cfg.target = "converse";
            const SpectrumInterval iv(cfg.m, cfg.M);
            const ScalarFunction f = ScalarFunction::parse(cfg.f_spec);
            const HFunction h = HFunction::parse(cfg.h_spec);
            std::vector<double> knots = conv_subdivision;
            if (conv_auto_refine) knots = refine_subdivision(f, iv, knots);
            cfg.subdivision = knots;
            const PiecewiseC2Function pf(f, iv, knots);
            const auto cc = compute_constants(pf, h, cfg.policy);
            JsonOutput output(conv_flags.out);
            output.write(constants_to_json(cc));
            if (!conv_check) return 0;
            const auto sink = [&output](const ordered_json& j) { output.write(j); };
            const CampaignSummary summary = run_verify(cfg, sink);
            output.write(summary_to_json(summary));
            print_summary(cfg, summary);
            return summary.violated > 0 ? 1 : 0;
        }
        if (search->parsed()) {
            CampaignConfig cfg;
            search_flags.apply(cfg);
            cfg.target = "search";
            cfg.paper_instance = search_paper;
            cfg.lambda_grid = search_lambdas;
            return run_campaign_command(cfg, search_flags.out, /*search=*/true);
        }
        if (hh->parsed())
            return cmd_hh(hh_f, hh_h, hh_interval, hh_p, hh_q, hh_policy, hh_out);
        if (multi->parsed()) {
            CampaignConfig cfg;
            multi_flags.apply(cfg);
            cfg.operators = multi_k;
            cfg.target = multi_converse ? "multi-converse" : (multi_weighted ? "cor6" : "thm6");
            return run_campaign_command(cfg, multi_flags.out, /*search=*/false);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
