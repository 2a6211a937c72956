#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opjensen/errors.hpp"

namespace opjensen {

namespace detail {

// Parses a double starting at `pos` inside `spec`; advances `pos`.
inline double parse_number(std::string_view spec, std::size_t& pos) {
    const std::string tail(spec.substr(pos));
    const char* begin = tail.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) throw ParseError("expected a number in '" + std::string(spec) + "'", pos);
    pos += static_cast<std::size_t>(end - begin);
    return value;
}

inline std::vector<double> parse_number_list(std::string_view spec, std::size_t pos) {
    std::vector<double> values;
    while (true) {
        values.push_back(parse_number(spec, pos));
        if (pos == spec.size()) break;
        if (spec[pos] != ',') throw ParseError("expected ',' in '" + std::string(spec) + "'", pos);
        ++pos;
    }
    return values;
}

inline void expect_end(std::string_view spec, std::size_t pos) {
    if (pos != spec.size())
        throw ParseError("unexpected trailing characters in '" + std::string(spec) + "'", pos);
}

}  // namespace detail

// A nonnegative scalar function on an interval domain, with first and
// second derivative rules. Values of f outside its domain are rejected;
// nonnegativity is enforced by sampling at the use sites, not here.
class ScalarFunction {
public:
    using Rule = std::function<double(double)>;

    ScalarFunction(std::string spec, Rule f, Rule d1, Rule d2,
                   double domain_lo = -std::numeric_limits<double>::infinity(),
                   double domain_hi = std::numeric_limits<double>::infinity())
        : spec_(std::move(spec)),
          f_(std::move(f)),
          d1_(std::move(d1)),
          d2_(std::move(d2)),
          lo_(domain_lo),
          hi_(domain_hi) {}

    double operator()(double t) const {
        check_domain(t);
        return f_(t);
    }
    double deriv(double t) const {
        check_domain(t);
        return d1_(t);
    }
    double deriv2(double t) const {
        check_domain(t);
        return d2_(t);
    }

    bool in_domain(double t) const { return t >= lo_ && t <= hi_; }
    double domain_lo() const { return lo_; }
    double domain_hi() const { return hi_; }
    const std::string& spec() const { return spec_; }

    static ScalarFunction affine(double a, double b) {
        return ScalarFunction("affine:" + format(a) + "," + format(b),
                              [a, b](double t) { return a * t + b; },
                              [a](double) { return a; }, [](double) { return 0.0; });
    }

    static ScalarFunction square() {
        return ScalarFunction(
            "square", [](double t) { return t * t; }, [](double t) { return 2.0 * t; },
            [](double) { return 2.0; });
    }

    static ScalarFunction power(double p) {
        if (!(p > 0.0)) throw ConfigError("power exponent must be positive, got " + format(p));
        return ScalarFunction(
            "power:" + format(p), [p](double t) { return std::pow(t, p); },
            [p](double t) { return p * std::pow(t, p - 1.0); },
            [p](double t) { return p * (p - 1.0) * std::pow(t, p - 2.0); }, 0.0);
    }

    static ScalarFunction sqrt_fn() {
        return ScalarFunction(
            "sqrt", [](double t) { return std::sqrt(t); },
            [](double t) { return 0.5 / std::sqrt(t); },
            [](double t) { return -0.25 / (t * std::sqrt(t)); }, 0.0);
    }

    static ScalarFunction exp_fn() {
        return ScalarFunction(
            "exp", [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); },
            [](double t) { return std::exp(t); });
    }

    static ScalarFunction polynomial(std::vector<double> coeffs) {
        if (coeffs.empty()) throw ConfigError("poly requires at least one coefficient");
        std::string spec = "poly:";
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (k) spec += ',';
            spec += format(coeffs[k]);
        }
        auto d1 = differentiate(coeffs);
        auto d2 = differentiate(d1);
        return ScalarFunction(
            std::move(spec), [coeffs](double t) { return horner(coeffs, t); },
            [d1](double t) { return horner(d1, t); }, [d2](double t) { return horner(d2, t); });
    }

    // For test-built pieces (splices etc.) that have no specifier grammar.
    static ScalarFunction custom(std::string spec, Rule f, Rule d1, Rule d2,
                                 double lo = -std::numeric_limits<double>::infinity(),
                                 double hi = std::numeric_limits<double>::infinity()) {
        return ScalarFunction(std::move(spec), std::move(f), std::move(d1), std::move(d2), lo, hi);
    }

    // Grammar: affine:a,b | square | power:p | sqrt | exp | poly:c0,c1,...
    static ScalarFunction parse(std::string_view spec) {
        const std::size_t colon = spec.find(':');
        const std::string head(spec.substr(0, colon));
        const bool has_args = colon != std::string_view::npos;
        const std::size_t args = has_args ? colon + 1 : spec.size();
        if (head == "square" || head == "sqrt" || head == "exp") {
            if (has_args) throw ParseError("'" + head + "' takes no parameters", colon);
            if (head == "square") return square();
            if (head == "sqrt") return sqrt_fn();
            return exp_fn();
        }
        if (head == "affine") {
            auto v = detail::parse_number_list(spec, args);
            if (v.size() != 2) throw ParseError("affine takes two parameters", args);
            return affine(v[0], v[1]);
        }
        if (head == "power") {
            std::size_t pos = args;
            const double p = detail::parse_number(spec, pos);
            detail::expect_end(spec, pos);
            return power(p);
        }
        if (head == "poly") return polynomial(detail::parse_number_list(spec, args));
        throw ParseError("unknown scalar function '" + std::string(spec) + "'", 0);
    }

private:
    static double horner(const std::vector<double>& c, double t) {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
        return acc;
    }

    static std::vector<double> differentiate(const std::vector<double>& c) {
        if (c.size() <= 1) return {0.0};
        std::vector<double> d(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
        return d;
    }

    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    void check_domain(double t) const {
        if (!in_domain(t))
            throw FunctionDomainError("point " + format(t) + " outside domain of '" + spec_ + "'");
    }

    std::string spec_;
    Rule f_, d1_, d2_;
    double lo_, hi_;
};

// Weight function h on (0, 1]. The five named families are the ones with
// closed-form coefficients; Tabulated carries an arbitrary rule and is
// handled by grid search where a closed form is needed.
class HFunction {
public:
    enum class Family { Identity, Constant, Power, Reciprocal, ReciprocalPower, Tabulated };

    double operator()(double t) const {
        if (!(t > 0.0 && t <= 1.0))
            throw FunctionDomainError("h evaluated outside (0,1]: t=" + std::to_string(t));
        return rule_(t);
    }

    Family family() const { return family_; }
    double param() const { return param_; }
    const std::string& spec() const { return spec_; }

    static HFunction identity() {
        return HFunction(Family::Identity, 0.0, "identity", [](double t) { return t; });
    }
    static HFunction constant(double c) {
        if (!(c > 0.0)) throw ConfigError("constant h must be positive (h not identically zero)");
        return HFunction(Family::Constant, c, "constant:" + fmt(c), [c](double) { return c; });
    }
    static HFunction power(double s) {
        check_exponent(s);
        return HFunction(Family::Power, s, "power:" + fmt(s),
                         [s](double t) { return std::pow(t, s); });
    }
    static HFunction reciprocal() {
        return HFunction(Family::Reciprocal, 0.0, "reciprocal", [](double t) { return 1.0 / t; });
    }
    static HFunction reciprocal_power(double s) {
        check_exponent(s);
        return HFunction(Family::ReciprocalPower, s, "recpower:" + fmt(s),
                         [s](double t) { return std::pow(t, -s); });
    }
    static HFunction tabulated(std::string name, std::function<double(double)> rule) {
        return HFunction(Family::Tabulated, 0.0, std::move(name), std::move(rule));
    }

    // Grammar: identity | constant:c | power:s | reciprocal | recpower:s
    static HFunction parse(std::string_view spec) {
        const std::size_t colon = spec.find(':');
        const std::string head(spec.substr(0, colon));
        const bool has_args = colon != std::string_view::npos;
        if (head == "identity" || head == "reciprocal") {
            if (has_args) throw ParseError("'" + head + "' takes no parameters", colon);
            return head == "identity" ? identity() : reciprocal();
        }
        if (head == "constant" || head == "power" || head == "recpower") {
            std::size_t pos = has_args ? colon + 1 : spec.size();
            const double v = detail::parse_number(spec, pos);
            detail::expect_end(spec, pos);
            if (head == "constant") return constant(v);
            if (head == "power") return power(v);
            return reciprocal_power(v);
        }
        throw ParseError("unknown h function '" + std::string(spec) + "'", 0);
    }

private:
    HFunction(Family family, double param, std::string spec, std::function<double(double)> rule)
        : family_(family), param_(param), spec_(std::move(spec)), rule_(std::move(rule)) {}

    static void check_exponent(double s) {
        if (!(s > 0.0 && s <= 1.0))
            throw ConfigError("exponent s must lie in (0,1], got " + fmt(s));
    }

    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    Family family_;
    double param_;
    std::string spec_;
    std::function<double(double)> rule_;
};

}  // namespace opjensen
