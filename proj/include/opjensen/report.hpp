#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "opjensen/coefficient.hpp"
#include "opjensen/matrix.hpp"

namespace opjensen {

using ordered_json = nlohmann::ordered_json;

// Everything needed to rerun a check: the operator (row-major), the unit
// vector, the function specifiers, and the flags in force.
struct Witness {
    int n = 0;
    std::vector<double> matrix;  // row-major n*n
    std::vector<double> x;
    std::string f;
    std::string h;
    std::uint64_t seed = 0;
    bool override_positivity = false;
};

inline Witness make_witness(const SymMatrix& A, const UnitVector& x, const std::string& f_spec,
                            const std::string& h_spec, std::uint64_t seed, bool override_pos) {
    return Witness{A.dim(), A.data(), x.components(), f_spec, h_spec, seed, override_pos};
}

// One verified or violated inequality instance. slack = rhs - lhs, and the
// inequality "holds" when slack >= -1e-9 * max(1, |rhs|).
struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double coefficient = 0.0;
    CoefficientPolicy policy;
    double slack = 0.0;
    bool holds = false;
    bool vacuous = false;  // coefficient diverged; inequality trivially true
    Witness witness;
};

inline InequalityReport make_report(std::string name, double lhs, double rhs, double coefficient,
                                    const CoefficientPolicy& policy, Witness witness) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.coefficient = coefficient;
    r.policy = policy;
    r.witness = std::move(witness);
    if (std::isinf(coefficient)) {
        r.vacuous = true;
        r.holds = true;
        r.slack = std::numeric_limits<double>::infinity();
    } else {
        r.slack = rhs - lhs;
        r.holds = r.slack >= -1e-9 * std::max(1.0, std::abs(rhs));
    }
    return r;
}

inline ordered_json to_json(const Witness& w) {
    ordered_json j;
    j["n"] = w.n;
    j["matrix"] = w.matrix;
    j["x"] = w.x;
    j["f"] = w.f;
    j["h"] = w.h;
    j["seed"] = w.seed;
    j["override"] = w.override_positivity;
    return j;
}

inline ordered_json to_json(const InequalityReport& r) {
    ordered_json j;
    j["name"] = r.name;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["coefficient"] = r.coefficient;
    j["policy"] = r.policy.to_string();
    j["slack"] = r.slack;
    j["holds"] = r.holds;
    j["witness"] = to_json(r.witness);
    return j;
}

inline Witness witness_from_json(const nlohmann::json& j) {
    Witness w;
    w.n = j.at("n").get<int>();
    w.matrix = j.at("matrix").get<std::vector<double>>();
    w.x = j.at("x").get<std::vector<double>>();
    w.f = j.at("f").get<std::string>();
    w.h = j.at("h").get<std::string>();
    w.seed = j.at("seed").get<std::uint64_t>();
    w.override_positivity = j.at("override").get<bool>();
    return w;
}

}  // namespace opjensen
