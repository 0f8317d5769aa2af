#pragma once

// Scenario files for the `ncg` command line runner: a parameter schema per
// scenario kind, parsing with defaults and validation, execution of each kind
// into report rows plus CSV/JSON artifacts, and the ordered parallel driver.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "ncg/clifford.hpp"
#include "ncg/dirichlet.hpp"
#include "ncg/fock_dilation.hpp"
#include "ncg/homogeneous.hpp"
#include "ncg/io.hpp"
#include "ncg/models.hpp"
#include "ncg/qds.hpp"
#include "ncg/random.hpp"
#include "ncg/spectral_triple.hpp"

namespace ncg::cli {

using io::json;

/// Malformed scenario input; maps to exit code 2.
class ParseError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

enum class ParamType { integer, number, boolean, string, half_integer, triple, number_list };

inline const char* to_string(ParamType t) {
    switch (t) {
    case ParamType::integer: return "integer";
    case ParamType::number: return "number";
    case ParamType::boolean: return "boolean";
    case ParamType::string: return "string";
    case ParamType::half_integer: return "half_integer";
    case ParamType::triple: return "triple";
    case ParamType::number_list: return "number_list";
    }
    return "?";
}

inline ParamType param_type_from_string(const std::string& s) {
    for (ParamType t : {ParamType::integer, ParamType::number, ParamType::boolean, ParamType::string,
                        ParamType::half_integer, ParamType::triple, ParamType::number_list}) {
        if (s == to_string(t)) return t;
    }
    throw ParseError("unknown parameter type '" + s + "'");
}

struct ParamSpec {
    std::string name;
    ParamType type = ParamType::integer;
    json default_value; ///< null means "absent unless given"
    std::vector<std::string> choices;
    std::optional<double> min;
    std::optional<double> max;
    std::string doc;

    friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct CheckSpec {
    std::string name;
    double tolerance = 0.0;
    std::string doc;

    friend bool operator==(const CheckSpec&, const CheckSpec&) = default;
};

struct KindSpec {
    std::string kind;
    bool sampling = false; ///< seed mandatory (some kinds also need it only in random modes)
    std::string doc;
    std::vector<ParamSpec> params;
    std::vector<CheckSpec> checks;

    const ParamSpec* param(const std::string& name) const {
        for (const auto& p : params) {
            if (p.name == name) return &p;
        }
        return nullptr;
    }
    const CheckSpec* check(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }

    friend bool operator==(const KindSpec&, const KindSpec&) = default;
};

using Schema = std::vector<KindSpec>;

namespace detail {

inline ParamSpec int_param(std::string name, long def, double lo, double hi, std::string doc) {
    return {std::move(name), ParamType::integer, json(def), {}, lo, hi, std::move(doc)};
}
inline ParamSpec num_param(std::string name, double def, std::optional<double> lo, std::optional<double> hi,
                           std::string doc) {
    return {std::move(name), ParamType::number, json(def), {}, lo, hi, std::move(doc)};
}
inline ParamSpec choice_param(std::string name, std::string def, std::vector<std::string> choices, std::string doc) {
    return {std::move(name), ParamType::string, json(std::move(def)), std::move(choices), {}, {}, std::move(doc)};
}
inline ParamSpec half_param(std::string name, std::string def, double lo, double hi, std::string doc) {
    return {std::move(name), ParamType::half_integer, json(std::move(def)), {}, lo, hi, std::move(doc)};
}
inline ParamSpec triple_param(std::string name, std::string doc) {
    return {std::move(name), ParamType::triple, json(nullptr), {}, {}, {}, std::move(doc)};
}

} // namespace detail

/// The built-in schema. Every scenario is validated against it.
inline const Schema& schema() {
    using namespace detail;
    static const Schema s = [] {
        Schema out;
        out.push_back(KindSpec{
            "triple_validate",
            false,
            "Validate a finite spectral triple given inline or drawn from a model (random models need a seed).",
            {triple_param("triple", "inline triple {hilbert_dim, algebra_basis, D, gamma?, J0?, base_indices?}"),
             choice_param("model", "two_point", {"two_point", "random_even", "random_finite"},
                          "model used when no inline triple is given"),
             int_param("max_dim", 8, 1, 64, "dimension bound for random models"),
             {"include_informational", ParamType::boolean, json(false), {}, {}, {}, "also report informational checks"}},
            {{"dirac_self_adjoint", 1e-10, ""},
             {"algebra_contains_identity", 1e-10, ""},
             {"algebra_adjoint_closed", 1e-10, ""},
             {"grading_involution", 1e-12, ""},
             {"grading_self_adjoint", 1e-12, ""},
             {"grading_anticommutes_dirac", 1e-10, ""},
             {"grading_commutes_algebra", 1e-10, ""},
             {"real_structure_antiunitary", 1e-10, ""},
             {"real_structure_square_sign", 1e-10, ""},
             {"first_order_condition", 1e-10, ""},
             {"commutator_square_in_algebra", 1e-10, "informational"}}});
        out.push_back(KindSpec{
            "product_check",
            false,
            "D^2 = D_M^2 (x) 1 + 1 (x) D_F^2 for graded products; explicit pair or seeded random pairs.",
            {triple_param("first", "even triple (needs gamma)"),
             triple_param("second", "second factor"),
             int_param("pairs", 100, 1, 100000, "random pairs when no explicit pair is given"),
             int_param("max_dim", 8, 1, 32, "dimension bound per factor")},
            {{"product_square_decomposition", 1e-12, "max ||D^2 - D_M^2 (x) 1 - 1 (x) D_F^2||"},
             {"product_dirac_self_adjoint", 1e-10, ""},
             {"product_grading_anticommutes_dirac", 1e-10, "over pairs where both factors are graded"}}});
        out.push_back(KindSpec{
            "commutant",
            false,
            "Commutant of the twisted Clifford action 1_W (x) e_i has dimension dim_W^2.",
            {int_param("n", 2, 2, clifford::kMaxRank, "even number of Clifford generators"),
             int_param("dim_w", 1, 1, 8, "twisting dimension"),
             choice_param("signature", "minus", {"minus", "plus"}, "e_i^2 = -1 or +1")},
            {{"clifford_relations", 1e-10, ""},
             {"commutant_dimension", 0.0, "|dim - dim_W^2|"},
             {"commutant_basis_commutes", 1e-9, ""}}});
        out.push_back(KindSpec{
            "spectrum",
            false,
            "Spectra on the round 2-sphere, written to spectrum_<index>.csv.",
            {int_param("h_weight", 1, -40, 40, "U(1) weight; must be +1 or -1 for dirac_square"),
             half_param("j_max", "21/2", 0, 200, "truncation spin, e.g. \"21/2\""),
             choice_param("operator", "dirac_square", {"dirac_square", "connection_laplacian"}, "")},
            {{"dirac_square_closed_form", 1e-10, "eigenvalue (k+1)^2 with multiplicity 4(k+1)"},
             {"lichnerowicz_identity", 1e-9, "D^2 - Delta - kappa/4 sectorwise"},
             {"laplacian_nonnegative", 1e-12, ""}}});
        out.push_back(KindSpec{
            "qds_battery",
            true,
            "Complete positivity, conservativity and Markov checks along a semigroup.",
            {choice_param("generator", "endomorphism", {"endomorphism", "kraus_heat", "lindblad", "decay"}, ""),
             half_param("irrep_j", "1/2", 0, 4, "spin for the endomorphism generator"),
             int_param("dim", 3, 1, 6, "dimension for random generators"),
             {"times", ParamType::number_list, json::array({0.1, 1.0, 10.0}), {}, 0.0, 1e3, "evaluation times"},
             int_param("markov_samples", 100, 0, 100000, "")},
            {{"complete_positivity", 1e-9, "max(0, -min Choi eigenvalue) over times"},
             {"generator_kills_identity", 1e-12, "||L(1)||"},
             {"conservativity", 1e-9, "||T_t(1) - 1|| over times"},
             {"markov", 1e-9, "violation of 0 <= T_t(x) <= 1"},
             {"contractivity", 1e-12, "max(0, ||T_t(x)|| - ||x||) on samples"},
             {"hs_symmetry", 1e-10, "|<T x, y> - <x, T y>| on samples"}}});
        out.push_back(KindSpec{
            "dirichlet",
            true,
            "Lipschitz contraction inequality for Tr(x L x) with random PSD L, optionally amplified.",
            {int_param("dim", 4, 1, 6, ""),
             int_param("samples", 1000, 1, 1000000, ""),
             int_param("n_amp", 1, 1, dirichlet::kMaxAmplification, "largest amplification checked"),
             int_param("random_fns", 4, 0, 64, "random three-piece functions added to |r|, clamp, r_+")},
            {{"dirichlet_inequality", 1e-9, "max signed violation, clipped at 0"},
             {"complete_dirichlet", 1e-9, "same for L (x) 1_k, k = 2..n_amp"}}});
        out.push_back(KindSpec{
            "covariance",
            true,
            "The Casimir generator commutes with sampled group unitaries; a dephasing control must not.",
            {half_param("irrep_j", "1", 0, 4, ""), int_param("unitaries", 20, 1, 10000, "")},
            {{"covariance", 1e-9, ""}, {"noncovariant_control", 0.0, "max(0, 0.1 - control residual)"}}});
        out.push_back(KindSpec{
            "smoothness",
            true,
            "Empirical smoothness constant of the Casimir action and its stability when samples double.",
            {half_param("irrep_j", "1/2", 0, 4, ""),
             int_param("order", 1, 0, homogeneous::kMaxSobolevOrder - 2, "n"),
             int_param("p", 2, 0, homogeneous::kMaxSobolevOrder, ""),
             int_param("samples", 500, 1, 100000, "")},
            {{"smoothness_finite", 0.0, ""}, {"smoothness_stability", 0.05, "relative change when samples double"}}});
        out.push_back(KindSpec{
            "dilation",
            true,
            "Repeated-interaction dilation: convergence to the GKSL semigroup, flow and structure relations.",
            {choice_param("model", "decay", {"decay", "random"}, "decay: H = z, L = sigma_minus"),
             int_param("dim", 2, 1, 4, "system dimension for the random model"),
             int_param("noise_dim", 1, 0, 3, "jump operators for the random model"),
             num_param("t", 1.0, 1e-6, 100.0, "total time"),
             int_param("min_log2_slots", 7, 0, 20, ""),
             int_param("max_log2_slots", 12, 0, 20, ""),
             int_param("flow_slots", 6, 1, 12, "slots in the full flow check")},
            {{"convergence_order", 0.0, "max(0, 0.9 - fitted order)"},
             {"flow_homomorphism", 1e-9, ""},
             {"flow_adaptedness", 1e-9, ""},
             {"structure_relations", 1e-10, ""},
             {"structure_adjoint", 1e-10, ""}}});
        return out;
    }();
    return s;
}

inline const KindSpec& kind_spec(const std::string& kind, const Schema& s = schema()) {
    for (const auto& k : s) {
        if (k.kind == kind) return k;
    }
    throw ParseError("unknown scenario kind '" + kind + "'");
}

inline json schema_to_json(const Schema& s) {
    json kinds = json::array();
    for (const auto& k : s) {
        json params = json::array();
        for (const auto& p : k.params) {
            json jp{{"name", p.name}, {"type", to_string(p.type)}, {"default", p.default_value}, {"doc", p.doc}};
            if (!p.choices.empty()) jp["choices"] = p.choices;
            if (p.min) jp["min"] = *p.min;
            if (p.max) jp["max"] = *p.max;
            params.push_back(std::move(jp));
        }
        json checks = json::array();
        for (const auto& c : k.checks) checks.push_back({{"name", c.name}, {"tolerance", c.tolerance}, {"doc", c.doc}});
        kinds.push_back({{"kind", k.kind}, {"sampling", k.sampling}, {"doc", k.doc}, {"params", params}, {"checks", checks}});
    }
    return {{"kinds", kinds}};
}

inline Schema schema_from_json(const json& j) {
    try {
        Schema out;
        for (const auto& jk : j.at("kinds")) {
            KindSpec k;
            k.kind = jk.at("kind").get<std::string>();
            k.sampling = jk.at("sampling").get<bool>();
            k.doc = jk.at("doc").get<std::string>();
            for (const auto& jp : jk.at("params")) {
                ParamSpec p;
                p.name = jp.at("name").get<std::string>();
                p.type = param_type_from_string(jp.at("type").get<std::string>());
                p.default_value = jp.at("default");
                p.doc = jp.at("doc").get<std::string>();
                if (jp.contains("choices")) p.choices = jp["choices"].get<std::vector<std::string>>();
                if (jp.contains("min")) p.min = jp["min"].get<double>();
                if (jp.contains("max")) p.max = jp["max"].get<double>();
                k.params.push_back(std::move(p));
            }
            for (const auto& jc : jk.at("checks")) {
                k.checks.push_back({jc.at("name").get<std::string>(), jc.at("tolerance").get<double>(),
                                    jc.at("doc").get<std::string>()});
            }
            out.push_back(std::move(k));
        }
        return out;
    } catch (const json::exception& e) {
        throw ParseError(std::string("schema: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

/// Doubled spin from "p/2", an integer, or a number that is a multiple of 1/2.
inline int parse_two_j(const json& v, const std::string& what) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        const auto slash = s.find('/');
        try {
            std::size_t used = 0;
            if (slash == std::string::npos) {
                const int whole = std::stoi(s, &used);
                if (used != s.size()) throw ParseError("");
                return 2 * whole;
            }
            const int num = std::stoi(s.substr(0, slash), &used);
            if (used != slash || s.substr(slash + 1) != "2") throw ParseError("");
            return num;
        } catch (const std::exception&) {
            throw ParseError(what + ": expected a half-integer such as \"21/2\", got \"" + s + "\"");
        }
    }
    if (v.is_number()) {
        const double twice = 2.0 * v.get<double>();
        if (std::abs(twice - std::round(twice)) > 1e-12) throw ParseError(what + ": not a multiple of 1/2");
        return static_cast<int>(std::lround(twice));
    }
    throw ParseError(what + ": expected a half-integer");
}

/// Canonical text of a doubled spin: "3" or "7/2".
inline std::string format_two_j(int two_j) {
    return two_j % 2 == 0 ? std::to_string(two_j / 2) : std::to_string(two_j) + "/2";
}

/// Largest representation dimension accepted by the commutant kind (the
/// solver works on d^2 x d^2 systems).
inline constexpr long kCommutantDimCap = 32;

struct Scenario {
    std::string kind;
    json params = json::object(); ///< every schema parameter, defaults filled in, canonical encodings
    std::optional<std::uint64_t> seed;
    std::map<std::string, double> tolerances;
};

namespace detail {

inline json validate_param(const ParamSpec& p, const json& v, const std::string& where) {
    const std::string what = where + "." + p.name;
    auto bounds = [&](double x) {
        if ((p.min && x < *p.min) || (p.max && x > *p.max)) {
            throw ParseError(what + ": value out of range [" + io::format_number(p.min.value_or(-INFINITY)) + ", " +
                             io::format_number(p.max.value_or(INFINITY)) + "]");
        }
    };
    switch (p.type) {
    case ParamType::integer: {
        if (!v.is_number_integer()) throw ParseError(what + ": expected an integer");
        bounds(v.get<double>());
        return v.get<long>();
    }
    case ParamType::number: {
        if (!v.is_number()) throw ParseError(what + ": expected a number");
        if (!std::isfinite(v.get<double>())) throw ParseError(what + ": expected a finite number");
        bounds(v.get<double>());
        return v.get<double>();
    }
    case ParamType::boolean:
        if (!v.is_boolean()) throw ParseError(what + ": expected true or false");
        return v;
    case ParamType::string: {
        if (!v.is_string()) throw ParseError(what + ": expected a string");
        const auto s = v.get<std::string>();
        if (!p.choices.empty() && std::find(p.choices.begin(), p.choices.end(), s) == p.choices.end()) {
            throw ParseError(what + ": unsupported value '" + s + "'");
        }
        return v;
    }
    case ParamType::half_integer: {
        const int two_j = parse_two_j(v, what);
        bounds(0.5 * two_j);
        return format_two_j(two_j);
    }
    case ParamType::triple: {
        if (v.is_null()) return v;
        try {
            const FiniteSpectralTriple t = io::triple_from_json(v);
            return io::triple_to_json(t);
        } catch (const Error& e) {
            throw ParseError(what + ": " + e.what());
        }
    }
    case ParamType::number_list: {
        if (!v.is_array()) throw ParseError(what + ": expected an array of numbers");
        json out = json::array();
        for (const auto& x : v) {
            if (!x.is_number()) throw ParseError(what + ": expected an array of numbers");
            bounds(x.get<double>());
            out.push_back(x.get<double>());
        }
        return out;
    }
    }
    return v;
}

/// Kinds whose random modes need a seed even though the kind is not always sampling.
inline bool needs_seed(const Scenario& s, const KindSpec& k) {
    if (k.sampling) return true;
    if (s.kind == "triple_validate") {
        return s.params["triple"].is_null() && s.params["model"].get<std::string>() != "two_point";
    }
    if (s.kind == "product_check") return s.params["first"].is_null() || s.params["second"].is_null();
    return false;
}

} // namespace detail

/// `seed_override` (from NCG_SEED) replaces any seed in the file.
inline Scenario parse_scenario(const json& j, const std::string& where = "scenario",
                               std::optional<std::uint64_t> seed_override = std::nullopt) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (key != "kind" && key != "params" && key != "seed" && key != "tolerances") {
            throw ParseError(where + ": unknown field '" + key + "'");
        }
    }
    if (!j.contains("kind") || !j["kind"].is_string()) throw ParseError(where + ": missing string field 'kind'");
    Scenario s;
    s.kind = j["kind"].get<std::string>();
    const KindSpec& k = kind_spec(s.kind);

    const json given = j.value("params", json::object());
    if (!given.is_object()) throw ParseError(where + ".params: expected an object");
    for (const auto& [key, _] : given.items()) {
        if (!k.param(key)) throw ParseError(where + ".params: unknown parameter '" + key + "' for kind " + s.kind);
    }
    for (const auto& p : k.params) {
        const json& v = given.contains(p.name) ? given[p.name] : p.default_value;
        s.params[p.name] = detail::validate_param(p, v, where + ".params");
    }

    if (j.contains("seed") && !j["seed"].is_null()) {
        const json& sj = j["seed"];
        if (!sj.is_number_integer() || (sj.is_number_integer() && !sj.is_number_unsigned() && sj.get<long long>() < 0)) {
            throw ParseError(where + ".seed: expected a nonnegative 64-bit integer");
        }
        s.seed = sj.get<std::uint64_t>();
    }
    if (seed_override) s.seed = seed_override;
    if (detail::needs_seed(s, k) && !s.seed) throw ParseError(where + ": kind " + s.kind + " samples and needs a seed");

    if (j.contains("tolerances")) {
        const json& tj = j["tolerances"];
        if (!tj.is_object()) throw ParseError(where + ".tolerances: expected an object");
        for (const auto& [key, v] : tj.items()) {
            if (!k.check(key)) throw ParseError(where + ".tolerances: unknown check '" + key + "' for kind " + s.kind);
            if (!v.is_number() || v.get<double>() < 0.0) {
                throw ParseError(where + ".tolerances." + key + ": expected a nonnegative number");
            }
            s.tolerances[key] = v.get<double>();
        }
    }

    // cross-parameter constraints
    if (s.kind == "spectrum" && s.params["operator"] == "dirac_square") {
        const long w = s.params["h_weight"].get<long>();
        if (w != 1 && w != -1) throw ParseError(where + ": dirac_square is built from the half-spinor weights +-1");
        if (parse_two_j(s.params["j_max"], "j_max") < 1) throw ParseError(where + ": dirac_square needs j_max >= 1/2");
    }
    if (s.kind == "spectrum" && s.params["operator"] == "connection_laplacian") {
        const long w = s.params["h_weight"].get<long>();
        if (parse_two_j(s.params["j_max"], "j_max") < std::abs(w)) {
            throw ParseError(where + ": j_max is below the lowest sector |h_weight|/2");
        }
    }
    if (s.kind == "commutant") {
        const long n = s.params["n"].get<long>();
        if (n % 2 != 0) throw ParseError(where + ": n must be even");
        if (s.params["dim_w"].get<long>() * (1L << (n / 2)) > kCommutantDimCap) {
            throw ParseError(where + ": dim_w * 2^(n/2) exceeds the commutant size cap " +
                             std::to_string(kCommutantDimCap));
        }
    }
    if (s.kind == "dilation" && s.params["min_log2_slots"].get<long>() >= s.params["max_log2_slots"].get<long>()) {
        throw ParseError(where + ": need min_log2_slots < max_log2_slots for a slope fit");
    }
    if (s.kind == "smoothness" &&
        s.params["order"].get<long>() + s.params["p"].get<long>() > homogeneous::kMaxSobolevOrder) {
        throw ParseError(where + ": order + p exceeds the Sobolev order cap " +
                         std::to_string(homogeneous::kMaxSobolevOrder));
    }
    if (s.kind == "product_check" && s.params["first"].is_null() != s.params["second"].is_null()) {
        throw ParseError(where + ": give both 'first' and 'second' or neither");
    }
    if (s.kind == "product_check" && !s.params["first"].is_null() && !s.params["first"].contains("gamma")) {
        throw ParseError(where + ".params.first: the first factor needs a grading 'gamma'");
    }
    if (s.kind == "dilation") {
        const Index n = s.params["model"] == "decay" ? 2 : s.params["dim"].get<long>();
        const Index d = s.params["model"] == "decay" ? 1 : s.params["noise_dim"].get<long>();
        const fock::ToyFockModel m{n, d, static_cast<int>(s.params["flow_slots"].get<long>()), 1.0};
        if (m.total_dim() > fock::kFullFlowDimCap) {
            throw ParseError(where + ": flow_slots exceed the full-flow size cap " +
                             std::to_string(fock::kFullFlowDimCap));
        }
    }
    return s;
}

/// A single scenario object or an array of them.
inline std::vector<Scenario> parse_scenarios(const json& j, std::optional<std::uint64_t> seed_override = std::nullopt) {
    std::vector<Scenario> out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            out.push_back(parse_scenario(j[i], "scenario[" + std::to_string(i) + "]", seed_override));
        }
    } else {
        out.push_back(parse_scenario(j, "scenario", seed_override));
    }
    return out;
}

inline json scenario_to_json(const Scenario& s) {
    json j{{"kind", s.kind}, {"params", s.params}};
    if (s.seed) j["seed"] = *s.seed;
    if (!s.tolerances.empty()) j["tolerances"] = s.tolerances;
    return j;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct Row {
    std::string check_name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::optional<double> value;
};

struct Artifact {
    std::string filename;
    std::string content;
};

struct Outcome {
    std::vector<Row> rows;
    std::vector<Artifact> artifacts;
    double wall_ms = 0.0;
    std::optional<std::string> error;
};

namespace detail {

class RowSink {
public:
    RowSink(const Scenario& s, double tol_scale) : s_(s), spec_(kind_spec(s.kind)), scale_(tol_scale) {}

    void add(const std::string& name, double residual, std::optional<double> value = std::nullopt) {
        const CheckSpec* c = spec_.check(name);
        if (!c) throw Error("internal: check '" + name + "' missing from the schema");
        const auto it = s_.tolerances.find(name);
        const double tol = (it != s_.tolerances.end() ? it->second : c->tolerance) * scale_;
        rows.push_back({name, residual, tol, std::isfinite(residual) && residual <= tol, value});
    }

    std::vector<Row> rows;

private:
    const Scenario& s_;
    const KindSpec& spec_;
    double scale_;
};

inline long p_int(const Scenario& s, const char* k) { return s.params.at(k).get<long>(); }
inline double p_num(const Scenario& s, const char* k) { return s.params.at(k).get<double>(); }
inline std::string p_str(const Scenario& s, const char* k) { return s.params.at(k).get<std::string>(); }
inline int p_two_j(const Scenario& s, const char* k) { return parse_two_j(s.params.at(k), k); }

inline void run_triple_validate(const Scenario& s, RowSink& sink, Outcome&) {
    FiniteSpectralTriple t;
    if (!s.params["triple"].is_null()) {
        t = io::triple_from_json(s.params["triple"]);
    } else {
        const std::string model = p_str(s, "model");
        if (model == "two_point") {
            t = models::two_point_triple();
        } else {
            Rng rng = sample_rng(*s.seed, 0);
            const int max_dim = static_cast<int>(p_int(s, "max_dim"));
            t = model == "random_even" ? models::random_even_triple(rng, max_dim)
                                       : models::random_finite_triple(rng, max_dim);
        }
    }
    const bool informational = s.params["include_informational"].get<bool>();
    for (const CheckResult& c : validate(t).checks) {
        if (!c.required && !informational) continue;
        sink.add(c.name, c.residual);
    }
}

inline void run_product_check(const Scenario& s, RowSink& sink, Outcome&) {
    std::vector<std::pair<FiniteSpectralTriple, FiniteSpectralTriple>> pairs;
    if (!s.params["first"].is_null()) {
        pairs.emplace_back(io::triple_from_json(s.params["first"]), io::triple_from_json(s.params["second"]));
    } else {
        const int max_dim = static_cast<int>(p_int(s, "max_dim"));
        for (long k = 0; k < p_int(s, "pairs"); ++k) {
            Rng rng = sample_rng(*s.seed, static_cast<std::uint64_t>(k));
            FiniteSpectralTriple tm = models::random_even_triple(rng, max_dim);
            FiniteSpectralTriple tf = models::random_finite_triple(rng, max_dim);
            pairs.emplace_back(std::move(tm), std::move(tf));
        }
    }
    double square = 0.0, adjoint = 0.0, grading = 0.0;
    for (const auto& [tm, tf] : pairs) {
        square = std::max(square, product_square_residual(tm, tf));
        const FiniteSpectralTriple p = product(tm, tf);
        adjoint = std::max(adjoint, hermiticity_residual(p.dirac));
        if (p.grading) grading = std::max(grading, op_norm(anticommutator(*p.grading, p.dirac)));
    }
    sink.add("product_square_decomposition", square);
    sink.add("product_dirac_self_adjoint", adjoint);
    sink.add("product_grading_anticommutes_dirac", grading);
}

inline void run_commutant(const Scenario& s, RowSink& sink, Outcome&) {
    const int n = static_cast<int>(p_int(s, "n"));
    const Index w = p_int(s, "dim_w");
    const auto sig = p_str(s, "signature") == "plus" ? clifford::Signature::plus : clifford::Signature::minus;
    const auto rep = clifford::build_clifford(n, sig);
    sink.add("clifford_relations", rep.relation_residual());
    const auto action = clifford::twist(rep, w);
    const auto basis = clifford::commutant(action.action_matrices);
    const double dim = static_cast<double>(basis.size());
    sink.add("commutant_dimension", std::abs(dim - static_cast<double>(w * w)), dim);
    double comm = 0.0;
    for (const Mat& x : basis) {
        for (const Mat& c : action.action_matrices) comm = std::max(comm, op_norm(commutator(x, c)));
    }
    sink.add("commutant_basis_commutes", comm);
}

inline void run_spectrum(const Scenario& s, RowSink& sink, Outcome& out, std::size_t index) {
    const int two_j_max = p_two_j(s, "j_max");
    const int w = static_cast<int>(p_int(s, "h_weight"));
    Spectrum spec;
    if (p_str(s, "operator") == "dirac_square") {
        spec = homogeneous::dirac_square_spectrum_symmetric(two_j_max);
        double res = 0.0;
        for (std::size_t k = 0; k < spec.entries.size(); ++k) {
            const double kk = static_cast<double>(k) + 1.0;
            res = std::max(res, std::abs(spec.entries[k].eigenvalue - kk * kk));
            res = std::max(res, std::abs(static_cast<double>(spec.entries[k].multiplicity) - 4.0 * kk));
        }
        sink.add("dirac_square_closed_form", res);
        sink.add("lichnerowicz_identity", homogeneous::lichnerowicz_residual(two_j_max));
    } else {
        spec = homogeneous::connection_laplacian_spectrum(homogeneous::decompose_induced_bundle(w, two_j_max));
        sink.add("laplacian_nonnegative", std::max(0.0, -spec.min()));
    }
    std::ostringstream csv;
    io::write_spectrum_csv(csv, spec);
    out.artifacts.push_back({"spectrum_" + std::to_string(index) + ".csv", csv.str()});
}

inline void run_qds_battery(const Scenario& s, RowSink& sink, Outcome&) {
    const std::string gen = p_str(s, "generator");
    const std::uint64_t seed = *s.seed;
    Rng rng = sample_rng(seed, 0);
    const std::vector<double> times = s.params["times"].get<std::vector<double>>();
    double cp = 0.0;

    if (gen == "kraus_heat") {
        const Index n = p_int(s, "dim");
        const Mat dsq = random_psd(n, rng);
        double contract = 0.0, sym = 0.0;
        for (double t : times) {
            const Superoperator tt = qds::kraus_heat_semigroup(dsq, t);
            cp = std::max(cp, std::max(0.0, -qds::is_cp(tt).min_eigenvalue));
            for (long k = 0; k < std::max(1L, p_int(s, "markov_samples")); ++k) {
                Rng r = sample_rng(seed, static_cast<std::uint64_t>(k) + 1);
                const Mat x = random_complex(n, n, r);
                const Mat y = random_complex(n, n, r);
                contract = std::max(contract, std::max(0.0, op_norm(tt.apply(x)) - op_norm(x)) / op_norm(x));
                sym = std::max(sym, std::abs(hs_inner(tt.apply(x), y) - hs_inner(x, tt.apply(y))) /
                                        (x.norm() * y.norm()));
            }
        }
        sink.add("complete_positivity", cp);
        sink.add("contractivity", contract);
        sink.add("hs_symmetry", sym);
        return;
    }

    Superoperator l = Superoperator::zero(1);
    if (gen == "endomorphism") {
        l = qds::endomorphism_laplacian_generator(homogeneous::su2_irrep(p_two_j(s, "irrep_j")).hermitian_generators(),
                                                  p_two_j(s, "irrep_j") + 1);
    } else if (gen == "decay") {
        const auto [h, ls] = models::decay_model();
        l = qds::lindblad_generator(h, ls);
    } else {
        const Index n = p_int(s, "dim");
        l = qds::lindblad_generator(random_hermitian(n, rng), {random_complex(n, n, rng), random_complex(n, n, rng)});
    }
    sink.add("generator_kills_identity", op_norm(l.apply(identity(l.dim()))));
    double cons = 0.0, markov = 0.0;
    for (double t : times) {
        const Superoperator tt = qds::evolve(l, t);
        cp = std::max(cp, std::max(0.0, -qds::is_cp(tt).min_eigenvalue));
        cons = std::max(cons, qds::unitality_residual(tt));
        markov = std::max(markov, qds::check_markov(tt, static_cast<int>(p_int(s, "markov_samples")), seed));
    }
    sink.add("complete_positivity", cp);
    sink.add("conservativity", cons);
    sink.add("markov", markov);
}

inline void run_dirichlet(const Scenario& s, RowSink& sink, Outcome&) {
    Rng rng = sample_rng(*s.seed, 0);
    const Index n = p_int(s, "dim");
    const auto form = dirichlet::QuadraticForm::from_generator(random_psd(n, rng));
    const auto fns = dirichlet::standard_family(*s.seed, static_cast<int>(p_int(s, "random_fns")));
    const int samples = static_cast<int>(p_int(s, "samples"));
    const double v = dirichlet::dirichlet_check(form, fns, samples, *s.seed);
    sink.add("dirichlet_inequality", std::max(0.0, v), v);
    const long n_amp = p_int(s, "n_amp");
    if (n_amp >= 2) {
        double worst = -INFINITY;
        for (long k = 2; k <= n_amp; ++k) {
            worst = std::max(worst, dirichlet::complete_dirichlet_check(form, static_cast<int>(k), fns, samples, *s.seed));
        }
        sink.add("complete_dirichlet", std::max(0.0, worst), worst);
    }
}

inline void run_covariance(const Scenario& s, RowSink& sink, Outcome&) {
    const auto rep = homogeneous::su2_irrep(p_two_j(s, "irrep_j"));
    const Superoperator l = qds::endomorphism_laplacian_generator(rep.hermitian_generators(), rep.dim());
    std::vector<Mat> us;
    for (long k = 0; k < p_int(s, "unitaries"); ++k) {
        Rng rng = sample_rng(*s.seed, static_cast<std::uint64_t>(k));
        std::array<double, 3> theta{};
        for (double& th : theta) th = uniform(rng, -std::numbers::pi, std::numbers::pi);
        us.push_back(rep.group_element(theta));
    }
    sink.add("covariance", qds::check_covariance(l, us));
    // dephasing along z is not invariant under the Hadamard rotation
    Mat had(2, 2);
    had << 1.0, 1.0, 1.0, -1.0;
    had /= std::sqrt(2.0);
    const double control = qds::check_covariance(qds::endomorphism_laplacian_generator({pauli::z()}), {had});
    sink.add("noncovariant_control", std::max(0.0, 0.1 - control), control);
}

inline void run_smoothness(const Scenario& s, RowSink& sink, Outcome&) {
    const auto rep = homogeneous::su2_irrep(p_two_j(s, "irrep_j"));
    const Superoperator l = homogeneous::casimir_action(rep);
    const int order = static_cast<int>(p_int(s, "order"));
    const int p = static_cast<int>(p_int(s, "p"));
    const int samples = static_cast<int>(p_int(s, "samples"));
    const auto gens = rep.generator_list();
    const double a = homogeneous::smoothness_constant(l, order, p, samples, *s.seed, gens);
    const double b = homogeneous::smoothness_constant(l, order, p, 2 * samples, *s.seed, gens);
    sink.add("smoothness_finite", std::isfinite(b) ? 0.0 : INFINITY, b);
    const double rel = a > 0.0 ? std::abs(b - a) / a : (b == 0.0 ? 0.0 : INFINITY);
    sink.add("smoothness_stability", rel, b);
}

inline void run_dilation(const Scenario& s, RowSink& sink, Outcome& out, std::size_t index) {
    Mat h;
    std::vector<Mat> ls;
    Rng rng = sample_rng(*s.seed, 0);
    if (p_str(s, "model") == "decay") {
        std::tie(h, ls) = models::decay_model();
    } else {
        const Index n = p_int(s, "dim");
        h = random_hermitian(n, rng);
        for (long k = 0; k < p_int(s, "noise_dim"); ++k) ls.push_back(random_complex(n, n, rng) * 0.5);
    }
    const double t = p_num(s, "t");
    std::vector<long> counts;
    for (long e = p_int(s, "min_log2_slots"); e <= p_int(s, "max_log2_slots"); ++e) counts.push_back(1L << e);
    const fock::ConvergenceStudy study = fock::convergence_study(h, ls, t, counts);
    sink.add("convergence_order", std::max(0.0, 0.9 - study.order), study.order);

    const Index n = h.rows();
    const auto model = fock::ToyFockModel::for_time(n, static_cast<Index>(ls.size()),
                                                    static_cast<int>(p_int(s, "flow_slots")), t);
    const Mat x = random_complex(n, n, rng);
    const Mat y = random_complex(n, n, rng);
    sink.add("flow_homomorphism", fock::flow_homomorphism_residual(model, h, ls, x, y));
    sink.add("flow_adaptedness", fock::adaptedness_residual(model, fock::full_flow(model, h, ls, x)));
    const fock::StructureMaps sm = fock::structure_maps(h, ls);
    sink.add("structure_relations", sm.relation_residual(x, y));
    sink.add("structure_adjoint", sm.adjoint_residual(x));

    std::ostringstream csv;
    csv << "N,dt,error\n";
    json points = json::array();
    for (const auto& p : study.points) {
        csv << p.slots << ',' << io::format_number(p.dt) << ',' << io::format_number(p.error) << '\n';
        points.push_back({{"N", p.slots}, {"dt", p.dt}, {"error", p.error}});
    }
    out.artifacts.push_back({"convergence_" + std::to_string(index) + ".csv", csv.str()});
    const json summary{{"t", t}, {"order", study.order}, {"points", points}};
    out.artifacts.push_back({"dilation_" + std::to_string(index) + ".json", summary.dump(2) + "\n"});
}

} // namespace detail

/// Run one scenario. Library errors are captured in Outcome::error.
inline Outcome run_scenario(const Scenario& s, std::size_t index, double tol_scale = 1.0) {
    Outcome out;
    detail::RowSink sink(s, tol_scale);
    const auto start = std::chrono::steady_clock::now();
    try {
        if (s.kind == "triple_validate") detail::run_triple_validate(s, sink, out);
        else if (s.kind == "product_check") detail::run_product_check(s, sink, out);
        else if (s.kind == "commutant") detail::run_commutant(s, sink, out);
        else if (s.kind == "spectrum") detail::run_spectrum(s, sink, out, index);
        else if (s.kind == "qds_battery") detail::run_qds_battery(s, sink, out);
        else if (s.kind == "dirichlet") detail::run_dirichlet(s, sink, out);
        else if (s.kind == "covariance") detail::run_covariance(s, sink, out);
        else if (s.kind == "smoothness") detail::run_smoothness(s, sink, out);
        else if (s.kind == "dilation") detail::run_dilation(s, sink, out, index);
        else throw Error("no runner for kind " + s.kind);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    out.rows = std::move(sink.rows);
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

struct RunResult {
    json report = json::array();
    std::vector<Artifact> artifacts;
    std::vector<std::string> errors;
    int exit_code = 0; ///< 0 all passed, 1 a check failed, 3 a scenario raised
};

/// Run every scenario on up to `jobs` threads; the report keeps input order.
inline RunResult run_all(const std::vector<Scenario>& scenarios, int jobs, double tol_scale) {
    std::vector<Outcome> outcomes(scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) outcomes[i] = run_scenario(scenarios[i], i, tol_scale);
    };
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(scenarios.size())));
    std::vector<std::thread> pool;
    for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    RunResult r;
    bool failed = false;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const Scenario& s = scenarios[i];
        const Outcome& o = outcomes[i];
        for (const Row& row : o.rows) {
            json j{{"scenario", i},
                   {"kind", s.kind},
                   {"check_name", row.check_name},
                   {"passed", row.passed},
                   {"residual", row.residual},
                   {"tolerance", row.tolerance},
                   {"params", s.params},
                   {"seed", s.seed ? json(*s.seed) : json(nullptr)},
                   {"wall_ms", o.wall_ms}};
            if (row.value) j["value"] = *row.value;
            failed = failed || !row.passed;
            r.report.push_back(std::move(j));
        }
        for (const Artifact& a : o.artifacts) r.artifacts.push_back(a);
        if (o.error) r.errors.push_back("scenario[" + std::to_string(i) + "] (" + s.kind + "): " + *o.error);
    }
    r.exit_code = !r.errors.empty() ? 3 : (failed ? 1 : 0);
    return r;
}

/// Parse a decimal seed override such as the NCG_SEED environment variable.
inline std::uint64_t parse_seed_override(const std::string& text) {
    try {
        std::size_t used = 0;
        if (text.empty() || text.front() == '-') throw ParseError("");
        const unsigned long long v = std::stoull(text, &used, 10);
        if (used != text.size()) throw ParseError("");
        return v;
    } catch (const std::exception&) {
        throw ParseError("NCG_SEED: expected a nonnegative 64-bit integer, got '" + text + "'");
    }
}

} // namespace ncg::cli
