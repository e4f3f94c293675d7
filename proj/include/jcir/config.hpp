#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "jcir/experiments.hpp"
#include "jcir/malliavin.hpp"
#include "jcir/process.hpp"

namespace jcir {

enum class Command { Simulate, Density, Estimate, Experiment, Malliavin };

enum class ExperimentKind {
    ContinuousLan,
    DiscreteLan,
    ContinuousLaq,
    DiscreteLaq,
    ContinuousLamn,
    DiscreteLamn,
    Girsanov,
    Ergodic,
    StableClt,
    VLaw,
};

struct SimulateOptions {
    double T = 1.0;
    std::size_t steps = 100;
    Scheme scheme = Scheme::ExactBetweenJumps;
    bool operator==(const SimulateOptions&) const = default;
};

struct DensityOptions {
    double t = 1.0;
    double x = 1.0;
    double y_lo = 0.05;
    double y_hi = 8.0;
    std::size_t y_count = 200;
    bool char_trace = false;
    double char_v_max = 100.0;
    bool operator==(const DensityOptions&) const = default;
};

struct EstimateOptions {
    bool discrete = false;
    std::string input_csv;  // empty: simulate internally
    double T = 100.0;
    std::size_t steps = 10000;
    std::size_t n = 2000;
    double delta = 0.05;
    std::size_t substeps = 8;
    std::size_t replications = 1;
    double search_lo = 0.0;  // lo == hi: derive from the continuous pilot
    double search_hi = 0.0;
    bool operator==(const EstimateOptions&) const = default;
};

struct ExperimentOptions {
    ExperimentKind kind = ExperimentKind::ContinuousLan;
    double u = 1.0;
    double T = 100.0;
    double path_dt = 0.01;
    std::size_t n = 2000;
    double delta = 0.05;
    std::size_t substeps = 8;
    std::size_t replications = 500;
    std::size_t limit_replications = 2000;
    double b_tilde = 0.0;               // girsanov
    std::vector<double> u_list;         // v-law
    GateTolerances gates;
    bool operator==(const ExperimentOptions& o) const {
        return kind == o.kind && u == o.u && T == o.T && path_dt == o.path_dt && n == o.n &&
               delta == o.delta && substeps == o.substeps && replications == o.replications &&
               limit_replications == o.limit_replications && b_tilde == o.b_tilde &&
               u_list == o.u_list && gates.mean_tol == o.gates.mean_tol &&
               gates.var_rel_tol == o.gates.var_rel_tol && gates.ks_p_min == o.gates.ks_p_min &&
               gates.laplace_tol == o.gates.laplace_tol &&
               gates.ergodic_rel_tol == o.gates.ergodic_rel_tol;
    }
};

struct MalliavinOptions {
    bool ibp = false;  // false: h-scan
    double x = 1.0;
    double delta = 0.05;
    std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025};
    std::size_t replications = 100000;
    std::size_t refine = 16;
    IbpTestFunction test_function = IbpTestFunction::ExpNeg1;
    bool operator==(const MalliavinOptions&) const = default;
};

struct RunConfig {
    Command command = Command::Simulate;
    CirParams params{1.0, 1.0, 0.5, 1.0, LevyMeasure::zero()};
    std::uint64_t seed = 12345;
    std::string out_dir = "out";
    unsigned threads = 0;
    SimulateOptions simulate;
    DensityOptions density;
    EstimateOptions estimate;
    ExperimentOptions experiment;
    MalliavinOptions malliavin;

    bool operator==(const RunConfig& o) const;
};

namespace cfgdetail {

using nlohmann::json;

inline bool levy_equal(const LevyMeasure& a, const LevyMeasure& b) {
    if (a.v().index() != b.v().index()) return false;
    bool eq = true;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.v());
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                eq = true;
            } else if constexpr (std::is_same_v<T, DiracAtom>) {
                eq = x.rate == y.rate && x.z == y.z;
            } else if constexpr (std::is_same_v<T, CompoundPoissonExp>) {
                eq = x.c == y.c && x.lambda == y.lambda;
            } else if constexpr (std::is_same_v<T, GammaProcess>) {
                eq = x.gamma == y.gamma && x.lambda == y.lambda;
            } else if constexpr (std::is_same_v<T, GammaDensity>) {
                eq = x.alpha == y.alpha && x.lambda == y.lambda;
            } else if constexpr (std::is_same_v<T, InverseGaussianMeasure>) {
                eq = x.delta == y.delta && x.gamma == y.gamma;
            } else {
                eq = false;  // CustomDensity is not config-expressible
            }
        },
        a.v());
    return eq;
}

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config: " + where + ": " + what);
}

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(where + "." + it.key(), "unknown key");
}

template <class T>
T get_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(where + "." + key, "wrong type");
    }
}

template <class T>
T require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) fail(where + "." + key, "missing required key");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(where + "." + key, "wrong type");
    }
}

inline LevyMeasure parse_levy(const json& j, const std::string& where) {
    const std::string kind = require<std::string>(j, "kind", where);
    if (kind == "zero") {
        reject_unknown(j, {"kind"}, where);
        return LevyMeasure::zero();
    }
    if (kind == "dirac") {
        reject_unknown(j, {"kind", "rate", "z"}, where);
        return LevyMeasure::dirac(require<double>(j, "rate", where), require<double>(j, "z", where));
    }
    if (kind == "compound-poisson-exp") {
        reject_unknown(j, {"kind", "c", "lambda"}, where);
        return LevyMeasure::compound_poisson_exp(require<double>(j, "c", where),
                                                 require<double>(j, "lambda", where));
    }
    if (kind == "gamma-process") {
        reject_unknown(j, {"kind", "gamma", "lambda"}, where);
        return LevyMeasure::gamma_process(require<double>(j, "gamma", where),
                                          require<double>(j, "lambda", where));
    }
    if (kind == "gamma-density") {
        reject_unknown(j, {"kind", "alpha", "lambda"}, where);
        return LevyMeasure::gamma_density(require<double>(j, "alpha", where),
                                          require<double>(j, "lambda", where));
    }
    if (kind == "inverse-gaussian") {
        reject_unknown(j, {"kind", "delta", "gamma"}, where);
        return LevyMeasure::inverse_gaussian(require<double>(j, "delta", where),
                                             require<double>(j, "gamma", where));
    }
    fail(where + ".kind", "unknown Levy measure kind '" + kind + "'");
}

inline json emit_levy(const LevyMeasure& m) {
    json j;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            j["kind"] = m.kind_name();
            if constexpr (std::is_same_v<T, DiracAtom>) {
                j["rate"] = x.rate;
                j["z"] = x.z;
            } else if constexpr (std::is_same_v<T, CompoundPoissonExp>) {
                j["c"] = x.c;
                j["lambda"] = x.lambda;
            } else if constexpr (std::is_same_v<T, GammaProcess>) {
                j["gamma"] = x.gamma;
                j["lambda"] = x.lambda;
            } else if constexpr (std::is_same_v<T, GammaDensity>) {
                j["alpha"] = x.alpha;
                j["lambda"] = x.lambda;
            } else if constexpr (std::is_same_v<T, InverseGaussianMeasure>) {
                j["delta"] = x.delta;
                j["gamma"] = x.gamma;
            } else if constexpr (std::is_same_v<T, CustomDensity>) {
                throw std::invalid_argument("config: CustomDensity is not serializable");
            }
        },
        m.v());
    return j;
}

inline Command parse_command(const std::string& s) {
    if (s == "simulate") return Command::Simulate;
    if (s == "density") return Command::Density;
    if (s == "estimate") return Command::Estimate;
    if (s == "experiment") return Command::Experiment;
    if (s == "malliavin") return Command::Malliavin;
    fail("command", "unknown command '" + s + "'");
}

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Simulate: return "simulate";
        case Command::Density: return "density";
        case Command::Estimate: return "estimate";
        case Command::Experiment: return "experiment";
        case Command::Malliavin: return "malliavin";
    }
    return "?";
}

inline ExperimentKind parse_kind(const std::string& s) {
    if (s == "continuous-lan") return ExperimentKind::ContinuousLan;
    if (s == "discrete-lan") return ExperimentKind::DiscreteLan;
    if (s == "continuous-laq") return ExperimentKind::ContinuousLaq;
    if (s == "discrete-laq") return ExperimentKind::DiscreteLaq;
    if (s == "continuous-lamn") return ExperimentKind::ContinuousLamn;
    if (s == "discrete-lamn") return ExperimentKind::DiscreteLamn;
    if (s == "girsanov") return ExperimentKind::Girsanov;
    if (s == "ergodic") return ExperimentKind::Ergodic;
    if (s == "stable-clt") return ExperimentKind::StableClt;
    if (s == "v-law") return ExperimentKind::VLaw;
    fail("experiment.kind", "unknown experiment kind '" + s + "'");
}

inline const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::ContinuousLan: return "continuous-lan";
        case ExperimentKind::DiscreteLan: return "discrete-lan";
        case ExperimentKind::ContinuousLaq: return "continuous-laq";
        case ExperimentKind::DiscreteLaq: return "discrete-laq";
        case ExperimentKind::ContinuousLamn: return "continuous-lamn";
        case ExperimentKind::DiscreteLamn: return "discrete-lamn";
        case ExperimentKind::Girsanov: return "girsanov";
        case ExperimentKind::Ergodic: return "ergodic";
        case ExperimentKind::StableClt: return "stable-clt";
        case ExperimentKind::VLaw: return "v-law";
    }
    return "?";
}

}  // namespace cfgdetail

inline bool RunConfig::operator==(const RunConfig& o) const {
    return command == o.command && params.a == o.params.a && params.b == o.params.b &&
           params.sigma == o.params.sigma && params.y0 == o.params.y0 &&
           cfgdetail::levy_equal(params.m, o.params.m) && seed == o.seed && out_dir == o.out_dir &&
           threads == o.threads && simulate == o.simulate && density == o.density &&
           estimate == o.estimate && experiment == o.experiment && malliavin == o.malliavin;
}

inline bool experiment_is_discrete(ExperimentKind k) {
    return k == ExperimentKind::DiscreteLan || k == ExperimentKind::DiscreteLaq ||
           k == ExperimentKind::DiscreteLamn;
}

// Parses and fully validates a configuration document. Unknown keys are
// rejected with their location; (A3) violations for discrete-observation
// experiments are errors unless explicitly allowed.
inline RunConfig parse_config(const std::string& text, bool allow_outside_a3 = false) {
    using cfgdetail::fail;
    using cfgdetail::get_or;
    using cfgdetail::require;
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("$", "top level must be an object");
    cfgdetail::reject_unknown(
        j, {"command", "params", "seed", "out_dir", "threads", "simulate", "density", "estimate",
            "experiment", "malliavin"},
        "$");

    RunConfig c;
    c.command = cfgdetail::parse_command(require<std::string>(j, "command", "$"));
    c.seed = get_or<std::uint64_t>(j, "seed", 12345, "$");
    c.out_dir = get_or<std::string>(j, "out_dir", "out", "$");
    c.threads = get_or<unsigned>(j, "threads", 0, "$");

    const json jp = require<json>(j, "params", "$");
    cfgdetail::reject_unknown(jp, {"a", "b", "sigma", "y0", "levy"}, "params");
    const double a = require<double>(jp, "a", "params");
    const double b = require<double>(jp, "b", "params");
    const double sigma = require<double>(jp, "sigma", "params");
    const double y0 = require<double>(jp, "y0", "params");
    LevyMeasure m = jp.contains("levy") ? cfgdetail::parse_levy(jp.at("levy"), "params.levy")
                                        : LevyMeasure::zero();
    try {
        c.params = CirParams(a, b, sigma, y0, std::move(m));
        validate(c.params.m);
    } catch (const std::exception& e) {
        fail("params", e.what());
    }

    switch (c.command) {
        case Command::Simulate: {
            const json js = get_or<json>(j, "simulate", json::object(), "$");
            cfgdetail::reject_unknown(js, {"T", "steps", "scheme"}, "simulate");
            c.simulate.T = get_or<double>(js, "T", c.simulate.T, "simulate");
            c.simulate.steps = get_or<std::size_t>(js, "steps", c.simulate.steps, "simulate");
            const std::string scheme =
                get_or<std::string>(js, "scheme", "exact-between-jumps", "simulate");
            if (scheme == "exact-between-jumps")
                c.simulate.scheme = Scheme::ExactBetweenJumps;
            else if (scheme == "symmetrized-euler")
                c.simulate.scheme = Scheme::SymmetrizedEuler;
            else
                fail("simulate.scheme", "unknown scheme '" + scheme + "'");
            if (!(c.simulate.T > 0.0)) fail("simulate.T", "must be > 0");
            if (c.simulate.steps < 1) fail("simulate.steps", "must be >= 1");
            break;
        }
        case Command::Density: {
            const json jd = get_or<json>(j, "density", json::object(), "$");
            cfgdetail::reject_unknown(jd, {"t", "x", "y_lo", "y_hi", "y_count", "char_trace", "char_v_max"},
                                      "density");
            c.density.t = get_or<double>(jd, "t", c.density.t, "density");
            c.density.x = get_or<double>(jd, "x", c.density.x, "density");
            c.density.y_lo = get_or<double>(jd, "y_lo", c.density.y_lo, "density");
            c.density.y_hi = get_or<double>(jd, "y_hi", c.density.y_hi, "density");
            c.density.y_count = get_or<std::size_t>(jd, "y_count", c.density.y_count, "density");
            c.density.char_trace = get_or<bool>(jd, "char_trace", false, "density");
            c.density.char_v_max = get_or<double>(jd, "char_v_max", c.density.char_v_max, "density");
            if (!(c.density.t > 0.0)) fail("density.t", "must be > 0");
            if (!(c.density.x >= 0.0)) fail("density.x", "must be >= 0");
            if (!(c.density.y_lo > 0.0)) fail("density.y_lo", "must be > 0");
            if (!(c.density.y_hi > c.density.y_lo)) fail("density.y_hi", "must exceed y_lo");
            if (c.density.y_count < 2) fail("density.y_count", "must be >= 2");
            if (!strictly_positive_regime(c.params))
                fail("density", "density inversion outside proven regime (needs 2a > sigma^2)");
            break;
        }
        case Command::Estimate: {
            const json je = get_or<json>(j, "estimate", json::object(), "$");
            cfgdetail::reject_unknown(je,
                                      {"mode", "input_csv", "T", "steps", "n", "delta", "substeps",
                                       "replications", "search_lo", "search_hi"},
                                      "estimate");
            const std::string mode = get_or<std::string>(je, "mode", "continuous", "estimate");
            if (mode == "continuous")
                c.estimate.discrete = false;
            else if (mode == "discrete")
                c.estimate.discrete = true;
            else
                fail("estimate.mode", "must be 'continuous' or 'discrete'");
            c.estimate.input_csv = get_or<std::string>(je, "input_csv", "", "estimate");
            c.estimate.T = get_or<double>(je, "T", c.estimate.T, "estimate");
            c.estimate.steps = get_or<std::size_t>(je, "steps", c.estimate.steps, "estimate");
            c.estimate.n = get_or<std::size_t>(je, "n", c.estimate.n, "estimate");
            c.estimate.delta = get_or<double>(je, "delta", c.estimate.delta, "estimate");
            c.estimate.substeps = get_or<std::size_t>(je, "substeps", c.estimate.substeps, "estimate");
            c.estimate.replications =
                get_or<std::size_t>(je, "replications", c.estimate.replications, "estimate");
            c.estimate.search_lo = get_or<double>(je, "search_lo", 0.0, "estimate");
            c.estimate.search_hi = get_or<double>(je, "search_hi", 0.0, "estimate");
            if (c.estimate.discrete && !strictly_positive_regime(c.params))
                fail("estimate", "discrete likelihood needs 2a > sigma^2");
            break;
        }
        case Command::Experiment: {
            const json jx = require<json>(j, "experiment", "$");
            cfgdetail::reject_unknown(jx,
                                      {"kind", "u", "T", "path_dt", "n", "delta", "substeps",
                                       "replications", "limit_replications", "b_tilde", "u_list",
                                       "gates"},
                                      "experiment");
            c.experiment.kind = cfgdetail::parse_kind(require<std::string>(jx, "kind", "experiment"));
            c.experiment.u = get_or<double>(jx, "u", c.experiment.u, "experiment");
            c.experiment.T = get_or<double>(jx, "T", c.experiment.T, "experiment");
            c.experiment.path_dt = get_or<double>(jx, "path_dt", c.experiment.path_dt, "experiment");
            c.experiment.n = get_or<std::size_t>(jx, "n", c.experiment.n, "experiment");
            c.experiment.delta = get_or<double>(jx, "delta", c.experiment.delta, "experiment");
            c.experiment.substeps = get_or<std::size_t>(jx, "substeps", c.experiment.substeps, "experiment");
            c.experiment.replications =
                get_or<std::size_t>(jx, "replications", c.experiment.replications, "experiment");
            c.experiment.limit_replications = get_or<std::size_t>(
                jx, "limit_replications", c.experiment.limit_replications, "experiment");
            c.experiment.b_tilde = get_or<double>(jx, "b_tilde", c.params.b, "experiment");
            c.experiment.u_list =
                get_or<std::vector<double>>(jx, "u_list", {-0.5, -1.0, -2.0}, "experiment");
            if (jx.contains("gates")) {
                const json jg = jx.at("gates");
                cfgdetail::reject_unknown(
                    jg, {"mean_tol", "var_rel_tol", "ks_p_min", "laplace_tol", "ergodic_rel_tol"},
                    "experiment.gates");
                auto& g = c.experiment.gates;
                g.mean_tol = get_or<double>(jg, "mean_tol", g.mean_tol, "experiment.gates");
                g.var_rel_tol = get_or<double>(jg, "var_rel_tol", g.var_rel_tol, "experiment.gates");
                g.ks_p_min = get_or<double>(jg, "ks_p_min", g.ks_p_min, "experiment.gates");
                g.laplace_tol = get_or<double>(jg, "laplace_tol", g.laplace_tol, "experiment.gates");
                g.ergodic_rel_tol =
                    get_or<double>(jg, "ergodic_rel_tol", g.ergodic_rel_tol, "experiment.gates");
            }
            const ExperimentKind k = c.experiment.kind;
            if (experiment_is_discrete(k) && !satisfies_a3(c.params) && !allow_outside_a3) {
                fail("experiment",
                     "condition (A3) violated: a/sigma^2 = " +
                         std::to_string(c.params.a / (c.params.sigma * c.params.sigma)) +
                         " <= " + std::to_string(a3_bound()) +
                         " (pass --allow-outside-a3 to run anyway)");
            }
            if ((k == ExperimentKind::ContinuousLan || k == ExperimentKind::DiscreteLan) &&
                !(c.params.b > 0.0))
                fail("experiment", "LAN requires b > 0");
            if ((k == ExperimentKind::ContinuousLaq || k == ExperimentKind::DiscreteLaq) &&
                c.params.b != 0.0)
                fail("experiment", "LAQ requires b = 0");
            if ((k == ExperimentKind::ContinuousLamn || k == ExperimentKind::DiscreteLamn ||
                 k == ExperimentKind::VLaw) &&
                !(c.params.b < 0.0))
                fail("experiment", "LAMN/V-law requires b < 0");
            if (k == ExperimentKind::Ergodic && !(c.params.b > 0.0))
                fail("experiment", "ergodic check requires b > 0");
            break;
        }
        case Command::Malliavin: {
            const json jm = get_or<json>(j, "malliavin", json::object(), "$");
            cfgdetail::reject_unknown(
                jm, {"mode", "x", "delta", "deltas", "replications", "refine", "test_function"},
                "malliavin");
            const std::string mode = get_or<std::string>(jm, "mode", "h-scan", "malliavin");
            if (mode == "h-scan")
                c.malliavin.ibp = false;
            else if (mode == "ibp")
                c.malliavin.ibp = true;
            else
                fail("malliavin.mode", "must be 'h-scan' or 'ibp'");
            c.malliavin.x = get_or<double>(jm, "x", c.malliavin.x, "malliavin");
            c.malliavin.delta = get_or<double>(jm, "delta", c.malliavin.delta, "malliavin");
            c.malliavin.deltas = get_or<std::vector<double>>(jm, "deltas", c.malliavin.deltas, "malliavin");
            c.malliavin.replications =
                get_or<std::size_t>(jm, "replications", c.malliavin.replications, "malliavin");
            c.malliavin.refine = get_or<std::size_t>(jm, "refine", c.malliavin.refine, "malliavin");
            const std::string tf = get_or<std::string>(jm, "test_function", "exp1", "malliavin");
            if (tf == "exp1")
                c.malliavin.test_function = IbpTestFunction::ExpNeg1;
            else if (tf == "exp2")
                c.malliavin.test_function = IbpTestFunction::ExpNeg2;
            else if (tf == "bump")
                c.malliavin.test_function = IbpTestFunction::Bump;
            else
                fail("malliavin.test_function", "must be exp1, exp2 or bump");
            if (!(c.malliavin.x > 0.0)) fail("malliavin.x", "must be > 0");
            if (!satisfies_a3(c.params) && !allow_outside_a3)
                fail("malliavin", "condition (A3) violated (pass --allow-outside-a3 to run anyway)");
            break;
        }
    }
    return c;
}

// Canonical emission; parse(emit(c)) == c.
inline std::string emit_config(const RunConfig& c) {
    using nlohmann::json;
    json j;
    j["command"] = cfgdetail::command_name(c.command);
    j["seed"] = c.seed;
    j["out_dir"] = c.out_dir;
    j["threads"] = c.threads;
    j["params"] = {{"a", c.params.a}, {"b", c.params.b}, {"sigma", c.params.sigma},
                   {"y0", c.params.y0}, {"levy", cfgdetail::emit_levy(c.params.m)}};
    switch (c.command) {
        case Command::Simulate:
            j["simulate"] = {{"T", c.simulate.T},
                             {"steps", c.simulate.steps},
                             {"scheme", scheme_name(c.simulate.scheme)}};
            break;
        case Command::Density:
            j["density"] = {{"t", c.density.t},         {"x", c.density.x},
                            {"y_lo", c.density.y_lo},   {"y_hi", c.density.y_hi},
                            {"y_count", c.density.y_count}, {"char_trace", c.density.char_trace},
                            {"char_v_max", c.density.char_v_max}};
            break;
        case Command::Estimate:
            j["estimate"] = {{"mode", c.estimate.discrete ? "discrete" : "continuous"},
                             {"input_csv", c.estimate.input_csv},
                             {"T", c.estimate.T},
                             {"steps", c.estimate.steps},
                             {"n", c.estimate.n},
                             {"delta", c.estimate.delta},
                             {"substeps", c.estimate.substeps},
                             {"replications", c.estimate.replications},
                             {"search_lo", c.estimate.search_lo},
                             {"search_hi", c.estimate.search_hi}};
            break;
        case Command::Experiment:
            j["experiment"] = {{"kind", cfgdetail::kind_name(c.experiment.kind)},
                               {"u", c.experiment.u},
                               {"T", c.experiment.T},
                               {"path_dt", c.experiment.path_dt},
                               {"n", c.experiment.n},
                               {"delta", c.experiment.delta},
                               {"substeps", c.experiment.substeps},
                               {"replications", c.experiment.replications},
                               {"limit_replications", c.experiment.limit_replications},
                               {"b_tilde", c.experiment.b_tilde},
                               {"u_list", c.experiment.u_list},
                               {"gates",
                                {{"mean_tol", c.experiment.gates.mean_tol},
                                 {"var_rel_tol", c.experiment.gates.var_rel_tol},
                                 {"ks_p_min", c.experiment.gates.ks_p_min},
                                 {"laplace_tol", c.experiment.gates.laplace_tol},
                                 {"ergodic_rel_tol", c.experiment.gates.ergodic_rel_tol}}}};
            break;
        case Command::Malliavin:
            j["malliavin"] = {{"mode", c.malliavin.ibp ? "ibp" : "h-scan"},
                              {"x", c.malliavin.x},
                              {"delta", c.malliavin.delta},
                              {"deltas", c.malliavin.deltas},
                              {"replications", c.malliavin.replications},
                              {"refine", c.malliavin.refine},
                              {"test_function",
                               c.malliavin.test_function == IbpTestFunction::ExpNeg1   ? "exp1"
                               : c.malliavin.test_function == IbpTestFunction::ExpNeg2 ? "exp2"
                                                                                       : "bump"}};
            break;
    }
    return j.dump(2) + "\n";
}

}  // namespace jcir
