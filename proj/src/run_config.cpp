#include "lwbvp/run_config.hpp"

#include "lwbvp/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lwbvp {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::constants: return "constants";
        case Mode::certify: return "certify";
        case Mode::solve: return "solve";
        case Mode::sweep: return "sweep";
    }
    return "certify";
}

namespace {

Mode mode_from_string(const std::string& s) {
    if (s == "constants") return Mode::constants;
    if (s == "certify") return Mode::certify;
    if (s == "solve") return Mode::solve;
    if (s == "sweep") return Mode::sweep;
    throw ConfigError("unknown mode '" + s + "'");
}

double positive_double(const Json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + ": expected a number");
    const double v = j.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + ": must be positive");
    return v;
}

std::size_t positive_size(const Json& j, const std::string& what) {
    if (!j.is_number_integer() || j.get<long long>() <= 0) throw ConfigError(what + ": expected a positive integer");
    return j.get<std::size_t>();
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    return obj[key];
}

}  // namespace

SweepAxis SweepAxis::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4) throw ConfigError("sweep axis '" + text + "': expected name:lo:hi:steps");
    SweepAxis ax;
    ax.name = parts[0];
    if (ax.name != "alpha" && ax.name != "beta" && ax.name != "eta") {
        throw ConfigError("sweep axis '" + text + "': name must be alpha, beta or eta");
    }
    try {
        std::size_t used = 0;
        ax.lo = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("lo");
        ax.hi = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("hi");
        const long long steps = std::stoll(parts[3], &used);
        if (used != parts[3].size() || steps < 1) throw std::invalid_argument("steps");
        ax.steps = static_cast<std::size_t>(steps);
    } catch (const std::exception&) {
        throw ConfigError("sweep axis '" + text + "': malformed bounds or step count");
    }
    if (ax.steps == 1 && ax.lo != ax.hi) throw ConfigError("sweep axis '" + text + "': one step needs lo == hi");
    return ax;
}

std::string SweepAxis::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << name << ':' << lo << ':' << hi << ':' << steps;
    return os.str();
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> v(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        v[i] = steps == 1 ? lo
                          : (i + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
    return v;
}

double RunConfig::hypothesis_u_max() const {
    if (u_max) return *u_max;
    if (thresholds) return 2.0 * thresholds->c.value();
    return 10.0;
}

RunConfig parse_run_config(const Json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    RunConfig cfg;

    const Json& pj = require(doc, "problem", "config");
    cfg.problem.T = number_from_json(require(pj, "T", "problem"), "problem.T");
    cfg.problem.eta = number_from_json(require(pj, "eta", "problem"), "problem.eta");
    cfg.problem.alpha = number_from_json(require(pj, "alpha", "problem"), "problem.alpha");
    cfg.problem.beta = number_from_json(require(pj, "beta", "problem"), "problem.beta");
    if (!(cfg.problem.T.value() > 0.0)) throw ConfigError("problem.T must be positive");

    if (doc.contains("thresholds") && !doc["thresholds"].is_null()) {
        const Json& tj = doc["thresholds"];
        ThresholdTriple tt{number_from_json(require(tj, "a", "thresholds"), "thresholds.a"),
                           number_from_json(require(tj, "b", "thresholds"), "thresholds.b"),
                           number_from_json(require(tj, "c", "thresholds"), "thresholds.c")};
        if (!(tt.a.value() > 0.0) || !(tt.b.value() > 0.0) || !(tt.c.value() > 0.0)) {
            throw ConfigError("thresholds: a, b, c must be positive");
        }
        cfg.thresholds = tt;
    }

    if (doc.contains("hypothesis") && doc["hypothesis"].contains("u_max")) {
        cfg.u_max = positive_double(doc["hypothesis"]["u_max"], "hypothesis.u_max");
    }

    if (doc.contains("solver")) {
        const Json& sj = doc["solver"];
        if (!sj.is_object()) throw ConfigError("solver: expected an object");
        if (sj.contains("grid_n")) cfg.grid_n = positive_size(sj["grid_n"], "solver.grid_n");
        if (sj.contains("picard_tol")) cfg.tolerances.picard = positive_double(sj["picard_tol"], "solver.picard_tol");
        if (sj.contains("residual_tol")) cfg.tolerances.residual = positive_double(sj["residual_tol"], "solver.residual_tol");
        if (sj.contains("dedup_tol")) cfg.tolerances.dedup = positive_double(sj["dedup_tol"], "solver.dedup_tol");
        if (sj.contains("max_iter")) cfg.max_iter = positive_size(sj["max_iter"], "solver.max_iter");
        if (sj.contains("shooting_starts")) cfg.shooting_starts = positive_size(sj["shooting_starts"], "solver.shooting_starts");
    }
    if (cfg.grid_n < 65 || cfg.grid_n % 2 == 0) throw ConfigError("solver.grid_n must be odd and at least 65");

    if (doc.contains("certify")) {
        const Json& cj = doc["certify"];
        if (cj.contains("samples")) cfg.samples = positive_size(cj["samples"], "certify.samples");
        if (cj.contains("use_monotone_hint")) {
            if (!cj["use_monotone_hint"].is_boolean()) throw ConfigError("certify.use_monotone_hint: expected a boolean");
            cfg.use_monotone_hint = cj["use_monotone_hint"].get<bool>();
        }
        if (cfg.samples < 2) throw ConfigError("certify.samples must be at least 2");
    }

    if (doc.contains("mode")) {
        if (!doc["mode"].is_string()) throw ConfigError("mode: expected a string");
        cfg.mode = mode_from_string(doc["mode"].get<std::string>());
    }
    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) throw ConfigError("output_dir: expected a string");
        cfg.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("sweep")) {
        const Json& axes = doc["sweep"].value("axes", Json::array());
        if (!axes.is_array()) throw ConfigError("sweep.axes: expected an array of strings");
        for (const auto& a : axes) {
            if (!a.is_string()) throw ConfigError("sweep.axes: expected strings 'name:lo:hi:steps'");
            cfg.axes.push_back(SweepAxis::parse(a.get<std::string>()));
        }
    }

    const SampleDomain domain{cfg.problem.T.value(), cfg.hypothesis_u_max(), 128};
    try {
        cfg.problem.f = parse_function_spec(require(pj, "f", "problem"), domain);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("problem.f: ") + e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc);
}

Json to_json(const RunConfig& cfg) {
    Json j;
    j["problem"] = {{"T", number_to_json(cfg.problem.T)},
                    {"eta", number_to_json(cfg.problem.eta)},
                    {"alpha", number_to_json(cfg.problem.alpha)},
                    {"beta", number_to_json(cfg.problem.beta)},
                    {"f", cfg.problem.f.to_json()}};
    if (cfg.thresholds) {
        j["thresholds"] = {{"a", number_to_json(cfg.thresholds->a)},
                           {"b", number_to_json(cfg.thresholds->b)},
                           {"c", number_to_json(cfg.thresholds->c)}};
    }
    if (cfg.u_max) j["hypothesis"] = {{"u_max", *cfg.u_max}};
    j["solver"] = {{"grid_n", cfg.grid_n},
                   {"picard_tol", cfg.tolerances.picard},
                   {"residual_tol", cfg.tolerances.residual},
                   {"dedup_tol", cfg.tolerances.dedup},
                   {"max_iter", cfg.max_iter},
                   {"shooting_starts", cfg.shooting_starts}};
    j["certify"] = {{"samples", cfg.samples}, {"use_monotone_hint", cfg.use_monotone_hint}};
    j["mode"] = to_string(cfg.mode);
    j["output_dir"] = cfg.output_dir;
    if (!cfg.axes.empty()) {
        Json axes = Json::array();
        for (const auto& a : cfg.axes) axes.push_back(a.to_string());
        j["sweep"] = {{"axes", axes}};
    }
    return j;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    auto same_triple = [](const std::optional<ThresholdTriple>& x, const std::optional<ThresholdTriple>& y) {
        if (x.has_value() != y.has_value()) return false;
        return !x || (x->a == y->a && x->b == y->b && x->c == y->c);
    };
    return a.problem.T == b.problem.T && a.problem.eta == b.problem.eta && a.problem.alpha == b.problem.alpha &&
           a.problem.beta == b.problem.beta && a.problem.f.to_json() == b.problem.f.to_json() &&
           same_triple(a.thresholds, b.thresholds) && a.grid_n == b.grid_n && a.tolerances == b.tolerances &&
           a.max_iter == b.max_iter && a.shooting_starts == b.shooting_starts && a.samples == b.samples &&
           a.use_monotone_hint == b.use_monotone_hint && a.u_max == b.u_max && a.mode == b.mode &&
           a.output_dir == b.output_dir && a.axes == b.axes;
}

}  // namespace lwbvp
