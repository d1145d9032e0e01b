#include "lwbvp/run.hpp"

#include "lwbvp/certifier.hpp"
#include "lwbvp/errors.hpp"
#include "lwbvp/lw_constants.hpp"
#include "lwbvp/nonlinear_solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lwbvp {

namespace {

namespace fs = std::filesystem;

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json constant_entry(double value, const std::optional<Rational>& exact) {
    Json j;
    j["value"] = value;
    j["exact"] = exact ? Json(to_fraction_string(*exact)) : Json(nullptr);
    return j;
}

Json constants_json(const LWConstants& k) {
    const auto& e = k.exact;
    Json j;
    j["exact_mode"] = e.has_value();
    j["lambda"] = constant_entry(k.lambda, e ? std::optional<Rational>(e->lambda) : std::nullopt);
    j["gamma"] = constant_entry(k.gamma, e ? std::optional<Rational>(e->gamma) : std::nullopt);
    j["m"] = constant_entry(k.m, e ? std::optional<Rational>(e->m) : std::nullopt);
    j["delta"] = constant_entry(k.delta, e ? std::optional<Rational>(e->delta) : std::nullopt);
    j["gamma_argmin"] = k.gamma_argmin;
    j["delta_argmin"] = k.delta_argmin;
    return j;
}

Json hypothesis_json(const HypothesisReport& h, double u_max) {
    Json j;
    j["ok"] = h.ok();
    j["h2_alpha_ok"] = h.h2_alpha_ok;
    j["h2_beta_ok"] = h.h2_beta_ok;
    j["h1_sampled_ok"] = h.h1_sampled_ok;
    j["u_max"] = u_max;
    j["messages"] = h.messages;
    return j;
}

Json condition_json(const ConditionReport& r) {
    Json j;
    j["holds"] = r.holds;
    j["margin"] = r.margin;
    j["bound"] = r.bound;
    j["extreme_value"] = r.extreme_value;
    j["worst_point"] = {{"t", r.worst_t}, {"u", r.worst_u}};
    j["samples_used"] = r.samples_used;
    j["monotone_shortcut"] = r.monotone_shortcut;
    return j;
}

Json certificate_json(const Certificate& c) {
    Json j;
    j["verdict"] = c.verdict;
    j["ordering_ok"] = c.ordering_ok;
    j["D1"] = condition_json(c.d1);
    j["D2"] = condition_json(c.d2);
    j["D3"] = condition_json(c.d3);
    j["sampling"] = {{"samples", c.sampling.samples},
                     {"refine", c.sampling.refine},
                     {"refine_fraction", c.sampling.refine_fraction},
                     {"refine_factor", c.sampling.refine_factor},
                     {"use_monotone_hint", c.sampling.use_monotone_hint}};
    return j;
}

Json triple_json(const ThresholdTriple& tt, bool searched) {
    Json j;
    j["a"] = number_to_json(tt.a);
    j["b"] = number_to_json(tt.b);
    j["c"] = number_to_json(tt.c);
    j["searched"] = searched;
    return j;
}

Json breakpoints_json(const FunctionSpec& f) {
    Json arr = Json::array();
    for (const auto& bc : f.breakpoint_checks()) {
        Json j;
        j["u"] = bc.u;
        j["left"] = bc.left;
        j["right"] = bc.right;
        j["gap"] = bc.gap;
        j["exact_gap"] = bc.exact_gap ? Json(to_fraction_string(*bc.exact_gap)) : Json(nullptr);
        j["continuous"] = bc.continuous;
        arr.push_back(j);
    }
    return arr;
}

Json solution_json(const FoundSolution& s, std::size_t index, const std::string& csv, double h) {
    const ResidualReport& r = s.result.residuals;
    Json j;
    j["index"] = index;
    j["label"] = to_string(s.cls.label);
    j["norm"] = s.cls.norm;
    j["min_full"] = s.cls.min_full;
    j["min_tail"] = s.cls.min_tail;
    j["source"] = to_string(s.source);
    j["found_by_picard"] = s.found_by_picard;
    j["found_by_shooting"] = s.found_by_shooting;
    j["cross_validated"] = s.cross_validated;
    j["cross_distance"] = finite_or_null(s.cross_distance);
    j["residuals"] = {{"ode_max", r.ode_residual_max},
                      {"ode_over_h2", r.ode_residual_max / (h * h)},
                      {"bc0", r.bc0_residual},
                      {"bcT", r.bcT_residual}};
    j["cone"] = {{"ok", s.cone.ok},
                 {"min_value", s.cone.min_value},
                 {"max_second_difference", s.cone.max_second_difference}};
    j["iterations"] = s.result.iterations;
    j["clamp_events"] = s.result.clamp_events;
    j["csv"] = csv;
    return j;
}

SolverConfig solver_config(const RunConfig& c) {
    SolverConfig s;
    s.grid_n = c.grid_n;
    s.picard_tol = c.tolerances.picard;
    s.dedup_tol = c.tolerances.dedup;
    s.max_iter = c.max_iter;
    s.shooting_starts = c.shooting_starts;
    s.tol.bc_residual = c.tolerances.residual;
    return s;
}

SamplingConfig sampling_config(const RunConfig& c) {
    SamplingConfig s;
    s.samples = c.samples;
    s.use_monotone_hint = c.use_monotone_hint;
    return s;
}

class StageClock {
public:
    template <class Fn>
    auto time(const char* stage, Fn&& fn) {
        const auto start = std::chrono::steady_clock::now();
        struct Record {
            StageClock& clock;
            const char* stage;
            std::chrono::steady_clock::time_point start;
            ~Record() {
                const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
                clock.timing_[stage] = dt.count();
            }
        } record{*this, stage, start};
        return fn();
    }
    const Json& json() const { return timing_; }

private:
    Json timing_ = Json::object();
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw NumericalError("failed writing '" + path.string() + "'");
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void run_stages(const RunConfig& cfg, const RunOptions& opt, RunOutcome& out, StageClock& clock) {
    Json& rep = out.report;
    const fs::path dir(cfg.output_dir);
    if (opt.write_files) fs::create_directories(dir);

    if (cfg.mode == Mode::sweep) {
        const auto rows = clock.time("sweep", [&] { return sweep(cfg); });
        std::size_t failed = 0;
        for (const auto& r : rows) failed += r.verdict == "H2-fail";
        rep["sweep"] = {{"rows", rows.size()}, {"h2_fail_rows", failed}, {"csv", "sweep.csv"}};
        if (opt.write_files) {
            write_text(dir / "sweep.csv", sweep_csv(rows));
            out.files.push_back((dir / "sweep.csv").string());
        }
        return;
    }

    const Problem& p = cfg.problem;
    const double u_max = cfg.hypothesis_u_max();
    const HypothesisReport hyp = clock.time("hypothesis", [&] { return validate_hypotheses(p, u_max); });
    rep["hypothesis"] = hypothesis_json(hyp, u_max);
    rep["function"] = {{"kind", to_string(p.f.kind())}, {"breakpoints", breakpoints_json(p.f)}};
    if (!hyp.ok()) {
        out.exit_code = kExitHypothesis;
        return;
    }

    const LWConstants k = clock.time("constants", [&] { return compute_constants(p); });
    rep["constants"] = constants_json(k);
    if (cfg.mode == Mode::constants) return;

    const SamplingConfig grid = sampling_config(cfg);
    std::optional<ThresholdTriple> tt = cfg.thresholds;
    const bool searched = !tt.has_value();
    if (searched) {
        ThresholdSearchConfig search;
        search.sampling = grid;
        tt = clock.time("threshold_search", [&] { return search_thresholds(p, k, search); });
    }
    if (tt) {
        rep["thresholds"] = triple_json(*tt, searched);
        const Certificate cert = clock.time("certify", [&] { return certify(p, *tt, k, grid); });
        rep["certificate"] = certificate_json(cert);
        if (cfg.mode == Mode::certify && !cert.verdict) out.exit_code = kExitCertification;
    } else {
        rep["thresholds"] = nullptr;
        rep["certificate"] = nullptr;
        if (cfg.mode == Mode::certify) out.exit_code = kExitCertification;
    }
    if (cfg.mode == Mode::certify) return;

    const SolverConfig scfg = solver_config(cfg);
    const SolutionSet set = clock.time("solve", [&] { return find_solutions(p, tt, scfg); });
    const double h = p.T.value() / static_cast<double>(cfg.grid_n - 1);
    Json sols = Json::array();
    for (std::size_t i = 0; i < set.solutions.size(); ++i) {
        const std::string name = "solution_" + std::to_string(i) + ".csv";
        sols.push_back(solution_json(set.solutions[i], i, name, h));
        if (opt.write_files) {
            std::ostringstream csv;
            write_csv(set.solutions[i].result.curve, csv);
            write_text(dir / name, csv.str());
            out.files.push_back((dir / name).string());
        }
    }
    rep["solutions"] = sols;
    rep["search"] = {{"picard_starts", set.picard_starts},
                     {"shooting_starts", set.shooting_starts},
                     {"candidates", set.candidates},
                     {"rejected", set.rejected},
                     {"ode_residual_constant", scfg.tol.ode_residual_constant}};
    if (set.solutions.empty()) {
        rep["error"] = {{"kind", "numerical"}, {"message", "no verified solution found"}};
        out.exit_code = kExitNumerical;
    }
}

}  // namespace

RunOutcome run(const RunConfig& config, const RunOptions& options) {
    RunOutcome out;
    out.report["schema_version"] = kReportSchemaVersion;
    out.report["mode"] = to_string(config.mode);
    out.report["config"] = to_json(config);

    StageClock clock;
    auto fail = [&](const char* kind, int code, const std::exception& e) {
        out.report["error"] = {{"kind", kind}, {"message", e.what()}};
        out.exit_code = code;
    };
    try {
        run_stages(config, options, out, clock);
    } catch (const ConfigError& e) {
        fail("config", kExitConfig, e);
    } catch (const DomainError& e) {
        fail("domain", kExitHypothesis, e);
    } catch (const SingularConfigurationError& e) {
        fail("singular", kExitNumerical, e);
    } catch (const NumericalError& e) {
        fail("numerical", kExitNumerical, e);
    } catch (const fs::filesystem_error& e) {
        fail("io", kExitNumerical, e);
    }
    out.report["exit_code"] = out.exit_code;
    if (options.timing) out.report["timing_ms"] = clock.json();

    if (options.write_files) {
        const fs::path path = fs::path(config.output_dir) / "report.json";
        try {
            fs::create_directories(config.output_dir);
            write_text(path, render_report(out.report));
            out.files.push_back(path.string());
        } catch (const std::exception& e) {
            out.report["error"] = {{"kind", "io"}, {"message", e.what()}};
            out.exit_code = kExitNumerical;
        }
    }
    return out;
}

std::vector<SweepRow> sweep(const RunConfig& config) {
    if (config.axes.empty()) throw ConfigError("sweep: at least one axis is required");

    std::vector<std::vector<double>> values;
    for (const auto& ax : config.axes) values.push_back(ax.values());
    const SamplingConfig grid = sampling_config(config);
    const double u_max = config.hypothesis_u_max();

    std::vector<SweepRow> rows;
    std::vector<std::size_t> idx(values.size(), 0);
    while (true) {
        Problem p = config.problem;
        for (std::size_t k = 0; k < values.size(); ++k) {
            const Number v(values[k][idx[k]]);
            const std::string& name = config.axes[k].name;
            if (name == "alpha") p.alpha = v;
            else if (name == "beta") p.beta = v;
            else p.eta = v;
        }
        SweepRow row;
        const ProblemParams q = p.params();
        row.alpha = q.alpha;
        row.beta = q.beta;
        row.eta = q.eta;
        row.lambda = lambda_constant(q);
        bool valid = q.eta > 0.0 && q.eta < q.T && validate_hypotheses(p, u_max).h2_ok();
        std::optional<LWConstants> k;
        if (valid) {
            try {
                k = compute_constants(p);
            } catch (const DomainError&) {
                valid = false;
            }
        }
        if (!valid) {
            row.verdict = "H2-fail";
        } else {
            row.lambda = k->lambda;
            row.gamma = k->gamma;
            row.m = k->m;
            row.delta = k->delta;
            row.verdict = config.thresholds ? (certify(p, *config.thresholds, *k, grid).verdict ? "true" : "false")
                                            : "n/a";
        }
        rows.push_back(row);

        // odometer over the axes, last axis fastest
        std::size_t k_axis = values.size();
        while (k_axis > 0) {
            --k_axis;
            if (++idx[k_axis] < values[k_axis].size()) break;
            idx[k_axis] = 0;
            if (k_axis == 0) return rows;
        }
    }
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "alpha,beta,eta,lambda,gamma,m,delta,verdict\n";
    auto opt = [](const std::optional<double>& v) { return v ? format17(*v) : std::string(); };
    for (const auto& r : rows) {
        out += format17(r.alpha) + ',' + format17(r.beta) + ',' + format17(r.eta) + ',' + format17(r.lambda) + ',' +
               opt(r.gamma) + ',' + opt(r.m) + ',' + opt(r.delta) + ',' + r.verdict + '\n';
    }
    return out;
}

std::string render_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace lwbvp
