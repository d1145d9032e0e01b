// Batch front end: lwbvp <constants|certify|solve|sweep> --config FILE [options]

#include "lwbvp/errors.hpp"
#include "lwbvp/run.hpp"
#include "lwbvp/run_config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
    std::string config;
    std::string output_dir;
    bool no_timing = false;
    std::optional<std::string> a, b, c;
    std::optional<std::size_t> grid;
    std::vector<std::string> axes;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "problem configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output-dir", o.output_dir, "directory for report.json and CSV files");
    cmd->add_flag("--no-timing", o.no_timing, "omit wall-clock timings from the report");
}

lwbvp::RunConfig build_config(const Options& o, lwbvp::Mode mode) {
    lwbvp::RunConfig cfg = lwbvp::load_run_config(o.config);
    cfg.mode = mode;
    if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;

    if (o.a || o.b || o.c) {
        if (!cfg.thresholds && !(o.a && o.b && o.c)) {
            throw lwbvp::ConfigError("--a, --b and --c are all required when the config has no thresholds");
        }
        lwbvp::ThresholdTriple tt = cfg.thresholds.value_or(lwbvp::ThresholdTriple{});
        if (o.a) tt.a = lwbvp::Number::parse(*o.a);
        if (o.b) tt.b = lwbvp::Number::parse(*o.b);
        if (o.c) tt.c = lwbvp::Number::parse(*o.c);
        if (!(tt.a.value() > 0.0) || !(tt.b.value() > 0.0) || !(tt.c.value() > 0.0)) {
            throw lwbvp::ConfigError("thresholds must be positive");
        }
        cfg.thresholds = tt;
    }
    if (o.grid) {
        if (*o.grid < 65 || *o.grid % 2 == 0) throw lwbvp::ConfigError("--grid must be odd and at least 65");
        cfg.grid_n = *o.grid;
    }
    if (!o.axes.empty()) {
        cfg.axes.clear();
        for (const auto& text : o.axes) cfg.axes.push_back(lwbvp::SweepAxis::parse(text));
    }
    return cfg;
}

void print_summary(const lwbvp::RunOutcome& out) {
    const auto& r = out.report;
    if (r.contains("constants")) {
        const auto& k = r["constants"];
        for (const char* name : {"lambda", "gamma", "m", "delta"}) {
            const auto& e = k[name];
            std::cout << name << " = " << (e["exact"].is_string() ? e["exact"].get<std::string>() : e["value"].dump())
                      << '\n';
        }
    }
    if (r.contains("certificate") && r["certificate"].is_object()) {
        const auto& c = r["certificate"];
        std::cout << "certificate: " << (c["verdict"].get<bool>() ? "true" : "false");
        for (const char* d : {"D1", "D2", "D3"}) std::cout << "  " << d << " margin " << c[d]["margin"].dump();
        std::cout << '\n';
    }
    if (r.contains("solutions")) {
        for (const auto& s : r["solutions"]) {
            std::cout << "solution " << s["index"].dump() << ": " << s["label"].get<std::string>() << "  norm "
                      << s["norm"].dump() << "  min " << s["min_full"].dump() << '\n';
        }
    }
    if (r.contains("error")) std::cerr << "error: " << r["error"]["message"].get<std::string>() << '\n';
    for (const auto& f : out.files) std::cout << "wrote " << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-point integral boundary value problems: constants, certificates and solutions"};
    app.require_subcommand(1);
    Options o;

    auto* constants = app.add_subcommand("constants", "validate the problem and compute Lambda, gamma, m, delta");
    add_common(constants, o);

    auto* certify = app.add_subcommand("certify", "check a threshold triple (or search for one)");
    add_common(certify, o);
    certify->add_option("--a", o.a, "threshold a (decimal or p/q)");
    certify->add_option("--b", o.b, "threshold b (decimal or p/q)");
    certify->add_option("--c", o.c, "threshold c (decimal or p/q)");

    auto* solve = app.add_subcommand("solve", "certify, then find and classify solutions");
    add_common(solve, o);
    solve->add_option("--grid", o.grid, "grid size (odd, >= 65)");

    auto* sweep = app.add_subcommand("sweep", "tabulate constants over a parameter grid");
    add_common(sweep, o);
    sweep->add_option("--axis", o.axes, "name:lo:hi:steps with name in {alpha, beta, eta}")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : lwbvp::kExitConfig;
    }

    lwbvp::Mode mode = lwbvp::Mode::constants;
    if (*certify) mode = lwbvp::Mode::certify;
    if (*solve) mode = lwbvp::Mode::solve;
    if (*sweep) mode = lwbvp::Mode::sweep;

    lwbvp::RunConfig cfg;
    try {
        cfg = build_config(o, mode);
    } catch (const lwbvp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return lwbvp::kExitConfig;
    }

    lwbvp::RunOptions ro;
    ro.timing = !o.no_timing;
    const lwbvp::RunOutcome out = lwbvp::run(cfg, ro);
    print_summary(out);
    return out.exit_code;
}
