// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "lwbvp/certifier.hpp"
#include "lwbvp/linear_solver.hpp"
#include "lwbvp/lw_constants.hpp"
#include "lwbvp/nonlinear_solver.hpp"
#include "lwbvp/run.hpp"

#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace lwbvp;
using namespace lwbvp::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << ']';
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Verdict&)>& body) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail << " [exception: " << e.what() << ']';
    }
    if (!v.pass) ++failures;
    std::printf("%s criterion %d: %s (%.2f s)%s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), seconds_since(t0),
                v.detail.str().c_str());
    std::fflush(stdout);
}

Problem as_float(Problem p) {
    p.T = Number(p.T.value());
    p.eta = Number(p.eta.value());
    p.alpha = Number(p.alpha.value());
    p.beta = Number(p.beta.value());
    return p;
}

ThresholdTriple triple(Rational a, Rational b, Rational c) { return {Number(a), Number(b), Number(c)}; }

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void constants_match(Verdict& v, const char* name, const Problem& p, Rational g, Rational m, Rational d) {
    const LWConstants k = compute_constants(p);
    v.require(k.exact.has_value(), std::string(name) + " exact mode");
    if (!k.exact) return;
    v.require(k.exact->gamma == g, std::string(name) + " gamma = " + to_fraction_string(k.exact->gamma));
    v.require(k.exact->m == m, std::string(name) + " m = " + to_fraction_string(k.exact->m));
    v.require(k.exact->delta == d, std::string(name) + " delta = " + to_fraction_string(k.exact->delta));
    v.detail << ' ' << name << ": gamma=" << to_fraction_string(k.exact->gamma)
             << " m=" << to_fraction_string(k.exact->m) << " delta=" << to_fraction_string(k.exact->delta) << ';';
}

// Lambda as -2 det of the 2x2 boundary system of the unit-load quadratic.
Rational lambda_from_determinant(const Problem& p) {
    const Rational T = p.T.exact(), eta = p.eta.exact(), alpha = p.alpha.exact(), beta = p.beta.exact();
    const Rational a11 = -beta * eta, a12 = 1 - beta;
    const Rational a21 = T - alpha * eta * eta / 2, a22 = 1 - alpha * eta;
    return -2 * (a11 * a22 - a12 * a21);
}

}  // namespace

int main() {
    criterion(1, "exact constants for both examples", [](Verdict& v) {
        constants_match(v, "example 1", example1(), Rational(1, 4), Rational(1, 3), Rational(4, 45));
        constants_match(v, "example 2", example2(), Rational(1, 4), Rational(4, 25), Rational(1, 8));
    });

    criterion(2, "Lambda values", [](Verdict& v) {
        struct Case { const char* name; Problem p; Rational expected; };
        for (const Case& c : {Case{"example 1", example1(), Rational(5, 6)}, Case{"example 2", example2(), Rational(1, 2)}}) {
            const Number lam = lambda_constant(c.p);
            v.require(lam.is_exact() && lam.exact() == c.expected, std::string(c.name) + " Lambda = " + lam.to_string());
            v.require(lambda_from_determinant(c.p) == c.expected, std::string(c.name) + " determinant oracle");
            v.detail << ' ' << c.name << ": Lambda=" << lam.to_string() << ';';
        }
    });

    criterion(3, "certification of both examples with the published triples", [](Verdict& v) {
        struct Case {
            const char* name;
            Problem p;
            ThresholdTriple tt;
            double ma, b_delta, mc;
        };
        const Case cases[] = {
            {"example 1", as_float(example1()), triple(Rational(1, 120), Rational(2), Rational(124)), 1.0 / 360.0, 22.5,
             124.0 / 3.0},
            {"example 2", as_float(example2()), triple(Rational(1, 4), Rational(4), Rational(544)), 1.0 / 25.0, 32.0,
             87.04},
        };
        for (const Case& c : cases) {
            const auto t0 = Clock::now();
            const LWConstants k = compute_constants(c.p);
            const Certificate cert = certify(c.p, c.tt, k);
            const double secs = seconds_since(t0);
            v.require(!k.exact.has_value(), std::string(c.name) + " float mode");
            v.require(cert.verdict, std::string(c.name) + " verdict");
            v.require(std::abs(cert.d1.bound - c.ma) <= 1e-9, std::string(c.name) + " m a");
            v.require(std::abs(cert.d2.bound - c.b_delta) <= 1e-9, std::string(c.name) + " b/delta");
            v.require(std::abs(cert.d3.bound - c.mc) <= 1e-9, std::string(c.name) + " m c");
            v.require(secs < 5.0, std::string(c.name) + " runtime");
            char buf[256];
            std::snprintf(buf, sizeof buf, " %s: ma=%.12g b/delta=%.12g mc=%.12g margins %.3g/%.3g/%.3g in %.3f s;",
                          c.name, cert.d1.bound, cert.d2.bound, cert.d3.bound, cert.d1.margin, cert.d2.margin,
                          cert.d3.margin, secs);
            v.detail << buf;
        }
    });

    criterion(4, "closed-form linear solver against the independent oracle", [](Verdict& v) {
        const auto t0 = Clock::now();
        Random rng(31);
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const ProblemParams p = rng.params();
            const SolutionCurve y = rng.smooth(p.T, 2049);
            worst = std::max(worst, sup_distance(solve_linear(p, y), solve_linear_oracle(p, y)));
        }
        v.require(worst <= 1e-8, "oracle disagreement");

        // y = 1: the quadrature is exact on the quadratic, so the error stays at rounding level
        const Problem ex = example1();
        const ProblemParams p1 = ex.params();
        const auto q = unit_load_solution(p1.T, p1.eta, p1.alpha, p1.beta);
        double unit_worst = 0.0;
        for (std::size_t n : {65u, 129u, 257u, 513u, 1025u, 2049u}) {
            const SolutionCurve u = solve_linear(p1, SolutionCurve::constant(p1.T, n, 1.0));
            for (std::size_t i = 0; i < u.size(); ++i) unit_worst = std::max(unit_worst, std::abs(u[i] - q(u.node(i))));
        }
        v.require(unit_worst <= 1e-13, "unit load reproduced");

        // order on a load with nonzero quadrature error, eta on every grid
        ProblemParams p2 = p1;
        p2.eta = 0.25;
        p2.alpha = 3.0;
        p2.beta = 0.5;
        double min_ratio = 1e300, prev = 0.0;
        for (std::size_t n : {65u, 129u, 257u, 513u}) {
            const SolutionCurve u =
                solve_linear(p2, SolutionCurve::sample(p2.T, n, [](double t) { return std::exp(t); }));
            double e = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) e = std::max(e, std::abs(u[i] - exp_load_solution(p2, u.node(i))));
            if (prev > 0.0) min_ratio = std::min(min_ratio, prev / e);
            prev = e;
        }
        v.require(min_ratio >= 3.5, "doubling ratio");
        const double secs = seconds_since(t0);
        v.require(secs < 30.0, "runtime");
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      " max disagreement %.3g over 200 inputs at n=2049; y=1 error %.3g at every n (ratio undefined);"
                      " min doubling ratio on exp(t) load %.2f",
                      worst, unit_worst, min_ratio);
        v.detail << buf;
    });

    criterion(5, "nonnegativity, gamma bound and cone invariance", [](Verdict& v) {
        Random rng(49);
        double worst_margin = 1e300;
        for (int k = 0; k < 200; ++k) {
            const ProblemParams p = rng.params();
            const SolutionCurve u = solve_linear(p, rng.piecewise(p.T, 2049));
            v.require(check_nonnegativity(u).ok, "nonnegativity case " + std::to_string(k));
            const auto g = check_gamma_bound(u, gamma(p), p.eta);
            v.require(g.ok && g.margin >= -1e-10, "gamma bound case " + std::to_string(k));
            worst_margin = std::min(worst_margin, g.margin);
        }
        std::size_t mapped = 0;
        struct Case { Problem p; double scale; };
        for (const Case& c : {Case{example1(), 20.0}, Case{example2(), 600.0}}) {
            for (int k = 0; k < 100; ++k) {
                const SolutionCurve u = rng.cone_element(1.0, 1025, c.scale);
                if (cone_membership(apply_operator_A(c.p, u)).ok) ++mapped;
            }
        }
        v.require(mapped == 200, "cone invariance");
        v.detail << " 200 random loads, smallest gamma-bound margin " << worst_margin << "; " << mapped
                 << "/200 cone elements mapped into the cone";
    });

    const ThresholdTriple ex1_triple = triple(Rational(1, 120), Rational(2), Rational(124));
    SolutionSet ex1_set;
    double ex1_secs = 0.0;
    std::string ex1_error;
    {
        const auto t0 = Clock::now();
        try {
            ex1_set = find_solutions(example1(), ex1_triple);
        } catch (const std::exception& e) {
            ex1_error = e.what();
        }
        ex1_secs = seconds_since(t0);
    }

    criterion(6, "three distinct labelled solutions of example 1", [&](Verdict& v) {
        v.require(ex1_error.empty(), "solver error: " + ex1_error);
        const auto& sols = ex1_set.solutions;
        v.require(sols.size() >= 3, "found " + std::to_string(sols.size()) + " solutions");
        double min_sep = 1e300;
        for (std::size_t i = 0; i < sols.size(); ++i)
            for (std::size_t j = i + 1; j < sols.size(); ++j)
                min_sep = std::min(min_sep, sup_distance(sols[i].result.curve, sols[j].result.curve));
        v.require(sols.size() < 2 || min_sep > 1e-3, "separation");
        bool small = false, large = false, middle = false;
        for (const auto& s : sols) {
            const double h = s.result.curve.spacing();
            const auto& r = s.result.residuals;
            v.require(r.ode_residual_max <= kDefaultTolerances.ode_residual(h), "ODE residual");
            v.require(r.bc_max() <= 1e-8, "boundary residual");
            small = small || s.cls.label == SolutionLabel::small;
            large = large || s.cls.label == SolutionLabel::large_min;
            middle = middle || s.cls.label == SolutionLabel::middle;
            v.detail << ' ' << to_string(s.cls.label) << "(norm " << s.cls.norm << ", ode " << r.ode_residual_max
                     << ", bc " << r.bc_max() << ')';
        }
        v.require(small && large && middle, "labels");
        v.require(ex1_secs < 120.0, "runtime");
        v.detail << "; min separation " << min_sep << "; solver " << ex1_secs << " s";
    });

    criterion(7, "fixed-point and shooting routes agree on example 1", [&](Verdict& v) {
        v.require(ex1_error.empty() && !ex1_set.solutions.empty(), "no solutions");
        for (const auto& s : ex1_set.solutions) {
            v.require(s.cross_validated && s.cross_distance <= 1e-6, to_string(s.cls.label));
            v.detail << ' ' << to_string(s.cls.label) << ": picard=" << s.found_by_picard
                     << " shooting=" << s.found_by_shooting << " distance " << s.cross_distance << ';';
        }
    });

    criterion(8, "function catalog values and continuity", [](Verdict& v) {
        const FunctionSpec f1 = example1().f;
        const auto at2 = f1.eval_exact(Rational(0), Rational(2));
        const auto at_a = f1.eval_exact(Rational(0), Rational(1, 120));
        v.require(at2 && *at2 == Rational(32), "f1(2)");
        v.require(at_a && *at_a == Rational(40, 14401), "f1(1/120)");
        v.detail << " f1(2)=" << (at2 ? to_fraction_string(*at2) : "n/a")
                 << " f1(1/120)=" << (at_a ? to_fraction_string(*at_a) : "n/a") << ';';
        for (const BreakpointCheck& bc : example2_f().breakpoint_checks()) {
            if (bc.u == 1.0 || bc.u == 4.0 || bc.u == 544.0) v.require(bc.gap <= 1e-9, "continuity at " + std::to_string(bc.u));
            v.detail << " u=" << bc.u << " gap " << bc.gap
                     << " exact " << (bc.exact_gap ? to_fraction_string(*bc.exact_gap) : "n/a") << ';';
        }
    });

    criterion(9, "byte-identical reports on repeated runs", [](Verdict& v) {
        const std::filesystem::path root = std::filesystem::temp_directory_path() / "lwbvp_acceptance";
        std::filesystem::remove_all(root);
        RunOptions opts;
        opts.timing = false;
        for (const char* name : {"example1", "example2"}) {
            RunConfig cfg = load_run_config(std::string(LWBVP_CONFIG_DIR) + "/" + name + ".json");
            cfg.output_dir = (root / name).string();
            std::string first;
            for (int pass = 0; pass < 2; ++pass) {
                const RunOutcome out = run(cfg, opts);
                v.require(out.exit_code == kExitOk, std::string(name) + " exit " + std::to_string(out.exit_code));
                std::string bytes;
                for (const auto& file : out.files) bytes += file + '\n' + slurp(root / name / file);
                if (pass == 0) first = bytes;
                else v.require(bytes == first, std::string(name) + " artifacts differ");
                if (pass == 1) v.detail << ' ' << name << ": " << out.files.size() << " files, " << bytes.size() << " bytes;";
            }
        }
        std::filesystem::remove_all(root);
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
