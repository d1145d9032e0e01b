#include "lwbvp/nonlinear_solver.hpp"

#include "lwbvp/errors.hpp"
#include "lwbvp/lw_constants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace lwbvp {

std::string to_string(SolutionLabel label) {
    switch (label) {
        case SolutionLabel::small: return "small";
        case SolutionLabel::large_min: return "large-min";
        case SolutionLabel::middle: return "middle";
        case SolutionLabel::unclassified: return "unclassified";
    }
    return "unclassified";
}

std::string to_string(Route r) { return r == Route::picard ? "picard" : "shooting"; }

double psi(const SolutionCurve& u) { return u.min(); }

ConeReport cone_membership(const SolutionCurve& u, const Tolerances& tol) {
    ConeReport c;
    c.min_value = u.min();
    const double h = u.spacing();
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < -tol.nonnegativity) ++c.negative_nodes;
    }
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double d2 = u[i + 1] - 2.0 * u[i] + u[i - 1];
        worst = std::max(worst, d2);
        if (d2 > tol.concavity) ++c.convex_nodes;
    }
    c.max_second_difference = u.size() > 2 ? worst / (h * h) : 0.0;
    c.ok = c.negative_nodes == 0 && c.convex_nodes == 0;
    return c;
}

SolutionCurve compose_f(const Problem& p, const SolutionCurve& u, std::size_t* clamp_events) {
    std::vector<double> y(u.size());
    std::size_t clamps = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double v = u[i];
        if (v < 0.0) {
            v = 0.0;
            ++clamps;
        }
        y[i] = p.f(u.node(i), v);
    }
    if (clamp_events) *clamp_events += clamps;
    return SolutionCurve(u.t1(), std::move(y));
}

SolutionCurve apply_operator_A(const Problem& p, const SolutionCurve& u, const Tolerances& tol) {
    const auto check = check_nonnegativity(u, tol);
    if (!check.ok) {
        std::ostringstream os;
        os.precision(17);
        os << "operator A applied to u with u(" << u.node(check.worst_node) << ") = " << check.worst_value << " < 0";
        throw DomainError(os.str());
    }
    return solve_linear(p.params(), compose_f(p, u), tol);
}

ResidualReport nonlinear_residuals(const Problem& p, const SolutionCurve& u) {
    return residuals(p.params(), u, compose_f(p, u));
}

bool residuals_pass(const ResidualReport& r, double h, const Tolerances& tol) {
    return r.ode_residual_max <= tol.ode_residual(h) && r.bc0_residual <= tol.bc_residual &&
           r.bcT_residual <= tol.bc_residual;
}

FixedPointResult picard_iterate(const Problem& p, const SolutionCurve& u0, double tol, std::size_t max_iter,
                                const SolverConfig& cfg) {
    if (!check_nonnegativity(u0, cfg.tol).ok) {
        throw DomainError("picard_iterate: starting curve has negative values");
    }
    const ProblemParams q = p.params();
    FixedPointResult r;
    SolutionCurve u = u0;
    for (std::size_t k = 1; k <= max_iter; ++k) {
        SolutionCurve next = solve_linear(q, compose_f(p, u, &r.clamp_events), cfg.tol);
        r.iterations = k;
        r.final_update_norm = sup_distance(next, u);
        u = std::move(next);
        if (!std::isfinite(r.final_update_norm) || u.sup_norm() > cfg.divergence_norm) {
            r.diverged = true;
            r.diagnostic = "iterate norm exceeded divergence threshold";
            break;
        }
        if (r.final_update_norm <= tol) {
            r.converged = true;
            break;
        }
    }
    r.curve = u;
    r.residuals = nonlinear_residuals(p, u);
    if (r.converged && !residuals_pass(r.residuals, u.spacing(), cfg.tol)) {
        r.converged = false;
        r.diagnostic = "update converged but residual check failed";
    } else if (!r.converged && !r.diverged) {
        std::ostringstream os;
        os.precision(6);
        os << "max_iter reached with update norm " << r.final_update_norm;
        r.diagnostic = os.str();
    }
    return r;
}

ShootingResult shooting_residual(const Problem& p, double u0, double s0, std::size_t n, double blowup) {
    const double T = p.T.value();
    const double h = T / static_cast<double>(n - 1);
    ShootingResult out;
    auto force = [&](double t, double u) {
        if (u < 0.0) {
            ++out.clamp_events;
            u = 0.0;
        }
        return -p.f(t, u);
    };

    std::vector<double> us(n);
    us[0] = u0;
    double u = u0, v = s0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double t = h * static_cast<double>(i);
        const double k1u = v;
        const double k1v = force(t, u);
        const double k2u = v + 0.5 * h * k1v;
        const double k2v = force(t + 0.5 * h, u + 0.5 * h * k1u);
        const double k3u = v + 0.5 * h * k2v;
        const double k3v = force(t + 0.5 * h, u + 0.5 * h * k2u);
        const double k4u = v + h * k3v;
        const double k4v = force(t + h, u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!std::isfinite(u) || std::abs(u) > blowup) {
            const double marker = (u < 0.0 ? -1.0 : 1.0) * std::numeric_limits<double>::infinity();
            std::fill(us.begin() + static_cast<std::ptrdiff_t>(i) + 1, us.end(), std::copysign(blowup, marker));
            out.blew_up = true;
            out.r1 = marker;
            out.r2 = marker;
            std::ostringstream os;
            os << "solution exceeded |u| = " << blowup << " near t = " << t + h;
            out.diagnostic = os.str();
            out.curve = SolutionCurve(T, std::move(us));
            return out;
        }
        us[i + 1] = u;
    }
    out.curve = SolutionCurve(T, std::move(us));
    out.r1 = u0 - p.beta.value() * out.curve.at(p.eta.value());
    out.r2 = out.curve[n - 1] - p.alpha.value() * quadrature::integrate_to(out.curve.values(), h, p.eta.value());
    return out;
}

Jacobian2 shooting_jacobian(const Problem& p, double u0, double s0, std::size_t n, double step, bool central) {
    Jacobian2 J{};
    const std::array<double, 2> x{u0, s0};
    const ShootingResult base = central ? ShootingResult{} : shooting_residual(p, u0, s0, n);
    for (int j = 0; j < 2; ++j) {
        auto xp = x, xm = x;
        xp[static_cast<std::size_t>(j)] += step;
        xm[static_cast<std::size_t>(j)] -= step;
        const ShootingResult fp = shooting_residual(p, xp[0], xp[1], n);
        if (central) {
            const ShootingResult fm = shooting_residual(p, xm[0], xm[1], n);
            J[0][static_cast<std::size_t>(j)] = (fp.r1 - fm.r1) / (2.0 * step);
            J[1][static_cast<std::size_t>(j)] = (fp.r2 - fm.r2) / (2.0 * step);
        } else {
            J[0][static_cast<std::size_t>(j)] = (fp.r1 - base.r1) / step;
            J[1][static_cast<std::size_t>(j)] = (fp.r2 - base.r2) / step;
        }
    }
    return J;
}

namespace {

double rnorm(const ShootingResult& s) { return std::max(std::abs(s.r1), std::abs(s.r2)); }

bool small_enough(const ShootingResult& s, double tol) {
    return !s.blew_up && rnorm(s) <= tol * std::max(1.0, s.curve.sup_norm());
}

}  // namespace

NewtonResult newton_shoot(const Problem& p, double u0, double s0, const SolverConfig& cfg) {
    NewtonResult r;
    r.u0 = u0;
    r.s0 = s0;
    const std::size_t n = cfg.grid_n;
    r.shot = shooting_residual(p, u0, s0, n, cfg.blowup);
    if (r.shot.blew_up) return r;

    for (std::size_t it = 0; it < cfg.newton_max_iter; ++it) {
        if (small_enough(r.shot, cfg.newton_tol)) {
            r.converged = true;
            break;
        }
        r.iterations = it + 1;
        const double hu = cfg.fd_step * std::max(1.0, std::abs(r.u0));
        const double hs = cfg.fd_step * std::max(1.0, std::abs(r.s0));
        const ShootingResult fu = shooting_residual(p, r.u0 + hu, r.s0, n, cfg.blowup);
        const ShootingResult fs = shooting_residual(p, r.u0, r.s0 + hs, n, cfg.blowup);
        if (fu.blew_up || fs.blew_up) break;
        const double j00 = (fu.r1 - r.shot.r1) / hu, j01 = (fs.r1 - r.shot.r1) / hs;
        const double j10 = (fu.r2 - r.shot.r2) / hu, j11 = (fs.r2 - r.shot.r2) / hs;
        const double det = j00 * j11 - j01 * j10;
        if (!std::isfinite(det) || det == 0.0) break;
        const double du = -(r.shot.r1 * j11 - j01 * r.shot.r2) / det;
        const double ds = -(j00 * r.shot.r2 - j10 * r.shot.r1) / det;

        const double current = rnorm(r.shot);
        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= cfg.max_halvings; ++halving, lambda *= 0.5) {
            ShootingResult trial = shooting_residual(p, r.u0 + lambda * du, r.s0 + lambda * ds, n, cfg.blowup);
            if (!trial.blew_up && rnorm(trial) < current) {
                r.u0 += lambda * du;
                r.s0 += lambda * ds;
                r.last_step = lambda * std::max(std::abs(du), std::abs(ds));
                r.shot = std::move(trial);
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    r.converged = r.converged || small_enough(r.shot, cfg.newton_tol);
    r.residual_norm = rnorm(r.shot);
    return r;
}

SolutionClass classify_solution(const SolutionCurve& u, const ThresholdTriple& tt, double eta) {
    SolutionClass c;
    c.norm = u.sup_norm();
    c.min_full = psi(u);
    c.min_tail = tail_min(u, eta);
    const double a = tt.a.value(), b = tt.b.value();
    if (c.norm < a) {
        c.label = SolutionLabel::small;
    } else if (c.min_full > b) {
        c.label = SolutionLabel::large_min;
    } else if (a < c.norm && c.min_full < b) {
        c.label = SolutionLabel::middle;
    }
    return c;
}

namespace {

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

struct Candidate {
    FixedPointResult fp;
    Route route = Route::picard;
    double norm = 0.0;
    double min = 0.0;
    double score = 0.0;  // residuals relative to their tolerances; lower is better
};

double residual_score(const ResidualReport& r, double h, const Tolerances& tol) {
    return std::max(r.ode_residual_max / tol.ode_residual(h), r.bc_max() / tol.bc_residual);
}

struct Group {
    std::vector<std::size_t> members;
    std::size_t best = 0;
    std::optional<std::size_t> best_picard, best_shooting;
};

// u'(0) from a second-order one-sided difference
double initial_slope(const SolutionCurve& u) {
    return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * u.spacing());
}

}  // namespace

SolutionSet find_solutions(const Problem& p, const std::optional<ThresholdTriple>& thresholds, const SolverConfig& cfg) {
    const ProblemParams q = p.params();
    const std::size_t n = cfg.grid_n;
    const double h = q.T / static_cast<double>(n - 1);
    SolutionSet set;

    // Picard starts
    std::vector<double> picard_levels;
    double u_lo = cfg.u0_lower, u_hi = cfg.u0_upper, s_hi = cfg.s0_upper;
    if (thresholds) {
        const double a = thresholds->a.value(), b = thresholds->b.value(), c = thresholds->c.value();
        double g = 0.0;
        try {
            g = gamma(q);
        } catch (const DomainError&) {
            g = 0.0;
        }
        picard_levels = {cfg.start_fraction * a, a, b};
        if (g > 0.0) picard_levels.push_back(b / g);
        picard_levels.push_back(c);
        u_lo = 1e-4 * a;
        u_hi = 2.0 * c;
        s_hi = 2.0 * c / q.T;
    } else {
        picard_levels = logspace(1e-3, 1e2, 6);
    }

    // Shooting starts: u0 log-spaced, s0 signed log-spaced
    const std::size_t m = std::max<std::size_t>(cfg.shooting_starts, 2);
    const auto u_starts = logspace(u_lo, u_hi, m);
    const auto s_mag = logspace(u_lo / q.T, s_hi, m / 2);
    std::vector<double> s_starts;
    for (auto it = s_mag.rbegin(); it != s_mag.rend(); ++it) s_starts.push_back(-*it);
    for (double s : s_mag) s_starts.push_back(s);

    set.picard_starts = picard_levels.size();
    set.shooting_starts = u_starts.size() * s_starts.size();
    const std::size_t total = set.picard_starts + set.shooting_starts;

    std::vector<std::optional<Candidate>> slots(total);
    parallel_for(total, cfg.threads, [&](std::size_t idx) {
        try {
            Candidate cand;
            if (idx < set.picard_starts) {
                cand.route = Route::picard;
                cand.fp = picard_iterate(p, SolutionCurve::constant(q.T, n, picard_levels[idx]), cfg.picard_tol,
                                         cfg.max_iter, cfg);
                if (!cand.fp.converged) return;
            } else {
                const std::size_t k = idx - set.picard_starts;
                const double u0 = u_starts[k / s_starts.size()];
                const double s0 = s_starts[k % s_starts.size()];
                cand.route = Route::shooting;
                NewtonResult nr = newton_shoot(p, u0, s0, cfg);
                if (!nr.converged) return;
                cand.fp.curve = nr.shot.curve;
                cand.fp.converged = true;
                cand.fp.iterations = nr.iterations;
                cand.fp.final_update_norm = nr.last_step;
                cand.fp.clamp_events = nr.shot.clamp_events;
                cand.fp.residuals = nonlinear_residuals(p, cand.fp.curve);
            }
            cand.norm = cand.fp.curve.sup_norm();
            cand.min = psi(cand.fp.curve);
            cand.score = residual_score(cand.fp.residuals, h, cfg.tol);
            slots[idx] = std::move(cand);
        } catch (const std::exception&) {
            // a failed start is a normal outcome of a multi-start search
        }
    });

    std::vector<Candidate> cands;
    for (auto& s : slots) {
        if (s) cands.push_back(std::move(*s));
    }
    set.candidates = cands.size();
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
        return x.norm != y.norm ? x.norm < y.norm : x.min < y.min;
    });

    std::vector<Group> groups;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        Group* home = nullptr;
        for (auto& g : groups) {
            const auto& rep = cands[g.members.front()];
            if (sup_distance(rep.fp.curve, cands[i].fp.curve) < cfg.dedup_tol * std::max(1.0, rep.norm)) {
                home = &g;
                break;
            }
        }
        if (!home) {
            groups.emplace_back();
            home = &groups.back();
            home->best = i;
        }
        home->members.push_back(i);
        auto better = [&](std::optional<std::size_t> cur) { return !cur || cands[i].score < cands[*cur].score; };
        if (cands[i].score < cands[home->best].score) home->best = i;
        if (cands[i].route == Route::picard && better(home->best_picard)) home->best_picard = i;
        if (cands[i].route == Route::shooting && better(home->best_shooting)) home->best_shooting = i;
    }

    for (const auto& g : groups) {
        const Candidate& rep = cands[g.best];
        FoundSolution sol;
        sol.result = rep.fp;
        sol.source = rep.route;
        sol.found_by_picard = g.best_picard.has_value();
        sol.found_by_shooting = g.best_shooting.has_value();
        sol.cone = cone_membership(rep.fp.curve, cfg.tol);
        if (!residuals_pass(rep.fp.residuals, h, cfg.tol) || !sol.cone.ok) {
            ++set.rejected;
            continue;
        }

        if (sol.found_by_picard && sol.found_by_shooting) {
            sol.cross_distance = sup_distance(cands[*g.best_picard].fp.curve, cands[*g.best_shooting].fp.curve);
            sol.cross_validated = sol.cross_distance <= cfg.cross_tol;
        } else if (sol.found_by_picard) {
            const SolutionCurve& u = rep.fp.curve;
            const NewtonResult nr = newton_shoot(p, u[0], initial_slope(u), cfg);
            sol.cross_distance = nr.converged ? sup_distance(nr.shot.curve, u) : std::numeric_limits<double>::infinity();
            sol.cross_validated = nr.converged && sol.cross_distance <= cfg.cross_tol;
        } else {
            const SolutionCurve& u = rep.fp.curve;
            std::vector<double> clamped(u.values().begin(), u.values().end());
            for (double& v : clamped) v = std::max(v, 0.0);
            const FixedPointResult fp =
                picard_iterate(p, SolutionCurve(q.T, std::move(clamped)), cfg.picard_tol, cfg.max_iter, cfg);
            sol.cross_distance = fp.converged ? sup_distance(fp.curve, u) : std::numeric_limits<double>::infinity();
            sol.cross_validated = fp.converged && sol.cross_distance <= cfg.cross_tol;
        }

        if (thresholds) {
            sol.cls = classify_solution(rep.fp.curve, *thresholds, q.eta);
        } else {
            sol.cls.norm = rep.fp.curve.sup_norm();
            sol.cls.min_full = psi(rep.fp.curve);
            sol.cls.min_tail = tail_min(rep.fp.curve, q.eta);
        }
        set.solutions.push_back(std::move(sol));
    }
    return set;
}

}  // namespace lwbvp
