#include "lwbvp/certifier.hpp"

#include "lwbvp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace lwbvp {

std::string to_string(Condition c) {
    switch (c) {
        case Condition::D1: return "D1";
        case Condition::D2: return "D2";
        case Condition::D3: return "D3";
    }
    return "?";
}

namespace {

struct Extreme {
    double value = 0.0;
    double t = 0.0;
    double u = 0.0;
    std::size_t count = 0;
    bool monotone = false;
};

struct Box {
    double t_lo, t_hi, u_lo, u_hi;
};

double lerp(double lo, double hi, std::size_t i, std::size_t n) {
    if (n < 2) return lo;
    return i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

class BoxSampler {
public:
    BoxSampler(const Problem& p, Condition which, bool want_max, const SamplingConfig& cfg)
        : p_(p), which_(which), want_max_(want_max), cfg_(cfg) {}

    Extreme run(const Box& box) {
        best_ = Extreme{};
        have_ = false;
        const std::size_t n = std::max<std::size_t>(cfg_.samples, 2);
        const bool monotone = cfg_.use_monotone_hint && p_.f.monotone_in_u();
        if (monotone) {
            // nondecreasing in u: the extreme over u sits on one edge
            const double u = want_max_ ? box.u_hi : box.u_lo;
            sweep(box.t_lo, box.t_hi, n, u, u, 1);
            if (cfg_.refine) {
                const auto [lo, hi] = window(best_.t, box.t_lo, box.t_hi);
                const double step = (box.t_hi - box.t_lo) / static_cast<double>(n - 1) / static_cast<double>(cfg_.refine_factor);
                sweep(lo, hi, count_for(hi - lo, step), u, u, 1);
            }
            best_.monotone = true;
            return best_;
        }
        sweep(box.t_lo, box.t_hi, n, box.u_lo, box.u_hi, n);
        if (cfg_.refine) {
            const auto [tl, th] = window(best_.t, box.t_lo, box.t_hi);
            const auto [ul, uh] = window_u(best_.u, box.u_lo, box.u_hi);
            const double dt = (box.t_hi - box.t_lo) / static_cast<double>(n - 1) / static_cast<double>(cfg_.refine_factor);
            const double du = (box.u_hi - box.u_lo) / static_cast<double>(n - 1) / static_cast<double>(cfg_.refine_factor);
            sweep(tl, th, count_for(th - tl, dt), ul, uh, count_for(uh - ul, du));
        }
        return best_;
    }

private:
    static std::size_t count_for(double width, double step) {
        if (!(width > 0.0) || !(step > 0.0)) return 1;
        return static_cast<std::size_t>(std::ceil(width / step)) + 1;
    }

    std::pair<double, double> window(double centre, double lo, double hi) const {
        const double half = cfg_.refine_fraction * (hi - lo);
        return {std::max(lo, centre - half), std::min(hi, centre + half)};
    }
    std::pair<double, double> window_u(double centre, double lo, double hi) const { return window(centre, lo, hi); }

    void sweep(double t_lo, double t_hi, std::size_t nt, double u_lo, double u_hi, std::size_t nu) {
        for (std::size_t i = 0; i < nt; ++i) {
            const double t = lerp(t_lo, t_hi, i, nt);
            for (std::size_t j = 0; j < nu; ++j) {
                const double u = lerp(u_lo, u_hi, j, nu);
                visit(t, u);
            }
        }
    }

    void visit(double t, double u) {
        double v = 0.0;
        try {
            v = p_.f(t, u);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os.precision(17);
            os << to_string(which_) << ": f failed at (t, u) = (" << t << ", " << u << "): " << e.what();
            throw NumericalError(os.str());
        }
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os.precision(17);
            os << to_string(which_) << ": f is not finite at (t, u) = (" << t << ", " << u << ")";
            throw NumericalError(os.str());
        }
        ++best_.count;
        const bool better = !have_ || (want_max_ ? v > best_.value : v < best_.value);
        if (better) {
            best_.value = v;
            best_.t = t;
            best_.u = u;
            have_ = true;
        }
    }

    const Problem& p_;
    Condition which_;
    bool want_max_;
    SamplingConfig cfg_;
    Extreme best_;
    bool have_ = false;
};

ConditionReport make_report(Condition which, const Extreme& e, double bound, double margin, bool holds) {
    ConditionReport r;
    r.condition = which;
    r.bound = bound;
    r.extreme_value = e.value;
    r.margin = margin;
    r.holds = holds;
    r.worst_t = e.t;
    r.worst_u = e.u;
    r.samples_used = e.count;
    r.monotone_shortcut = e.monotone;
    return r;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

bool check_ordering(const ThresholdTriple& tt, double gamma, const std::optional<Rational>& exact_gamma) {
    if (exact_gamma && tt.exact()) {
        const Rational &a = tt.a.exact(), &b = tt.b.exact(), &c = tt.c.exact();
        const Rational d = b / *exact_gamma;
        return a > 0 && a < b && b < d && d <= c;
    }
    const double a = tt.a.value(), b = tt.b.value(), c = tt.c.value();
    const double d = b / gamma;
    const double eps = kFloatStrictTolerance;
    return a > 0.0 && a < b - eps * std::max(1.0, b) && b < d - eps * std::max(1.0, d) &&
           d <= c + eps * std::max(1.0, c);
}

ConditionReport check_D1(const Problem& p, double m, double a, const SamplingConfig& grid) {
    require_positive(a, "D1: a");
    const double T = p.T.value();
    const Extreme e = BoxSampler(p, Condition::D1, true, grid).run({0.0, T, 0.0, a});
    const double bound = m * a;
    const double margin = bound - e.value;
    return make_report(Condition::D1, e, bound, margin, margin > 0.0);
}

ConditionReport check_D2(const Problem& p, double delta, double b, double gamma, const SamplingConfig& grid) {
    require_positive(b, "D2: b");
    const double T = p.T.value();
    const Extreme e = BoxSampler(p, Condition::D2, false, grid).run({p.eta.value(), T, b, b / gamma});
    const double bound = b / delta;
    const double margin = e.value - bound;
    return make_report(Condition::D2, e, bound, margin, margin >= 0.0);
}

ConditionReport check_D3(const Problem& p, double m, double c, const SamplingConfig& grid) {
    require_positive(c, "D3: c");
    const double T = p.T.value();
    const Extreme e = BoxSampler(p, Condition::D3, true, grid).run({0.0, T, 0.0, c});
    const double bound = m * c;
    const double margin = bound - e.value;
    return make_report(Condition::D3, e, bound, margin, margin >= 0.0);
}

Certificate certify(const Problem& p, const ThresholdTriple& tt, const LWConstants& k, const SamplingConfig& grid) {
    Certificate cert;
    cert.sampling = grid;
    cert.ordering_ok =
        check_ordering(tt, k.gamma, k.exact ? std::optional<Rational>(k.exact->gamma) : std::nullopt);
    cert.d1 = check_D1(p, k.m, tt.a.value(), grid);
    cert.d2 = check_D2(p, k.delta, tt.b.value(), k.gamma, grid);
    cert.d3 = check_D3(p, k.m, tt.c.value(), grid);
    cert.verdict = cert.ordering_ok && cert.d1.holds && cert.d2.holds && cert.d3.holds;
    return cert;
}

namespace {

// Evaluated points of one threshold axis, keyed by value.
struct Axis {
    std::map<double, ConditionReport> points;

    bool any_holds() const {
        return std::any_of(points.begin(), points.end(), [](const auto& kv) { return kv.second.holds; });
    }

    // margin relative to its bound, comparable across scales
    static double relative_margin(const ConditionReport& r) {
        return r.bound != 0.0 ? r.margin / std::abs(r.bound) : r.margin;
    }

    // neighbours of the best relative-margin point (ties: lowest value)
    std::pair<double, double> zoom_window(double lower, double upper) const {
        auto best = points.begin();
        for (auto it = points.begin(); it != points.end(); ++it) {
            if (relative_margin(it->second) > relative_margin(best->second)) best = it;
        }
        const double lo = best == points.begin() ? lower : std::prev(best)->first;
        const auto next = std::next(best);
        const double hi = next == points.end() ? upper : next->first;
        return {lo, hi};
    }
};

std::vector<double> log_grid(double lo, double hi, std::size_t n, bool include_ends) {
    std::vector<double> out;
    const double llo = std::log10(lo), lhi = std::log10(hi);
    if (include_ends) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(std::pow(10.0, lerp(llo, lhi, i, n)));
        out.front() = lo;
        out.back() = hi;
    } else {
        for (std::size_t i = 1; i <= n; ++i) {
            out.push_back(std::pow(10.0, llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n + 1)));
        }
    }
    return out;
}

}  // namespace

std::optional<ThresholdTriple> search_thresholds(const Problem& p, const LWConstants& k,
                                                 const ThresholdSearchConfig& bounds) {
    if (!(bounds.lower > 0.0) || !(bounds.upper > bounds.lower)) {
        throw std::invalid_argument("search_thresholds: need 0 < lower < upper");
    }
    Axis a_axis, b_axis, c_axis;
    const SamplingConfig& grid = bounds.sampling;

    auto eval_a = [&](double a) { a_axis.points.emplace(a, check_D1(p, k.m, a, grid)); };
    auto eval_b = [&](double b) { b_axis.points.emplace(b, check_D2(p, k.delta, b, k.gamma, grid)); };
    auto eval_c = [&](double c) { c_axis.points.emplace(c, check_D3(p, k.m, c, grid)); };

    const double decades = std::log10(bounds.upper) - std::log10(bounds.lower);
    const auto coarse_n =
        static_cast<std::size_t>(std::ceil(decades * static_cast<double>(bounds.points_per_decade))) + 1;
    for (double x : log_grid(bounds.lower, bounds.upper, coarse_n, true)) {
        eval_a(x);
        eval_b(x);
        eval_c(x);
    }

    for (std::size_t level = 0; level <= bounds.max_levels; ++level) {
        for (const auto& [a, ra] : a_axis.points) {
            if (!ra.holds) continue;
            for (const auto& [b, rb] : b_axis.points) {
                if (!rb.holds || !(b > a)) continue;
                for (auto it = c_axis.points.rbegin(); it != c_axis.points.rend(); ++it) {
                    if (!it->second.holds) continue;
                    ThresholdTriple tt{Number(a), Number(b), Number(it->first)};
                    if (!check_ordering(tt, k.gamma)) continue;
                    if (certify(p, tt, k, grid).verdict) return tt;
                }
            }
        }
        if (level == bounds.max_levels) break;

        bool zoomed = false;
        const std::pair<Axis*, std::function<void(double)>> axes[] = {
            {&a_axis, eval_a}, {&b_axis, eval_b}, {&c_axis, eval_c}};
        for (const auto& [axis, eval] : axes) {
            if (axis->any_holds()) continue;
            const auto [lo, hi] = axis->zoom_window(bounds.lower, bounds.upper);
            if (!(hi > lo)) continue;
            for (double x : log_grid(lo, hi, bounds.zoom_points, false)) {
                if (!axis->points.count(x)) eval(x);
            }
            zoomed = true;
        }
        if (!zoomed) break;
    }
    return std::nullopt;
}

}  // namespace lwbvp
