#include "lwbvp/function_catalog.hpp"

#include "lwbvp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lwbvp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::optional<Rational> exact_of(const Number& n) { return n.maybe_exact(); }

bool all_exact(const std::vector<Number>& v) {
    return std::all_of(v.begin(), v.end(), [](const Number& n) { return n.is_exact(); });
}

double horner(const std::vector<Number>& coeffs, double x) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + it->value();
    return acc;
}

std::optional<Rational> horner_exact(const std::vector<Number>& coeffs, const Rational& x) {
    if (!all_exact(coeffs)) return std::nullopt;
    Rational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + it->exact();
    return acc;
}

double branch_value(const LinearFractional& b, double u) {
    return (b.num0.value() + b.num1.value() * u) / (b.den0.value() + b.den1.value() * u);
}

std::optional<Rational> branch_exact(const LinearFractional& b, const Rational& u) {
    if (!b.num0.is_exact() || !b.num1.is_exact() || !b.den0.is_exact() || !b.den1.is_exact()) {
        return std::nullopt;
    }
    return Rational((b.num0.exact() + b.num1.exact() * u) / (b.den0.exact() + b.den1.exact() * u));
}

double guard_u(double u) {
    if (!(u >= -kNegativeUTolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "f evaluated at negative u = " << u;
        throw DomainError(os.str());
    }
    return u < 0.0 ? 0.0 : u;
}

Json numbers_to_json(const std::vector<Number>& v) {
    Json arr = Json::array();
    for (const auto& n : v) arr.push_back(number_to_json(n));
    return arr;
}

std::vector<Number> numbers_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ConfigError(what + ": expected an array");
    std::vector<Number> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number_from_json(j[i], what + "[" + std::to_string(i) + "]"));
    }
    return out;
}

void require_ascending(const std::vector<Number>& xs, const std::string& what) {
    if (xs.empty()) throw DomainError(what + ": empty");
    if (xs.front().value() != 0.0) throw DomainError(what + ": first entry must be 0");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i].value() > xs[i - 1].value())) {
            throw DomainError(what + ": entries must be strictly ascending (index " + std::to_string(i) + ")");
        }
    }
}

}  // namespace

std::string to_string(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::rational_sigmoid: return "autonomous-rational-sigmoid";
        case FunctionKind::separable_exponential_piecewise: return "separable-exponential-piecewise";
        case FunctionKind::constant: return "constant";
        case FunctionKind::polynomial: return "polynomial";
        case FunctionKind::linear_table: return "piecewise-linear-table";
        case FunctionKind::product: return "product";
    }
    return "unknown";
}

double TimeFactor::operator()(double t) const {
    if (kind == Kind::exponential) return std::exp(-rate.value() * t);
    return horner(coeffs, t);
}

std::optional<Rational> TimeFactor::exact(const Rational& t) const {
    if (kind == Kind::polynomial) return horner_exact(coeffs, t);
    if (!rate.is_exact()) return std::nullopt;
    if (rate.exact() == 0 || t == 0) return Rational(1);
    return std::nullopt;
}

FunctionSpec FunctionSpec::rational_sigmoid(Number scale) { return FunctionSpec(Sigmoid{std::move(scale)}); }

FunctionSpec FunctionSpec::constant(Number value) { return FunctionSpec(Constant{std::move(value)}); }

FunctionSpec FunctionSpec::polynomial(std::vector<Number> coeffs) {
    if (coeffs.empty()) throw DomainError("polynomial: no coefficients");
    return FunctionSpec(Polynomial{std::move(coeffs)});
}

FunctionSpec FunctionSpec::linear_table(std::vector<Number> u, std::vector<Number> v) {
    if (u.size() != v.size() || u.size() < 2) {
        throw DomainError("piecewise-linear-table: need at least two (u, v) points");
    }
    require_ascending(u, "piecewise-linear-table u");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].value() < 0.0) {
            throw DomainError("piecewise-linear-table: negative value at u = " + u[i].to_string());
        }
    }
    return FunctionSpec(Table{std::move(u), std::move(v)});
}

FunctionSpec FunctionSpec::exponential_piecewise(Number rate, std::vector<Number> breakpoints,
                                                 std::vector<LinearFractional> branches) {
    require_ascending(breakpoints, "breakpoints");
    if (branches.size() != breakpoints.size()) {
        throw DomainError("piecewise: need exactly one branch per breakpoint");
    }
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const auto& b = branches[i];
        const double lo = breakpoints[i].value();
        const bool last = i + 1 == branches.size();
        const double den_lo = b.den0.value() + b.den1.value() * lo;
        const bool den_ok = last ? (den_lo > 0.0 && b.den1.value() >= 0.0)
                                 : (den_lo > 0.0 && b.den0.value() + b.den1.value() * breakpoints[i + 1].value() > 0.0);
        if (!den_ok) {
            throw DomainError("piecewise: branch " + std::to_string(i) + " denominator is not positive on its interval");
        }
    }
    FunctionSpec spec(Piecewise{std::move(rate), std::move(breakpoints), std::move(branches)});
    for (const auto& check : spec.breakpoint_checks()) {
        if (!check.continuous) {
            std::ostringstream os;
            os.precision(17);
            os << "piecewise: discontinuity at u = " << check.u << " (left " << check.left << ", right "
               << check.right << ")";
            throw DomainError(os.str());
        }
    }
    return spec;
}

FunctionSpec FunctionSpec::product(TimeFactor time, FunctionSpec u_factor) {
    if (u_factor.depends_on_t()) {
        throw DomainError("product: the u factor must not depend on t");
    }
    return FunctionSpec(Product{std::move(time), std::make_shared<const FunctionSpec>(std::move(u_factor))});
}

FunctionKind FunctionSpec::kind() const {
    return std::visit(Overloaded{
                          [](const Sigmoid&) { return FunctionKind::rational_sigmoid; },
                          [](const Constant&) { return FunctionKind::constant; },
                          [](const Polynomial&) { return FunctionKind::polynomial; },
                          [](const Table&) { return FunctionKind::linear_table; },
                          [](const Piecewise&) { return FunctionKind::separable_exponential_piecewise; },
                          [](const Product&) { return FunctionKind::product; },
                      },
                      body_);
}

FunctionSpec FunctionSpec::with_monotone_hint(bool monotone) const {
    FunctionSpec copy = *this;
    copy.monotone_ = monotone;
    return copy;
}

bool FunctionSpec::depends_on_t() const {
    if (const auto* p = std::get_if<Piecewise>(&body_)) return p->rate.value() != 0.0;
    return std::holds_alternative<Product>(body_);
}

double FunctionSpec::eval_u(const Piecewise& p, double u) const {
    const auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), u,
                                     [](double x, const Number& bp) { return x < bp.value(); });
    const auto idx = static_cast<std::size_t>(std::distance(p.breakpoints.begin(), it)) - 1;
    return branch_value(p.branches[idx], u);
}

double FunctionSpec::operator()(double t, double u) const {
    u = guard_u(u);
    return std::visit(Overloaded{
                          [&](const Sigmoid& s) { return s.scale.value() * u * u / (u * u + 1.0); },
                          [&](const Constant& c) { return c.value.value(); },
                          [&](const Polynomial& p) { return horner(p.coeffs, u); },
                          [&](const Table& tab) {
                              const auto& xs = tab.u;
                              if (u >= xs.back().value()) return tab.v.back().value();
                              const auto it = std::upper_bound(xs.begin(), xs.end(), u,
                                                               [](double x, const Number& n) { return x < n.value(); });
                              const auto hi = static_cast<std::size_t>(std::distance(xs.begin(), it));
                              const double x0 = xs[hi - 1].value(), x1 = xs[hi].value();
                              const double w = (u - x0) / (x1 - x0);
                              return (1.0 - w) * tab.v[hi - 1].value() + w * tab.v[hi].value();
                          },
                          [&](const Piecewise& p) {
                              const double time = p.rate.value() == 0.0 ? 1.0 : std::exp(-p.rate.value() * t);
                              return time * eval_u(p, u);
                          },
                          [&](const Product& p) { return p.time(t) * (*p.u_factor)(t, u); },
                      },
                      body_);
}

std::optional<Rational> FunctionSpec::eval_exact(const Rational& t, const Rational& u) const {
    if (u < 0) {
        throw DomainError("f evaluated at negative u = " + to_fraction_string(u));
    }
    return std::visit(
        Overloaded{
            [&](const Sigmoid& s) -> std::optional<Rational> {
                if (!s.scale.is_exact()) return std::nullopt;
                return Rational(s.scale.exact() * u * u / (u * u + 1));
            },
            [&](const Constant& c) { return exact_of(c.value); },
            [&](const Polynomial& p) { return horner_exact(p.coeffs, u); },
            [&](const Table& tab) -> std::optional<Rational> {
                if (!all_exact(tab.u) || !all_exact(tab.v)) return std::nullopt;
                if (u >= tab.u.back().exact()) return tab.v.back().exact();
                std::size_t hi = 1;
                while (tab.u[hi].exact() <= u) ++hi;
                const Rational& x0 = tab.u[hi - 1].exact();
                const Rational& x1 = tab.u[hi].exact();
                const Rational w = (u - x0) / (x1 - x0);
                return Rational((1 - w) * tab.v[hi - 1].exact() + w * tab.v[hi].exact());
            },
            [&](const Piecewise& p) -> std::optional<Rational> {
                if (!all_exact(p.breakpoints) || !p.rate.is_exact()) return std::nullopt;
                if (p.rate.exact() != 0 && t != 0) return std::nullopt;
                std::size_t idx = 0;
                while (idx + 1 < p.breakpoints.size() && p.breakpoints[idx + 1].exact() <= u) ++idx;
                return branch_exact(p.branches[idx], u);
            },
            [&](const Product& p) -> std::optional<Rational> {
                auto g = p.time.exact(t);
                auto h = p.u_factor->eval_exact(t, u);
                if (!g || !h) return std::nullopt;
                return Rational(*g * *h);
            },
        },
        body_);
}

std::vector<BreakpointCheck> FunctionSpec::breakpoint_checks() const {
    std::vector<BreakpointCheck> out;
    if (const auto* prod = std::get_if<Product>(&body_)) {
        return prod->u_factor->breakpoint_checks();
    }
    const auto* p = std::get_if<Piecewise>(&body_);
    if (p == nullptr) return out;
    for (std::size_t i = 1; i < p->breakpoints.size(); ++i) {
        BreakpointCheck c;
        c.u = p->breakpoints[i].value();
        c.left = branch_value(p->branches[i - 1], c.u);
        c.right = branch_value(p->branches[i], c.u);
        c.gap = std::abs(c.left - c.right);
        if (p->breakpoints[i].is_exact()) {
            const auto l = branch_exact(p->branches[i - 1], p->breakpoints[i].exact());
            const auto r = branch_exact(p->branches[i], p->breakpoints[i].exact());
            if (l && r) c.exact_gap = abs(Rational(*l - *r));
        }
        c.continuous = c.gap <= kContinuityTolerance * std::max(1.0, std::abs(c.left));
        out.push_back(c);
    }
    return out;
}

void FunctionSpec::check_nonnegative(const SampleDomain& domain) const {
    const int n = std::max(domain.samples, 2);
    for (int i = 0; i < n; ++i) {
        const double t = domain.T * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double u = domain.u_max * j / (n - 1);
            const double v = (*this)(t, u);
            if (!(v >= 0.0)) {
                std::ostringstream os;
                os.precision(17);
                os << to_string(kind()) << ": f(" << t << ", " << u << ") = " << v << " is negative";
                throw DomainError(os.str());
            }
        }
    }
}

bool FunctionSpec::vanishes_on(const SampleDomain& domain) const {
    const int n = std::max(domain.samples, 2);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if ((*this)(domain.T * i / (n - 1), domain.u_max * j / (n - 1)) != 0.0) return false;
        }
    }
    return true;
}

Json FunctionSpec::to_json() const {
    Json j;
    j["kind"] = to_string(kind());
    std::visit(Overloaded{
                   [&](const Sigmoid& s) { j["params"] = Json::array({number_to_json(s.scale)}); },
                   [&](const Constant& c) { j["params"] = Json::array({number_to_json(c.value)}); },
                   [&](const Polynomial& p) { j["params"] = numbers_to_json(p.coeffs); },
                   [&](const Table& tab) {
                       Json pts = Json::array();
                       for (std::size_t i = 0; i < tab.u.size(); ++i) {
                           pts.push_back(Json::array({number_to_json(tab.u[i]), number_to_json(tab.v[i])}));
                       }
                       j["points"] = pts;
                   },
                   [&](const Piecewise& p) {
                       j["rate"] = number_to_json(p.rate);
                       j["breakpoints"] = numbers_to_json(p.breakpoints);
                       Json br = Json::array();
                       for (const auto& b : p.branches) {
                           br.push_back(Json::array({number_to_json(b.num0), number_to_json(b.num1),
                                                     number_to_json(b.den0), number_to_json(b.den1)}));
                       }
                       j["branches"] = br;
                   },
                   [&](const Product& p) {
                       Json time;
                       if (p.time.kind == TimeFactor::Kind::exponential) {
                           time["kind"] = "exponential";
                           time["rate"] = number_to_json(p.time.rate);
                       } else {
                           time["kind"] = "polynomial";
                           time["params"] = numbers_to_json(p.time.coeffs);
                       }
                       j["time"] = time;
                       j["u"] = p.u_factor->to_json();
                   },
               },
               body_);
    if (monotone_) j["monotone_in_u"] = true;
    return j;
}

namespace {

FunctionSpec parse_body(const Json& doc, const std::string& where) {
    if (!doc.is_object()) throw ConfigError(where + ": expected an object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) throw ConfigError(where + ": missing string 'kind'");
    const std::string kind = doc["kind"].get<std::string>();
    auto params = [&]() { return numbers_from_json(doc.value("params", Json::array()), where + ".params"); };
    auto single = [&]() {
        auto p = params();
        if (p.size() != 1) throw ConfigError(where + ": '" + kind + "' takes exactly one parameter");
        return p.front();
    };

    FunctionSpec spec = [&]() {
        if (kind == "autonomous-rational-sigmoid") return FunctionSpec::rational_sigmoid(single());
        if (kind == "constant") return FunctionSpec::constant(single());
        if (kind == "polynomial") return FunctionSpec::polynomial(params());
        if (kind == "piecewise-linear-table") {
            const Json& pts = doc.value("points", Json());
            if (!pts.is_array()) throw ConfigError(where + ".points: expected an array of [u, v] pairs");
            std::vector<Number> us, vs;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const std::string at = where + ".points[" + std::to_string(i) + "]";
                if (!pts[i].is_array() || pts[i].size() != 2) throw ConfigError(at + ": expected [u, v]");
                us.push_back(number_from_json(pts[i][0], at));
                vs.push_back(number_from_json(pts[i][1], at));
            }
            return FunctionSpec::linear_table(std::move(us), std::move(vs));
        }
        if (kind == "separable-exponential-piecewise") {
            const Number rate = doc.contains("rate") ? number_from_json(doc["rate"], where + ".rate") : Number(Rational(1));
            auto bps = numbers_from_json(doc.value("breakpoints", Json()), where + ".breakpoints");
            const Json& brs = doc.value("branches", Json());
            if (!brs.is_array()) throw ConfigError(where + ".branches: expected an array");
            std::vector<LinearFractional> branches;
            for (std::size_t i = 0; i < brs.size(); ++i) {
                auto c = numbers_from_json(brs[i], where + ".branches[" + std::to_string(i) + "]");
                if (c.size() != 2 && c.size() != 4) {
                    throw ConfigError(where + ".branches[" + std::to_string(i) + "]: expected [num0, num1] or [num0, num1, den0, den1]");
                }
                LinearFractional b{c[0], c[1]};
                if (c.size() == 4) {
                    b.den0 = c[2];
                    b.den1 = c[3];
                }
                branches.push_back(b);
            }
            return FunctionSpec::exponential_piecewise(rate, std::move(bps), std::move(branches));
        }
        if (kind == "product") {
            if (!doc.contains("time") || !doc.contains("u")) throw ConfigError(where + ": product needs 'time' and 'u'");
            const Json& tj = doc["time"];
            TimeFactor time;
            const std::string tk = tj.value("kind", std::string("exponential"));
            if (tk == "exponential") {
                time.kind = TimeFactor::Kind::exponential;
                time.rate = number_from_json(tj.value("rate", Json(1)), where + ".time.rate");
            } else if (tk == "polynomial") {
                time.kind = TimeFactor::Kind::polynomial;
                time.coeffs = numbers_from_json(tj.value("params", Json::array()), where + ".time.params");
                if (time.coeffs.empty()) throw ConfigError(where + ".time.params: empty");
            } else {
                throw ConfigError(where + ".time: unknown time factor kind '" + tk + "'");
            }
            return FunctionSpec::product(std::move(time), parse_body(doc["u"], where + ".u"));
        }
        throw ConfigError(where + ": unknown function kind '" + kind + "'");
    }();

    if (doc.contains("monotone_in_u")) {
        if (!doc["monotone_in_u"].is_boolean()) throw ConfigError(where + ".monotone_in_u: expected a boolean");
        spec = spec.with_monotone_hint(doc["monotone_in_u"].get<bool>());
    }
    return spec;
}

}  // namespace

FunctionSpec parse_function_spec(const Json& document, const SampleDomain& domain) {
    FunctionSpec spec = parse_body(document, "f");
    spec.check_nonnegative(domain);
    return spec;
}

}  // namespace lwbvp
