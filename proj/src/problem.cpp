#include "lwbvp/problem.hpp"

#include "lwbvp/errors.hpp"

#include <cmath>
#include <sstream>

namespace lwbvp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// lhs < rhs, exactly when both are exact, else with the float margin.
bool strictly_less(const std::optional<Rational>& lhs_exact, double lhs, const std::optional<Rational>& rhs_exact,
                   double rhs) {
    if (lhs_exact && rhs_exact) return *lhs_exact < *rhs_exact;
    return lhs < rhs - kFloatStrictTolerance * std::max(1.0, std::abs(rhs));
}

}  // namespace

double alpha_bound(const ProblemParams& p) { return 2.0 * p.T / (p.eta * p.eta); }

double beta_bound(const ProblemParams& p) {
    const double a = p.alpha * p.eta * p.eta;
    return (2.0 * p.T - a) / (a - 2.0 * p.eta + 2.0 * p.T);
}

HypothesisReport validate_hypotheses(const Problem& p, double u_max) {
    HypothesisReport r;
    const ProblemParams q = p.params();
    const bool exact = p.exact();
    const Rational zero(0);

    for (double v : {q.T, q.eta, q.alpha, q.beta}) {
        if (!std::isfinite(v)) {
            r.messages.push_back("non-finite boundary parameter");
            return r;
        }
    }

    bool domain_ok = true;
    if (!strictly_less(exact ? std::optional(zero) : std::nullopt, 0.0, p.T.maybe_exact(), q.T)) {
        r.messages.push_back("T must be positive (T = " + p.T.to_string() + ")");
        domain_ok = false;
    }
    if (!strictly_less(exact ? std::optional(zero) : std::nullopt, 0.0, p.eta.maybe_exact(), q.eta) ||
        !strictly_less(p.eta.maybe_exact(), q.eta, p.T.maybe_exact(), q.T)) {
        r.messages.push_back("eta must lie in (0, T) (eta = " + p.eta.to_string() + ")");
        domain_ok = false;
    }

    std::optional<Rational> a_bound_exact;
    std::optional<Rational> b_num_exact, b_den_exact;
    if (exact && domain_ok) {
        const Rational &T = p.T.exact(), &eta = p.eta.exact(), &alpha = p.alpha.exact();
        a_bound_exact = Rational(2 * T / (eta * eta));
        b_num_exact = Rational(2 * T - alpha * eta * eta);
        b_den_exact = Rational(alpha * eta * eta - 2 * eta + 2 * T);
    }

    r.h2_alpha_ok = domain_ok &&
                    strictly_less(exact ? std::optional(zero) : std::nullopt, 0.0, p.alpha.maybe_exact(), q.alpha) &&
                    strictly_less(p.alpha.maybe_exact(), q.alpha, a_bound_exact, alpha_bound(q));
    if (domain_ok && !r.h2_alpha_ok) {
        r.messages.push_back("H2: need 0 < alpha < 2T/eta^2 = " + fmt(alpha_bound(q)) + " (alpha = " +
                             p.alpha.to_string() + ")");
    }

    const double den = q.alpha * q.eta * q.eta - 2.0 * q.eta + 2.0 * q.T;
    const bool den_positive = b_den_exact ? *b_den_exact > 0 : den > 0.0;
    if (domain_ok && !den_positive) {
        r.messages.push_back("H2: alpha eta^2 - 2 eta + 2T must be positive (got " + fmt(den) + ")");
    }
    std::optional<Rational> b_bound_exact;
    if (b_num_exact && b_den_exact && *b_den_exact != 0) b_bound_exact = Rational(*b_num_exact / *b_den_exact);
    r.h2_beta_ok = domain_ok && r.h2_alpha_ok && den_positive &&
                   strictly_less(exact ? std::optional(zero) : std::nullopt, 0.0, p.beta.maybe_exact(), q.beta) &&
                   strictly_less(p.beta.maybe_exact(), q.beta, b_bound_exact, beta_bound(q));
    if (domain_ok && r.h2_alpha_ok && den_positive && !r.h2_beta_ok) {
        r.messages.push_back("H2: need 0 < beta < " + fmt(beta_bound(q)) + " (beta = " + p.beta.to_string() + ")");
    }

    // H1 surrogate: f >= 0 on every node, f > 0 on some node.
    r.h1_sampled_ok = true;
    bool any_positive = false;
    const double T = domain_ok ? q.T : 1.0;
    for (int i = 0; i < kHypothesisSamples && r.h1_sampled_ok; ++i) {
        const double t = T * i / (kHypothesisSamples - 1);
        for (int j = 0; j < kHypothesisSamples; ++j) {
            const double u = u_max * j / (kHypothesisSamples - 1);
            double v = 0.0;
            try {
                v = p.f(t, u);
            } catch (const std::exception& e) {
                r.h1_sampled_ok = false;
                r.messages.push_back("H1: f failed at (t, u) = (" + fmt(t) + ", " + fmt(u) + "): " + e.what());
                break;
            }
            if (!(v >= 0.0)) {
                r.h1_sampled_ok = false;
                r.messages.push_back("H1: f(" + fmt(t) + ", " + fmt(u) + ") = " + fmt(v) + " is negative");
                break;
            }
            any_positive = any_positive || v > 0.0;
        }
    }
    if (r.h1_sampled_ok && !any_positive) {
        r.h1_sampled_ok = false;
        r.messages.push_back("H1: f vanishes at every sample of [0, T] x [0, " + fmt(u_max) + "]");
    }
    return r;
}

double lambda_constant(const ProblemParams& p) { return lambda_formula(p.T, p.eta, p.alpha, p.beta); }

Number lambda_constant(const Problem& p) {
    if (p.exact()) {
        return Number(lambda_formula(p.T.exact(), p.eta.exact(), p.alpha.exact(), p.beta.exact()));
    }
    return Number(lambda_constant(p.params()));
}

}  // namespace lwbvp
