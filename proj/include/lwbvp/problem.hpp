#pragma once

#include "lwbvp/function_catalog.hpp"
#include "lwbvp/number.hpp"

#include <string>
#include <vector>

namespace lwbvp {

/// Floating-point view of the boundary data (T, eta, alpha, beta).
struct ProblemParams {
    double T = 1.0;
    double eta = 0.5;
    double alpha = 1.0;
    double beta = 1.0;
};

/// u'' + f(t, u) = 0 on (0, T), u(0) = beta u(eta), u(T) = alpha int_0^eta u.
struct Problem {
    Number T{Rational(1)};
    Number eta{Rational(1, 2)};
    Number alpha{Rational(1)};
    Number beta{Rational(1)};
    FunctionSpec f = FunctionSpec::constant(Number(Rational(0)));

    ProblemParams params() const { return {T.value(), eta.value(), alpha.value(), beta.value()}; }

    /// All four boundary parameters were supplied as rationals.
    bool exact() const { return T.is_exact() && eta.is_exact() && alpha.is_exact() && beta.is_exact(); }
};

struct HypothesisReport {
    bool h2_alpha_ok = false;
    bool h2_beta_ok = false;
    bool h1_sampled_ok = false;
    std::vector<std::string> messages;

    bool h2_ok() const { return h2_alpha_ok && h2_beta_ok; }
    bool ok() const { return h2_ok() && h1_sampled_ok; }
};

inline constexpr double kFloatStrictTolerance = 1e-12;
inline constexpr int kHypothesisSamples = 64;

/// Checks the parameter bounds exactly (rational inputs) or with a 1e-12
/// margin (float inputs), and samples f >= 0, f not identically 0 on a
/// 64 x 64 grid of [0, T] x [0, u_max].
HypothesisReport validate_hypotheses(const Problem& p, double u_max = 10.0);

/// Upper bound 2T / eta^2 on alpha.
double alpha_bound(const ProblemParams& p);

/// Upper bound (2T - alpha eta^2) / (alpha eta^2 - 2 eta + 2T) on beta.
double beta_bound(const ProblemParams& p);

template <class S>
S lambda_formula(const S& T, const S& eta, const S& alpha, const S& beta) {
    return S((2 * T - alpha * eta * eta) - beta * (alpha * eta * eta - 2 * eta + 2 * T));
}

/// Lambda = (2T - alpha eta^2) - beta (alpha eta^2 - 2 eta + 2T).
double lambda_constant(const ProblemParams& p);

/// Exact when p.exact(), float otherwise.
Number lambda_constant(const Problem& p);

}  // namespace lwbvp
