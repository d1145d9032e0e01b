#pragma once

#include "lwbvp/curve.hpp"
#include "lwbvp/problem.hpp"
#include "lwbvp/tolerances.hpp"

#include <cstddef>

namespace lwbvp {

inline constexpr std::size_t kDefaultGridSize = 2049;

struct ResidualReport {
    double ode_residual_max = 0.0;  // max |u'' + y| by second differences at interior nodes
    double bc0_residual = 0.0;      // |u(0) - beta u(eta)|
    double bcT_residual = 0.0;      // |u(T) - alpha int_0^eta u|

    double bc_max() const { return bc0_residual > bcT_residual ? bc0_residual : bcT_residual; }
};

/// The denominator as it appears in the closed-form solution,
/// (alpha eta^2 - 2T) - beta (2 eta - alpha eta^2 - 2T). Equals -Lambda.
double closed_form_denominator(const ProblemParams& p);

/// Unique solution of u'' + y = 0 with the three-point integral boundary
/// conditions, evaluated from the four-integral closed form on y's grid.
/// Throws SingularConfigurationError when |Lambda| < tol.singular.
SolutionCurve solve_linear(const ProblemParams& p, const SolutionCurve& y,
                           const Tolerances& tol = kDefaultTolerances);

/// Independent construction: integrate u'' = -y twice from unknown
/// (u(0), u'(0)) and fix them from the two boundary conditions.
SolutionCurve solve_linear_oracle(const ProblemParams& p, const SolutionCurve& y,
                                  const Tolerances& tol = kDefaultTolerances);

ResidualReport residuals(const ProblemParams& p, const SolutionCurve& u, const SolutionCurve& y);

struct NonnegativityCheck {
    bool ok = true;
    std::size_t worst_node = 0;
    double worst_value = 0.0;
};

NonnegativityCheck check_nonnegativity(const SolutionCurve& u, const Tolerances& tol = kDefaultTolerances);

struct GammaBoundCheck {
    bool ok = false;
    double margin = 0.0;    // min over [eta, T] minus gamma * ||u||
    double min_tail = 0.0;  // min over grid nodes in [eta, T]
    double norm = 0.0;      // sup norm over [0, T]
};

/// min_{[eta, T]} u >= gamma ||u|| - slack, over grid nodes.
GammaBoundCheck check_gamma_bound(const SolutionCurve& u, double gamma, double eta,
                                  const Tolerances& tol = kDefaultTolerances);

/// Minimum over the grid nodes lying in [eta, T].
double tail_min(const SolutionCurve& u, double eta);

}  // namespace lwbvp
