#pragma once

namespace lwbvp {

/// Every numerical acceptance threshold used by the solvers and checks.
struct Tolerances {
    double nonnegativity = 1e-10;   // check_nonnegativity / cone membership floor
    double gamma_slack = 1e-10;     // check_gamma_bound
    double concavity = 1e-8;        // cone membership: second differences <= concavity / h^2
    double singular = 1e-14;        // |Lambda| below this is a singular configuration
    double bc_residual = 1e-8;      // boundary-condition residuals of a verified solution
    // ODE residual of a verified solution is at most ode_residual_constant * h^2.
    // Measured on both example problems; see tests/test_linear_solver.cpp.
    double ode_residual_constant = 2.0e4;

    double ode_residual(double h) const { return ode_residual_constant * h * h; }
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace lwbvp
