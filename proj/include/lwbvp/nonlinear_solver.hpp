#pragma once

#include "lwbvp/certifier.hpp"
#include "lwbvp/curve.hpp"
#include "lwbvp/linear_solver.hpp"
#include "lwbvp/problem.hpp"
#include "lwbvp/tolerances.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lwbvp {

struct SolverConfig {
    std::size_t grid_n = kDefaultGridSize;
    double picard_tol = 1e-10;
    std::size_t max_iter = 500;
    double divergence_norm = 1e6;
    double dedup_tol = 1e-4;          // relative: merge when distance < dedup_tol * max(1, ||u||)
    double start_fraction = 0.1;      // Picard start epsilon * a
    std::size_t shooting_starts = 16; // per axis of the (u0, s0) start grid
    double newton_tol = 1e-11;        // relative to max(1, ||u||)
    std::size_t newton_max_iter = 100;
    int max_halvings = 20;
    double fd_step = 1e-7;            // relative forward-difference step for the Jacobian
    double blowup = 1e9;
    double cross_tol = 1e-6;          // agreement required between the two routes
    // start ranges when no thresholds are available
    double u0_lower = 1e-5;
    double u0_upper = 100.0;
    double s0_upper = 100.0;
    unsigned threads = 0;             // 0 = hardware concurrency
    Tolerances tol;
};

struct FixedPointResult {
    SolutionCurve curve;
    bool converged = false;
    bool diverged = false;
    std::size_t iterations = 0;
    double final_update_norm = 0.0;
    ResidualReport residuals;
    std::size_t clamp_events = 0;
    std::string diagnostic;
};

enum class SolutionLabel { small, large_min, middle, unclassified };
std::string to_string(SolutionLabel label);

struct SolutionClass {
    double norm = 0.0;      // max over [0, T]
    double min_full = 0.0;  // psi(u): min over [0, T]
    double min_tail = 0.0;  // min over [eta, T]
    SolutionLabel label = SolutionLabel::unclassified;
};

/// Minimum of the nodal values.
double psi(const SolutionCurve& u);

struct ConeReport {
    bool ok = false;
    double min_value = 0.0;
    double max_second_difference = 0.0;  // scaled by 1/h^2
    std::size_t negative_nodes = 0;
    std::size_t convex_nodes = 0;
};

/// Nonnegative (>= -1e-10) and discretely concave (second differences <= 1e-8 / h^2).
ConeReport cone_membership(const SolutionCurve& u, const Tolerances& tol = kDefaultTolerances);

/// y_i = f(t_i, max(u_i, 0)); counts clamped nodes into `clamp_events`.
SolutionCurve compose_f(const Problem& p, const SolutionCurve& u, std::size_t* clamp_events = nullptr);

/// (A u)(t): the closed-form linear solve applied to y = f(., u(.)).
/// Throws DomainError when u < -1e-10 somewhere.
SolutionCurve apply_operator_A(const Problem& p, const SolutionCurve& u, const Tolerances& tol = kDefaultTolerances);

/// u_{k+1} = A u_k until the sup-norm update is at most `tol`.
FixedPointResult picard_iterate(const Problem& p, const SolutionCurve& u0, double tol, std::size_t max_iter,
                                const SolverConfig& cfg = {});

/// Verified residuals of a candidate solution against the nonlinear problem.
ResidualReport nonlinear_residuals(const Problem& p, const SolutionCurve& u);
bool residuals_pass(const ResidualReport& r, double h, const Tolerances& tol = kDefaultTolerances);

struct ShootingResult {
    double r1 = 0.0;  // u0 - beta u(eta)
    double r2 = 0.0;  // u(T) - alpha int_0^eta u
    SolutionCurve curve;
    bool blew_up = false;
    std::size_t clamp_events = 0;
    std::string diagnostic;
};

/// RK4 on the grid for u'' = -f(t, max(u, 0)), u(0) = u0, u'(0) = s0.
ShootingResult shooting_residual(const Problem& p, double u0, double s0, std::size_t n = kDefaultGridSize,
                                 double blowup = 1e9);

using Jacobian2 = std::array<std::array<double, 2>, 2>;

/// d(r1, r2)/d(u0, s0) by forward (or central) differences with absolute `step`.
Jacobian2 shooting_jacobian(const Problem& p, double u0, double s0, std::size_t n, double step, bool central = false);

struct NewtonResult {
    bool converged = false;
    double u0 = 0.0;
    double s0 = 0.0;
    std::size_t iterations = 0;
    double residual_norm = 0.0;
    double last_step = 0.0;
    ShootingResult shot;
};

/// Damped Newton on the shooting residual; rejects steps that do not reduce |r|.
NewtonResult newton_shoot(const Problem& p, double u0, double s0, const SolverConfig& cfg = {});

SolutionClass classify_solution(const SolutionCurve& u, const ThresholdTriple& tt, double eta);

enum class Route { picard, shooting };
std::string to_string(Route r);

struct FoundSolution {
    FixedPointResult result;
    SolutionClass cls;
    Route source = Route::picard;     // route of the kept representative
    bool found_by_picard = false;
    bool found_by_shooting = false;
    bool cross_validated = false;     // the other route reproduces it within cross_tol
    double cross_distance = 0.0;
    ConeReport cone;
};

struct SolutionSet {
    std::vector<FoundSolution> solutions;  // sorted by (norm, psi)
    std::size_t picard_starts = 0;
    std::size_t shooting_starts = 0;
    std::size_t candidates = 0;  // converged runs before dedup
    std::size_t rejected = 0;    // groups failing residual or cone verification
};

/// Multi-start search: Picard from constant starts and damped Newton
/// shooting from a log-spaced (u0, s0) grid, deduplicated, verified,
/// cross-checked between routes and classified against `thresholds`.
SolutionSet find_solutions(const Problem& p, const std::optional<ThresholdTriple>& thresholds,
                           const SolverConfig& cfg = {});

}  // namespace lwbvp
