#include "lwbvp/linear_solver.hpp"

#include "lwbvp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lwbvp {

namespace {

void require_nonsingular(double value, double threshold, const char* what) {
    if (!(std::abs(value) >= threshold)) {
        std::ostringstream os;
        os.precision(17);
        os << what << " = " << value << " is numerically zero; the linear problem has no unique solution";
        throw SingularConfigurationError(os.str());
    }
}

}  // namespace

double closed_form_denominator(const ProblemParams& p) {
    const double a = p.alpha * p.eta * p.eta;
    return (a - 2.0 * p.T) - p.beta * (2.0 * p.eta - a - 2.0 * p.T);
}

SolutionCurve solve_linear(const ProblemParams& p, const SolutionCurve& y, const Tolerances& tol) {
    const double lambda = lambda_constant(p);
    require_nonsingular(lambda, tol.singular, "Lambda");
    const double den = -lambda;

    const std::size_t n = y.size();
    const double h = y.spacing();
    const double T = y.t1();
    const double eta = p.eta;

    std::vector<double> ty(n), g1(n), g2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = y.node(i);
        ty[i] = t * y[i];
        g1[i] = (eta - t) * y[i];
        g2[i] = (eta - t) * (eta - t) * y[i];
    }
    const auto Y = quadrature::cumulative(y.values(), h);
    const auto TY = quadrature::cumulative(ty, h);

    const double i1 = quadrature::integrate_to(g1, h, eta);  // int_0^eta (eta - s) y
    const double i2 = quadrature::integrate_to(g2, h, eta);  // int_0^eta (eta - s)^2 y
    const double i3 = T * Y.back() - TY.back();              // int_0^T (T - s) y

    const double a = p.alpha, b = p.beta;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = y.node(i);
        const double c1 = (b * (2.0 * T - a * eta * eta) - 2.0 * b * (1.0 - a * eta) * t) / den;
        const double c2 = (a * b * eta - a * (b - 1.0) * t) / den;
        const double c3 = (2.0 * (b - 1.0) * t - 2.0 * b * eta) / den;
        const double tail = t * Y[i] - TY[i];  // int_0^t (t - s) y
        u[i] = c1 * i1 + c2 * i2 + c3 * i3 - tail;
    }
    return SolutionCurve(T, std::move(u));
}

SolutionCurve solve_linear_oracle(const ProblemParams& p, const SolutionCurve& y, const Tolerances& tol) {
    const std::size_t n = y.size();
    const double h = y.spacing();
    const double T = y.t1();
    const double eta = p.eta;

    // w(t) = int_0^t int_0^r y, so u = c0 + c1 t - w
    const auto Y = quadrature::cumulative(y.values(), h);
    const auto W = quadrature::cumulative(Y, h);
    const double w_eta = quadrature::interpolate(W, h, eta);
    const double w_int = quadrature::integrate_to(W, h, eta);
    const double w_T = W.back();

    // u(0) - beta u(eta) = 0 ;  u(T) - alpha int_0^eta u = 0
    const double m00 = 1.0 - p.beta, m01 = -p.beta * eta;
    const double m10 = 1.0 - p.alpha * eta, m11 = T - 0.5 * p.alpha * eta * eta;
    const double r0 = -p.beta * w_eta;
    const double r1 = w_T - p.alpha * w_int;
    const double det = m00 * m11 - m01 * m10;
    require_nonsingular(det, tol.singular, "boundary system determinant");
    const double c0 = (r0 * m11 - m01 * r1) / det;
    const double c1 = (m00 * r1 - m10 * r0) / det;

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = c0 + c1 * y.node(i) - W[i];
    return SolutionCurve(T, std::move(u));
}

ResidualReport residuals(const ProblemParams& p, const SolutionCurve& u, const SolutionCurve& y) {
    if (u.size() != y.size()) throw std::invalid_argument("residuals: u and y live on different grids");
    ResidualReport r;
    const double h = u.spacing();
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2;
        r.ode_residual_max = std::max(r.ode_residual_max, std::abs(d2 + y[i]));
    }
    r.bc0_residual = std::abs(u[0] - p.beta * u.at(p.eta));
    r.bcT_residual = std::abs(u[u.size() - 1] - p.alpha * quadrature::integrate_to(u.values(), h, p.eta));
    return r;
}

NonnegativityCheck check_nonnegativity(const SolutionCurve& u, const Tolerances& tol) {
    NonnegativityCheck c;
    const auto vals = u.values();
    const auto it = std::min_element(vals.begin(), vals.end());
    c.worst_node = static_cast<std::size_t>(std::distance(vals.begin(), it));
    c.worst_value = *it;
    c.ok = c.worst_value >= -tol.nonnegativity;
    return c;
}

double tail_min(const SolutionCurve& u, double eta) {
    const double cutoff = eta - 1e-12 * u.t1();
    double m = u[u.size() - 1];
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u.node(i) >= cutoff) m = std::min(m, u[i]);
    }
    return m;
}

GammaBoundCheck check_gamma_bound(const SolutionCurve& u, double gamma, double eta, const Tolerances& tol) {
    GammaBoundCheck c;
    c.min_tail = tail_min(u, eta);
    c.norm = u.sup_norm();
    c.margin = c.min_tail - gamma * c.norm;
    c.ok = c.margin >= -tol.gamma_slack;
    return c;
}

}  // namespace lwbvp
