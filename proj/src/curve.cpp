#include "lwbvp/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace lwbvp {

SolutionCurve::SolutionCurve(double T, std::vector<double> values) : T_(T), values_(std::move(values)) {
    if (!(T_ > 0.0)) throw std::invalid_argument("SolutionCurve: T must be positive");
    if (values_.size() < 2) throw std::invalid_argument("SolutionCurve: need at least two nodes");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("SolutionCurve: non-finite sample");
    }
}

SolutionCurve SolutionCurve::constant(double T, std::size_t n, double value) {
    return SolutionCurve(T, std::vector<double>(n, value));
}

double SolutionCurve::at(double t) const { return quadrature::interpolate(values_, spacing(), t); }

double SolutionCurve::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double SolutionCurve::min() const { return *std::min_element(values_.begin(), values_.end()); }

double SolutionCurve::max() const { return *std::max_element(values_.begin(), values_.end()); }

namespace {

void require_compatible(const SolutionCurve& a, const SolutionCurve& b) {
    if (a.size() != b.size() || a.t1() != b.t1()) {
        throw std::invalid_argument("SolutionCurve: grids differ");
    }
}

}  // namespace

SolutionCurve operator+(const SolutionCurve& a, const SolutionCurve& b) {
    require_compatible(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return SolutionCurve(a.t1(), std::move(v));
}

SolutionCurve operator-(const SolutionCurve& a, const SolutionCurve& b) {
    require_compatible(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
    return SolutionCurve(a.t1(), std::move(v));
}

SolutionCurve operator*(double k, const SolutionCurve& a) {
    std::vector<double> v(a.values().begin(), a.values().end());
    for (double& x : v) x *= k;
    return SolutionCurve(a.t1(), std::move(v));
}

double sup_distance(const SolutionCurve& a, const SolutionCurve& b) {
    require_compatible(a, b);
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void write_csv(const SolutionCurve& u, std::ostream& out) {
    out << "t,u\n";
    char buf[64];
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.node(i), u[i]);
        out << buf;
    }
}

namespace quadrature {

std::vector<double> cumulative(std::span<const double> g, double h) {
    const std::size_t n = g.size();
    std::vector<double> c(n, 0.0);
    if (n < 2) return c;
    if (n == 2) {
        c[1] = 0.5 * h * (g[0] + g[1]);
        return c;
    }
    c[1] = h / 12.0 * (5.0 * g[0] + 8.0 * g[1] - g[2]);
    for (std::size_t k = 2; k < n; ++k) {
        if (k % 2 == 0) {
            c[k] = c[k - 2] + h / 3.0 * (g[k - 2] + 4.0 * g[k - 1] + g[k]);
        } else {
            c[k] = c[k - 1] + h / 12.0 * (-g[k - 2] + 8.0 * g[k - 1] + 5.0 * g[k]);
        }
    }
    return c;
}

namespace {

// First node of the four-point stencil used around cell `cell`.
std::size_t stencil_start(std::size_t cell, std::size_t n) {
    if (n < 4) return 0;
    const std::size_t lo = cell == 0 ? 0 : cell - 1;
    return std::min(lo, n - 4);
}

double lagrange(std::span<const double> g, double h, std::size_t start, std::size_t count, double x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double xi = h * static_cast<double>(start + i);
        double w = 1.0;
        for (std::size_t j = 0; j < count; ++j) {
            if (j == i) continue;
            const double xj = h * static_cast<double>(start + j);
            w *= (x - xj) / (xi - xj);
        }
        acc += w * g[start + i];
    }
    return acc;
}

std::size_t cell_of(double x, double h, std::size_t n) {
    if (x <= 0.0) return 0;
    const auto cell = static_cast<std::size_t>(std::floor(x / h));
    return std::min(cell, n - 2);
}

}  // namespace

double interpolate(std::span<const double> g, double h, double x) {
    const std::size_t n = g.size();
    const std::size_t cell = cell_of(x, h, n);
    const std::size_t start = stencil_start(cell, n);
    return lagrange(g, h, start, std::min<std::size_t>(4, n), x);
}

double integrate_to(std::span<const double> g, std::span<const double> cum, double h, double x) {
    const std::size_t n = g.size();
    const std::size_t cell = cell_of(x, h, n);
    const double left = h * static_cast<double>(cell);
    if (x <= left) return cum[cell];
    // three-point Gauss-Legendre is exact for the cubic interpolant
    static constexpr std::array<double, 3> nodes{-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr std::array<double, 3> weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const std::size_t start = stencil_start(cell, n);
    const std::size_t count = std::min<std::size_t>(4, n);
    const double mid = 0.5 * (left + x);
    const double half = 0.5 * (x - left);
    double partial = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        partial += weights[k] * lagrange(g, h, start, count, mid + half * nodes[k]);
    }
    return cum[cell] + half * partial;
}

double integrate_to(std::span<const double> g, double h, double x) {
    const auto cum = cumulative(g, h);
    return integrate_to(g, cum, h, x);
}

}  // namespace quadrature

}  // namespace lwbvp
