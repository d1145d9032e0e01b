#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace lwbvp {

/// Samples of a function on the uniform grid t_i = i T / (n - 1), i = 0..n-1.
class SolutionCurve {
public:
    SolutionCurve() = default;
    /// Throws std::invalid_argument unless T > 0, n >= 2 and every value is finite.
    SolutionCurve(double T, std::vector<double> values);

    template <class Fn>
    static SolutionCurve sample(double T, std::size_t n, Fn&& fn) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = fn(T * static_cast<double>(i) / static_cast<double>(n - 1));
        return SolutionCurve(T, std::move(v));
    }
    static SolutionCurve constant(double T, std::size_t n, double value);

    std::size_t size() const { return values_.size(); }
    double t0() const { return 0.0; }
    double t1() const { return T_; }
    double spacing() const { return T_ / static_cast<double>(values_.size() - 1); }
    double node(std::size_t i) const { return T_ * static_cast<double>(i) / static_cast<double>(values_.size() - 1); }

    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Cubic Lagrange interpolation through the four nodes around t.
    double at(double t) const;

    double sup_norm() const;
    double min() const;
    double max() const;

    friend SolutionCurve operator+(const SolutionCurve& a, const SolutionCurve& b);
    friend SolutionCurve operator-(const SolutionCurve& a, const SolutionCurve& b);
    friend SolutionCurve operator*(double k, const SolutionCurve& a);

private:
    double T_ = 1.0;
    std::vector<double> values_;
};

double sup_distance(const SolutionCurve& a, const SolutionCurve& b);

/// Header `t,u`, one row per node, 17 significant digits.
void write_csv(const SolutionCurve& u, std::ostream& out);

namespace quadrature {

/// C[k] = int_0^{t_k} g. Composite Simpson at even k; odd k add the
/// three-point formula over the last cell.
std::vector<double> cumulative(std::span<const double> g, double h);

/// Cubic Lagrange interpolation of nodal values g at x in [0, (n-1) h].
double interpolate(std::span<const double> g, double h, double x);

/// int_0^x g for x in [0, (n-1) h]; `cum` must be cumulative(g, h).
/// The cell containing x is integrated on the cubic interpolant.
double integrate_to(std::span<const double> g, std::span<const double> cum, double h, double x);
double integrate_to(std::span<const double> g, double h, double x);

}  // namespace quadrature

}  // namespace lwbvp
