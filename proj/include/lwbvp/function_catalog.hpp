#pragma once

#include "lwbvp/json_support.hpp"
#include "lwbvp/number.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lwbvp {

enum class FunctionKind {
    rational_sigmoid,                 // k u^2 / (u^2 + 1)
    separable_exponential_piecewise,  // exp(-rate t) h(u), h piecewise linear-fractional
    constant,
    polynomial,                       // sum_k c_k u^k
    linear_table,                     // piecewise-linear interpolation of (u, v) pairs
    product,                          // time factor g(t) times an autonomous u factor
};

std::string to_string(FunctionKind kind);

/// One branch (num0 + num1 u) / (den0 + den1 u) of a piecewise definition.
struct LinearFractional {
    Number num0, num1, den0{Rational(1)}, den1{Rational(0)};
};

struct TimeFactor {
    enum class Kind { exponential, polynomial };
    Kind kind = Kind::exponential;
    Number rate;                 // exponential: exp(-rate t)
    std::vector<Number> coeffs;  // polynomial: sum_k c_k t^k

    double operator()(double t) const;
    std::optional<Rational> exact(const Rational& t) const;
};

/// Result of comparing the two branches that meet at an interior breakpoint.
struct BreakpointCheck {
    double u = 0.0;
    double left = 0.0;
    double right = 0.0;
    double gap = 0.0;                   // |left - right|
    std::optional<Rational> exact_gap;  // when every coefficient involved is exact
    bool continuous = false;            // gap within kContinuityTolerance
};

/// Box used for the construction-time nonnegativity sample.
struct SampleDomain {
    double T = 1.0;
    double u_max = 10.0;
    int samples = 128;
};

inline constexpr double kContinuityTolerance = 1e-9;
inline constexpr double kNegativeUTolerance = 1e-10;

/// Nonlinearity f(t, u) from a closed catalog of kinds.
///
/// Specs are immutable once built. All factories validate their input and
/// throw DomainError on malformed definitions.
class FunctionSpec {
public:
    static FunctionSpec rational_sigmoid(Number scale);
    static FunctionSpec constant(Number value);
    static FunctionSpec polynomial(std::vector<Number> coeffs);
    static FunctionSpec linear_table(std::vector<Number> u, std::vector<Number> v);
    static FunctionSpec exponential_piecewise(Number rate, std::vector<Number> breakpoints,
                                              std::vector<LinearFractional> branches);
    static FunctionSpec product(TimeFactor time, FunctionSpec u_factor);

    FunctionKind kind() const;

    /// Caller-supplied promise that f(t, .) is nondecreasing.
    bool monotone_in_u() const { return monotone_; }
    FunctionSpec with_monotone_hint(bool monotone) const;

    bool depends_on_t() const;

    /// Throws DomainError when u < -1e-10; u in [-1e-10, 0) is read as 0.
    double operator()(double t, double u) const;

    /// Exact value when the kind is rational in (t, u) and every parameter is
    /// exact; std::nullopt otherwise.
    std::optional<Rational> eval_exact(const Rational& t, const Rational& u) const;

    std::vector<BreakpointCheck> breakpoint_checks() const;

    /// Throws DomainError on the first sampled negative value.
    void check_nonnegative(const SampleDomain& domain) const;

    /// True when every sample of `domain` evaluated to exactly zero.
    bool vanishes_on(const SampleDomain& domain) const;

    Json to_json() const;

private:
    struct Sigmoid { Number scale; };
    struct Constant { Number value; };
    struct Polynomial { std::vector<Number> coeffs; };
    struct Table { std::vector<Number> u, v; };
    struct Piecewise {
        Number rate;
        std::vector<Number> breakpoints;
        std::vector<LinearFractional> branches;
    };
    struct Product {
        TimeFactor time;
        std::shared_ptr<const FunctionSpec> u_factor;
    };
    using Body = std::variant<Sigmoid, Constant, Polynomial, Table, Piecewise, Product>;

    explicit FunctionSpec(Body body) : body_(std::move(body)) {}

    double eval_u(const Piecewise& p, double u) const;

    Body body_;
    bool monotone_ = false;
};

inline double eval_f(const FunctionSpec& spec, double t, double u) { return spec(t, u); }

/// Builds a spec from its JSON description and checks nonnegativity on
/// `domain`. Unknown kinds, discontinuous tables and negative samples are
/// rejected with ConfigError / DomainError naming the location.
FunctionSpec parse_function_spec(const Json& document, const SampleDomain& domain = {});

}  // namespace lwbvp
