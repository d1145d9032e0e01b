#pragma once

#include "lwbvp/number.hpp"
#include "lwbvp/problem.hpp"

#include <array>
#include <optional>

namespace lwbvp {

template <class S>
struct GammaTerms {
    std::array<S, 3> terms;  // eta/T, alpha(beta+1)eta^2/(2T), alpha(beta+1)eta(T-eta)/(2T - alpha(beta+1)eta^2)
    S third_denominator;
};

template <class S>
struct DeltaTerms {
    std::array<S, 2> terms;  // beta eta (T-eta)^2 / Lambda, alpha eta^2 (1+beta)(T-eta)^2 / (2 Lambda)
};

/// The three candidates for gamma, each from its own expression.
/// Throws DomainError when 2T - alpha(beta+1)eta^2 <= 0.
template <class S>
GammaTerms<S> gamma_terms(const S& T, const S& eta, const S& alpha, const S& beta);

template <class S>
S m_formula(const S& T, const S& eta, const S& alpha, const S& beta);

template <class S>
DeltaTerms<S> delta_terms(const S& T, const S& eta, const S& alpha, const S& beta);

struct ExactConstants {
    Rational lambda, gamma, m, delta;
};

struct LWConstants {
    double lambda = 0.0;
    double gamma = 0.0;
    double m = 0.0;
    double delta = 0.0;
    int gamma_argmin = 0;  // 0-based index into the three gamma terms, lowest on ties
    int delta_argmin = 0;  // 0-based index into the two delta terms, lowest on ties
    std::optional<ExactConstants> exact;
};

double gamma(const ProblemParams& p);
double m_constant(const ProblemParams& p);
double delta_constant(const ProblemParams& p);

/// Lambda, gamma, m, delta in float; additionally in exact rationals when
/// the problem's boundary parameters are all exact.
LWConstants compute_constants(const Problem& p);

}  // namespace lwbvp
