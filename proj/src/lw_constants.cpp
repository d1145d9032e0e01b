#include "lwbvp/lw_constants.hpp"

#include "lwbvp/errors.hpp"

#include <sstream>

namespace lwbvp {

namespace {

double as_double(double v) { return v; }
double as_double(const Rational& v) { return to_double(v); }

template <class S, std::size_t N>
int argmin(const std::array<S, N>& xs) {
    int best = 0;
    for (std::size_t i = 1; i < N; ++i) {
        if (xs[i] < xs[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    return best;
}

}  // namespace

template <class S>
GammaTerms<S> gamma_terms(const S& T, const S& eta, const S& alpha, const S& beta) {
    GammaTerms<S> g;
    const S k = S(alpha * (beta + 1));
    g.third_denominator = S(2 * T - k * eta * eta);
    if (!(g.third_denominator > 0)) {
        std::ostringstream os;
        os.precision(17);
        os << "gamma: 2T - alpha(beta+1)eta^2 = " << as_double(g.third_denominator) << " is not positive";
        throw DomainError(os.str());
    }
    g.terms[0] = S(eta / T);
    g.terms[1] = S(k * eta * eta / (2 * T));
    g.terms[2] = S(k * eta * (T - eta) / g.third_denominator);
    return g;
}

template <class S>
S m_formula(const S& T, const S& eta, const S& alpha, const S& beta) {
    const S lambda = lambda_formula(T, eta, alpha, beta);
    const S bracket = S(2 * T * (beta + 1) + beta * eta * (alpha * eta + 2) + alpha * beta * T * T);
    return S(2 * lambda / (T * T * bracket));
}

template <class S>
DeltaTerms<S> delta_terms(const S& T, const S& eta, const S& alpha, const S& beta) {
    const S lambda = lambda_formula(T, eta, alpha, beta);
    const S gap2 = S((T - eta) * (T - eta));
    DeltaTerms<S> d;
    d.terms[0] = S(beta * eta * gap2 / lambda);
    d.terms[1] = S(alpha * eta * eta * (1 + beta) * gap2 / (2 * lambda));
    return d;
}

template GammaTerms<double> gamma_terms(const double&, const double&, const double&, const double&);
template GammaTerms<Rational> gamma_terms(const Rational&, const Rational&, const Rational&, const Rational&);
template double m_formula(const double&, const double&, const double&, const double&);
template Rational m_formula(const Rational&, const Rational&, const Rational&, const Rational&);
template DeltaTerms<double> delta_terms(const double&, const double&, const double&, const double&);
template DeltaTerms<Rational> delta_terms(const Rational&, const Rational&, const Rational&, const Rational&);

double gamma(const ProblemParams& p) {
    const auto g = gamma_terms(p.T, p.eta, p.alpha, p.beta);
    return g.terms[static_cast<std::size_t>(argmin(g.terms))];
}

double m_constant(const ProblemParams& p) { return m_formula(p.T, p.eta, p.alpha, p.beta); }

double delta_constant(const ProblemParams& p) {
    const auto d = delta_terms(p.T, p.eta, p.alpha, p.beta);
    return d.terms[static_cast<std::size_t>(argmin(d.terms))];
}

LWConstants compute_constants(const Problem& p) {
    LWConstants k;
    if (p.exact()) {
        const Rational &T = p.T.exact(), &eta = p.eta.exact(), &alpha = p.alpha.exact(), &beta = p.beta.exact();
        const auto g = gamma_terms(T, eta, alpha, beta);
        const auto d = delta_terms(T, eta, alpha, beta);
        k.gamma_argmin = argmin(g.terms);
        k.delta_argmin = argmin(d.terms);
        ExactConstants e{lambda_formula(T, eta, alpha, beta), g.terms[static_cast<std::size_t>(k.gamma_argmin)],
                         m_formula(T, eta, alpha, beta), d.terms[static_cast<std::size_t>(k.delta_argmin)]};
        k.lambda = to_double(e.lambda);
        k.gamma = to_double(e.gamma);
        k.m = to_double(e.m);
        k.delta = to_double(e.delta);
        k.exact = std::move(e);
        return k;
    }
    const ProblemParams q = p.params();
    const auto g = gamma_terms(q.T, q.eta, q.alpha, q.beta);
    const auto d = delta_terms(q.T, q.eta, q.alpha, q.beta);
    k.lambda = lambda_constant(q);
    k.gamma_argmin = argmin(g.terms);
    k.delta_argmin = argmin(d.terms);
    k.gamma = g.terms[static_cast<std::size_t>(k.gamma_argmin)];
    k.m = m_formula(q.T, q.eta, q.alpha, q.beta);
    k.delta = d.terms[static_cast<std::size_t>(k.delta_argmin)];
    return k;
}

}  // namespace lwbvp
