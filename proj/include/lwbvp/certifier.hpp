#pragma once

#include "lwbvp/lw_constants.hpp"
#include "lwbvp/number.hpp"
#include "lwbvp/problem.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace lwbvp {

/// Thresholds 0 < a < b < b/gamma <= c of the three-solution theorem.
struct ThresholdTriple {
    Number a, b, c;

    double d(double gamma) const { return b.value() / gamma; }
    bool exact() const { return a.is_exact() && b.is_exact() && c.is_exact(); }
};

enum class Condition { D1, D2, D3 };
std::string to_string(Condition c);

struct SamplingConfig {
    std::size_t samples = 257;        // per box axis
    bool refine = true;               // one pass around the worst point
    double refine_fraction = 0.05;    // neighbourhood half-width, fraction of each box side
    std::size_t refine_factor = 3;    // density multiplier inside the neighbourhood
    bool use_monotone_hint = true;    // honour FunctionSpec::monotone_in_u
};

struct ConditionReport {
    Condition condition = Condition::D1;
    bool holds = false;
    double margin = 0.0;        // positive = satisfied with room
    double bound = 0.0;         // m a, b / delta or m c
    double extreme_value = 0.0; // max f (D1, D3) or min f (D2) over the samples
    double worst_t = 0.0;
    double worst_u = 0.0;
    std::size_t samples_used = 0;
    bool monotone_shortcut = false;
};

struct Certificate {
    bool ordering_ok = false;
    ConditionReport d1, d2, d3;
    bool verdict = false;
    SamplingConfig sampling;
};

/// a < b and b < b/gamma strictly, b/gamma <= c. Zero tolerance when
/// `exact_gamma` and the triple are exact, 1e-12 otherwise.
bool check_ordering(const ThresholdTriple& tt, double gamma, const std::optional<Rational>& exact_gamma = std::nullopt);

/// f < m a on [0, T] x [0, a].
ConditionReport check_D1(const Problem& p, double m, double a, const SamplingConfig& grid = {});
/// f >= b / delta on [eta, T] x [b, b / gamma].
ConditionReport check_D2(const Problem& p, double delta, double b, double gamma, const SamplingConfig& grid = {});
/// f <= m c on [0, T] x [0, c].
ConditionReport check_D3(const Problem& p, double m, double c, const SamplingConfig& grid = {});

Certificate certify(const Problem& p, const ThresholdTriple& tt, const LWConstants& k, const SamplingConfig& grid = {});

struct ThresholdSearchConfig {
    double lower = 1e-4;
    double upper = 1e4;
    std::size_t points_per_decade = 4;  // coarse level
    std::size_t zoom_points = 16;       // points per refinement window
    std::size_t max_levels = 12;
    SamplingConfig sampling;
};

/// Log-grid scan for a certified triple: per-condition candidates first,
/// then a ascending, b ascending, c descending; windows are zoomed around
/// the best margin when a condition has no candidate yet.
std::optional<ThresholdTriple> search_thresholds(const Problem& p, const LWConstants& k,
                                                 const ThresholdSearchConfig& bounds = {});

}  // namespace lwbvp
