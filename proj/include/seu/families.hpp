#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "seu/model.hpp"
#include "seu/rational.hpp"

namespace seu {

// ---------------------------------------------------------------------------
// Parametric utility families. Every family is normalized so u(0) = 0.

struct ShiftedPower {  // u(x) = (x+c)^a - c^a, a in (0,1), c > 0; DARA
    double alpha;
    double c = 1.0;
};
struct Cara {  // u(x) = 1 - exp(-b x), b > 0
    double beta;
};
struct Quadratic {  // u(x) = t x - l x^2, increasing on [0, t/(2l)]; IARA
    double theta;
    double lambda;
};
struct Hyperbolic {  // u(x) = x / (1 + g x), g > 0; IARA, increasing on R+
    double gamma;
};
struct Linear {};          // u(x) = x
struct ConvexQuadratic {   // u(x) = x + e x^2, e > 0; strictly convex
    double eps;
};
struct Crra {  // u(x) = x^a, a in (0,1). Unbounded marginal utility at 0:
    double alpha;  // kept for impossibility tests only.
};

using UtilityFamily =
    std::variant<ShiftedPower, Cara, Quadratic, Hyperbolic, Linear, ConvexQuadratic, Crra>;

enum class FamilyTag { ShiftedPower, Cara, Quadratic, Hyperbolic, Linear, ConvexQuadratic, Crra };

FamilyTag family_tag(const UtilityFamily& family);
std::string family_name(FamilyTag tag);
std::optional<FamilyTag> family_tag_from_name(const std::string& name);
bool family_is_concave(FamilyTag tag);  // weakly (Linear counts as both)
bool family_is_convex(FamilyTag tag);

/// Throws std::domain_error if parameters fall outside their open domains.
void validate_family(const UtilityFamily& family);

/// Upper end of the range on which the family is increasing
/// (theta/(2 lambda) for Quadratic, +infinity otherwise).
double monotone_upper(const UtilityFamily& family);

/// u(x), normalized so u(0) = 0. Throws std::domain_error for x < 0.
double evaluate(const UtilityFamily& family, double x);

/// u'(x); +infinity for CRRA at x = 0.
double uprime(const UtilityFamily& family, double x);

/// u'(x)/u'(0) in closed form. Throws std::domain_error for CRRA
/// (u'(0) is infinite).
double marginal_ratio(const UtilityFamily& family, double x);

/// Domain-scaling operator: returns the family member cardinally equivalent
/// to x -> u(kappa x). kappa must lie in (0,1].
UtilityFamily scale(const UtilityFamily& family, double kappa);

// ---------------------------------------------------------------------------
// Corner first-order condition and parameter regions.

struct StateMargin {
    size_t state;
    double margin;  // lhs - rhs of the MRS inequality
};

struct MrsReport {
    bool holds = true;
    std::optional<size_t> violated_state;
    std::vector<StateMargin> margins;  // one per alternative state
};

/// Checks (pi_a/pi_s) * u'(w)/u'(0) >= p_a/p_s for every state s other than
/// the corner state a. Weak inequality, matching the worked example.
MrsReport mrs_condition(const UtilityFamily& family, const Beliefs& beliefs,
                        const Observation& obs);

/// min over alternative states s of (pi_a * p_s) / (pi_s * p_a), exact.
/// Values >= 1 mean beliefs weakly ratio-dominate the price ratios at obs.
Rat corner_ratio(const Beliefs& beliefs, const Observation& obs, size_t corner,
                 size_t* argmin_state = nullptr);

enum class RegionKind { Interval, HalfSpace, All, Empty };

/// Exact parameter region under which a family passes mrs_condition on every
/// observation. Interval regions carry the symbolic endpoint expression plus
/// the rational pieces it was built from.
struct ParameterRegion {
    FamilyTag family = FamilyTag::Linear;
    RegionKind kind = RegionKind::Empty;

    // Interval regions (free parameter axis).
    double lower = 0.0, upper = 0.0;
    bool closed_lower = false, closed_upper = false;
    std::string lower_expr, upper_expr;

    // HalfSpace (Quadratic): lambda/theta <= ratio_bound, exact.
    std::optional<Rat> ratio_bound;

    // Exact endpoint pieces for audit:
    //   Cara upper        = ln(endpoint_ratio) / endpoint_scale
    //   Hyperbolic upper  = (sqrt(endpoint_ratio) - 1) / endpoint_scale
    //   ShiftedPower lower = 1 - ln(endpoint_ratio) / ln(endpoint_base)
    std::optional<Rat> endpoint_ratio;
    std::optional<Rat> endpoint_scale;
    std::optional<Rat> endpoint_base;

    double fixed_c = 1.0;  // ShiftedPower only
    int binding_observation = -1;  // 0-based; -1 when not applicable
    std::string note;

    bool empty() const { return kind == RegionKind::Empty; }
};

/// Solves the simultaneous MRS inequalities in closed form. Every observation
/// must have a corner state. An empty region is a valid result.
ParameterRegion solve_region(FamilyTag tag, const Beliefs& beliefs, const Dataset& data,
                             const Rat& shifted_power_c = Rat(1));

/// A concrete family from the interior of a nonempty region (for oracle
/// verification). Nullopt for empty regions.
std::optional<UtilityFamily> region_interior_family(const ParameterRegion& region);

/// solve_region for every family; CRRA reported as always-empty.
std::map<FamilyTag, ParameterRegion> all_family_report(const Beliefs& beliefs,
                                                       const Dataset& data,
                                                       const Rat& shifted_power_c = Rat(1));

std::string region_to_json(const ParameterRegion& region);

}  // namespace seu
