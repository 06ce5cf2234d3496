#pragma once

#include <optional>
#include <vector>

#include "seu/families.hpp"
#include "seu/model.hpp"
#include "seu/rational.hpp"

namespace seu {

// Ratio-dominance condition tying full-support beliefs to corner choices:
// for each observation with corner state a and every other state s,
//   pi_a * p_s - pi_s * p_a > 0   (strictly concave source; weak variant for
//                                  the worked-example inequality).

struct SlackEntry {
    size_t obs;
    size_t state;
    Rat slack;  // pi_a * p_s - pi_s * p_a, exact
};

struct CompatibilityReport {
    bool pass = true;
    std::vector<SlackEntry> slacks;
};

/// Per-observation, per-alternative-state slack report. Throws
/// ValidationError when an observation is diversified.
CompatibilityReport check_belief_compatibility(const Dataset& data, const Beliefs& beliefs,
                                               bool strict);

/// One ratio constraint pi_corner / pi_other > price_ratio induced by an
/// observation.
struct BeliefConstraint {
    size_t obs;
    size_t corner;
    size_t other;
    Rat price_ratio;  // p^i_corner / p^i_other
};

struct BeliefSearchResult {
    bool feasible = false;
    Beliefs beliefs;                        // on success, strictly compatible
    Rat min_slack = 0;                      // optimum of the max-min-slack LP
    std::vector<BeliefConstraint> witness;  // on infeasibility: a conflicting
                                            // constraint cycle (a pair for 2
                                            // states, an irreducible subset
                                            // otherwise)
};

/// Maximizes the minimum slack t subject to the dominance constraints,
/// sum(pi) = 1 and pi >= t, in exact rational arithmetic (vertex enumeration;
/// falls back to floating point plus exact re-verification when the
/// combinatorics get large).
BeliefSearchResult find_beliefs(const Dataset& data);

struct InadaLimit {
    bool finite = true;
    double value = 0.0;  // lim_{z->0} u'(z) when finite
};

/// Right-limit of marginal utility at zero; infinite only for CRRA.
InadaLimit inada_limit(const UtilityFamily& family);

/// For each epsilon, checks the no-deviation inequality at the corner:
/// pi_a u(w) >= pi_a u(w - (p_dev/p_a) eps) + pi_dev u(eps).
/// Throws ValidationError when some epsilon makes the deviation infeasible.
std::vector<bool> corner_deviation_test(const UtilityFamily& family, const Beliefs& beliefs,
                                        const Observation& obs, size_t deviation_state,
                                        const std::vector<double>& epsilons);

/// Sweeps a log-spaced epsilon grid and returns a violating epsilon if the
/// no-deviation inequality fails somewhere (the CRRA impossibility search).
std::optional<double> find_violating_epsilon(const UtilityFamily& family, const Beliefs& beliefs,
                                             const Observation& obs, size_t deviation_state,
                                             int grid_points = 60);

}  // namespace seu
