#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "seu/model.hpp"
#include "seu/rational.hpp"

namespace seu {

/// Revealed preference over observation indices: weak[i][j] means bundle x^j
/// was affordable when x^i was chosen (p^i·x^j <= p^i·x^i, exact), strict[i][j]
/// the strict version.
struct RevealedPreferenceRelation {
    std::vector<std::vector<bool>> weak;
    std::vector<std::vector<bool>> strict;
};

RevealedPreferenceRelation revealed_preference(const Dataset& data);

struct GarpResult {
    bool pass = true;
    std::vector<size_t> cycle;  // witness on failure: i0 R i1 R ... R im P i0
};

/// GARP: no cycle of the weak relation's transitive closure contains a strict
/// edge. Returns the lexicographically first witness cycle on failure.
GarpResult check_garp(const Dataset& data);

/// Demand-comparison pair (k, w, k2, w2): demand[k][w] > demand[k2][w2].
struct SarseuPair {
    size_t obs_hi, state_hi, obs_lo, state_lo;

    auto operator<=>(const SarseuPair&) const = default;
};

struct SarseuSequence {
    std::vector<SarseuPair> pairs;
};

enum class SarseuVerdict { Pass, Fail, Inconclusive };

struct SarseuResult {
    SarseuVerdict verdict = SarseuVerdict::Pass;
    SarseuSequence sequence;  // on Fail: lexicographically smallest witness
    Rat product = 0;          // on Fail: exact price-ratio product, > 1
    size_t nodes_visited = 0;
};

/// All ordered pairs with a strict demand inequality, in lexicographic order.
std::vector<SarseuPair> admissible_pairs(const Dataset& data);

/// Enumerates every balanced multiset of admissible pairs of size <= max_pairs
/// and checks the exact price-ratio product against 1. Inconclusive when the
/// node budget runs out before a verdict; never a silent pass.
SarseuResult check_sarseu(const Dataset& data, size_t max_pairs, size_t node_budget = 5'000'000);

/// Paper default bound: 2 * (#observations) * (#states).
size_t default_max_pairs(const Dataset& data);

/// LP relaxation over nonnegative pair weights with the balance constraints:
/// a positive optimum of sum(delta * log price ratio) certifies a SARSEU
/// violation of some (possibly long) length. Advisory, floating point.
struct SarseuLpResult {
    bool violation_found = false;
    double optimum = 0.0;
    std::vector<SarseuPair> pairs;    // column order
    std::vector<double> weights;      // optimal delta, on violation
    bool near_zero_warning = false;   // |optimum| within eps_lp of 0
};

SarseuLpResult sarseu_lp_oracle(const Dataset& data, double eps_lp = 1e-9);

/// {"axiom":"sarseu","sequence":[[k,w,k2,w2],...],"product":"3/1"} (1-based
/// indices in the serialized form).
std::string sarseu_failure_json(const SarseuResult& result);
std::string garp_failure_json(const GarpResult& result);

}  // namespace seu
