#include "seu/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "seu/simplex.hpp"

namespace seu {

RevealedPreferenceRelation revealed_preference(const Dataset& data) {
    const size_t k = data.num_observations();
    RevealedPreferenceRelation rel;
    rel.weak.assign(k, std::vector<bool>(k, false));
    rel.strict.assign(k, std::vector<bool>(k, false));
    std::vector<Rat> budgets(k);
    for (size_t i = 0; i < k; ++i) budgets[i] = wealth(data.observations[i]);
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) {
            Rat cost = 0;
            for (size_t s = 0; s < data.num_states(); ++s)
                cost += data.observations[i].prices[s] * data.observations[j].demand[s];
            rel.weak[i][j] = budgets[i] >= cost;
            rel.strict[i][j] = budgets[i] > cost;
        }
    }
    return rel;
}

GarpResult check_garp(const Dataset& data) {
    const size_t k = data.num_observations();
    auto rel = revealed_preference(data);

    // transitive closure with path reconstruction
    auto reach = rel.weak;
    std::vector<std::vector<size_t>> next(k, std::vector<size_t>(k, k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j)
            if (reach[i][j]) next[i][j] = j;
    for (size_t m = 0; m < k; ++m)
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j)
                if (!reach[i][j] && reach[i][m] && reach[m][j]) {
                    reach[i][j] = true;
                    next[i][j] = next[i][m];
                }

    GarpResult result;
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) {
            if (reach[i][j] && rel.strict[j][i]) {
                result.pass = false;
                size_t cur = i;
                result.cycle.push_back(cur);
                while (cur != j) {
                    cur = next[cur][j];
                    result.cycle.push_back(cur);
                }
                return result;  // first (i,j) in lexicographic order
            }
        }
    }
    return result;
}

std::vector<SarseuPair> admissible_pairs(const Dataset& data) {
    std::vector<SarseuPair> pairs;
    const size_t k = data.num_observations();
    const size_t n = data.num_states();
    for (size_t a = 0; a < k; ++a)
        for (size_t s = 0; s < n; ++s)
            for (size_t b = 0; b < k; ++b)
                for (size_t t = 0; t < n; ++t)
                    if (data.observations[a].demand[s] > data.observations[b].demand[t])
                        pairs.push_back({a, s, b, t});
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

size_t default_max_pairs(const Dataset& data) {
    return 2 * data.num_observations() * data.num_states();
}

namespace {

// Depth-first multiset enumeration in lexicographic order; the first failing
// balanced multiset encountered in preorder is the lexicographically smallest.
struct SarseuSearch {
    const Dataset& data;
    const std::vector<SarseuPair>& pairs;
    size_t max_pairs;
    size_t node_budget;

    std::vector<long> state_bal;
    std::vector<long> obs_bal;
    size_t state_l1 = 0, obs_l1 = 0;
    Rat product = 1;
    std::vector<size_t> chosen;
    size_t nodes = 0;
    bool budget_exceeded = false;
    SarseuResult result;

    SarseuSearch(const Dataset& d, const std::vector<SarseuPair>& p, size_t mp, size_t nb)
        : data(d), pairs(p), max_pairs(mp), node_budget(nb) {
        state_bal.assign(d.num_states(), 0);
        obs_bal.assign(d.num_observations(), 0);
    }

    void bump(std::vector<long>& bal, size_t& l1, size_t idx, long delta) {
        l1 -= static_cast<size_t>(std::abs(bal[idx]));
        bal[idx] += delta;
        l1 += static_cast<size_t>(std::abs(bal[idx]));
    }

    void apply(const SarseuPair& p, long sign) {
        bump(state_bal, state_l1, p.state_hi, sign);
        bump(state_bal, state_l1, p.state_lo, -sign);
        bump(obs_bal, obs_l1, p.obs_hi, sign);
        bump(obs_bal, obs_l1, p.obs_lo, -sign);
        const Rat ratio = data.observations[p.obs_hi].prices[p.state_hi] /
                          data.observations[p.obs_lo].prices[p.state_lo];
        if (sign > 0)
            product *= ratio;
        else
            product /= ratio;
    }

    // returns true when a failing sequence was found (stop everything)
    bool dfs(size_t min_index) {
        if (!chosen.empty() && state_l1 == 0 && obs_l1 == 0 && product > 1) {
            result.verdict = SarseuVerdict::Fail;
            result.product = product;
            for (size_t idx : chosen) result.sequence.pairs.push_back(pairs[idx]);
            return true;
        }
        if (chosen.size() == max_pairs) return false;
        const size_t remaining = max_pairs - chosen.size();
        if (state_l1 > 2 * remaining || obs_l1 > 2 * remaining) return false;
        for (size_t idx = min_index; idx < pairs.size(); ++idx) {
            if (++nodes > node_budget) {
                budget_exceeded = true;
                return false;
            }
            apply(pairs[idx], +1);
            chosen.push_back(idx);
            bool found = dfs(idx);
            chosen.pop_back();
            apply(pairs[idx], -1);
            if (found || budget_exceeded) return found;
        }
        return false;
    }
};

}  // namespace

SarseuResult check_sarseu(const Dataset& data, size_t max_pairs, size_t node_budget) {
    if (max_pairs < 2) throw std::invalid_argument("check_sarseu: max_pairs must be >= 2");
    auto pairs = admissible_pairs(data);
    SarseuSearch search(data, pairs, max_pairs, node_budget);
    bool found = search.dfs(0);
    search.result.nodes_visited = search.nodes;
    if (!found && search.budget_exceeded) search.result.verdict = SarseuVerdict::Inconclusive;
    return search.result;
}

SarseuLpResult sarseu_lp_oracle(const Dataset& data, double eps_lp) {
    SarseuLpResult res;
    res.pairs = admissible_pairs(data);
    const size_t m = res.pairs.size();
    if (m == 0) return res;  // no variables: vacuously consistent

    const size_t n = data.num_states();
    const size_t k = data.num_observations();

    // rows: state balance (= 0 as two inequalities), obs balance, delta <= 1
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    auto add_balance_rows = [&](auto coefficient) {
        std::vector<double> row(m, 0.0);
        for (size_t j = 0; j < m; ++j) row[j] = coefficient(res.pairs[j]);
        std::vector<double> neg(m);
        for (size_t j = 0; j < m; ++j) neg[j] = -row[j];
        A.push_back(std::move(row));
        b.push_back(0.0);
        A.push_back(std::move(neg));
        b.push_back(0.0);
    };
    for (size_t s = 0; s < n; ++s)
        add_balance_rows([s](const SarseuPair& p) {
            return double(p.state_hi == s) - double(p.state_lo == s);
        });
    for (size_t o = 0; o < k; ++o)
        add_balance_rows([o](const SarseuPair& p) {
            return double(p.obs_hi == o) - double(p.obs_lo == o);
        });
    for (size_t j = 0; j < m; ++j) {
        std::vector<double> row(m, 0.0);
        row[j] = 1.0;
        A.push_back(std::move(row));
        b.push_back(1.0);
    }

    std::vector<double> c(m);
    for (size_t j = 0; j < m; ++j) {
        const auto& p = res.pairs[j];
        c[j] = std::log(to_double(data.observations[p.obs_hi].prices[p.state_hi])) -
               std::log(to_double(data.observations[p.obs_lo].prices[p.state_lo]));
    }

    auto lp = simplex_maximize(A, b, c);
    res.optimum = lp.objective;
    res.near_zero_warning = std::abs(lp.objective) <= eps_lp && lp.objective != 0.0;
    if (lp.objective > eps_lp) {
        res.violation_found = true;
        res.weights = lp.x;
    }
    return res;
}

std::string sarseu_failure_json(const SarseuResult& result) {
    nlohmann::json doc;
    doc["axiom"] = "sarseu";
    doc["sequence"] = nlohmann::json::array();
    for (const auto& p : result.sequence.pairs)
        doc["sequence"].push_back({p.obs_hi + 1, p.state_hi + 1, p.obs_lo + 1, p.state_lo + 1});
    doc["product"] = rat_to_string(result.product);
    return doc.dump();
}

std::string garp_failure_json(const GarpResult& result) {
    nlohmann::json doc;
    doc["axiom"] = "garp";
    doc["cycle"] = nlohmann::json::array();
    for (size_t i : result.cycle) doc["cycle"].push_back(i + 1);
    return doc.dump();
}

}  // namespace seu
