#include "seu/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "seu/verify.hpp"

namespace seu {

namespace {

// demands coming out of real-valued solvers are stored at a fixed dyadic
// resolution so downstream comparisons stay exact
Rat snap(double x) {
    static const Int kDenominator = Int(1) << 40;
    if (x <= 0) return Rat(0);
    return Rat(Int(std::llround(x * std::ldexp(1.0, 40))), kDenominator);
}

std::vector<Rat> best_vertex(const UtilityFamily& family, const Beliefs& beliefs,
                             const std::vector<Rat>& prices, const Rat& wealth) {
    const size_t n = prices.size();
    size_t best = 0;
    if (family_tag(family) == FamilyTag::Linear) {
        // exact: maximize pi_s / p_s, ties to the lowest state index
        Rat best_value = beliefs.probabilities[0] / prices[0];
        for (size_t s = 1; s < n; ++s) {
            Rat v = beliefs.probabilities[s] / prices[s];
            if (v > best_value) {
                best_value = v;
                best = s;
            }
        }
    } else {
        double best_eu = -1.0;
        for (size_t s = 0; s < n; ++s) {
            double eu = to_double(beliefs.probabilities[s]) *
                        evaluate(family, to_double(wealth / prices[s]));
            if (eu > best_eu) {
                best_eu = eu;
                best = s;
            }
        }
    }
    std::vector<Rat> demand(n, Rat(0));
    demand[best] = wealth / prices[best];
    return demand;
}

std::vector<Rat> crra_interior(const Crra& f, const Beliefs& beliefs,
                               const std::vector<Rat>& prices, const Rat& wealth) {
    // FOC: pi_s a x_s^{a-1} = mu p_s  =>  x_s proportional to (pi_s/p_s)^{1/(1-a)}
    const size_t n = prices.size();
    std::vector<double> shape(n);
    double budget_cost = 0.0;
    for (size_t s = 0; s < n; ++s) {
        shape[s] = std::pow(to_double(beliefs.probabilities[s] / prices[s]), 1.0 / (1.0 - f.alpha));
        budget_cost += to_double(prices[s]) * shape[s];
    }
    double t = to_double(wealth) / budget_cost;
    std::vector<Rat> demand(n);
    for (size_t s = 0; s < n; ++s) demand[s] = snap(t * shape[s]);
    return demand;
}

std::vector<Rat> cara_two_state(const Cara& f, const Beliefs& beliefs,
                                const std::vector<Rat>& prices, const Rat& wealth) {
    // interior FOC: x0 - x1 = ln(pi0 p1 / (pi1 p0)) / beta, clipped to the face
    double p0 = to_double(prices[0]), p1 = to_double(prices[1]);
    double delta = std::log(to_double((beliefs.probabilities[0] * prices[1]) /
                                      (beliefs.probabilities[1] * prices[0]))) /
                   f.beta;
    double w = to_double(wealth);
    double x0 = (w + p1 * delta) / (p0 + p1);
    double x1 = x0 - delta;
    if (x0 < 0) return {Rat(0), wealth / prices[1]};
    if (x1 < 0) return {wealth / prices[0], Rat(0)};
    return {snap(x0), snap(x1)};
}

}  // namespace

std::vector<Rat> agent_demand(const UtilityFamily& family, const Beliefs& beliefs,
                              const std::vector<Rat>& prices, const Rat& wealth) {
    validate_family(family);
    validate_beliefs(beliefs);
    if (prices.size() != beliefs.num_states())
        throw ValidationError("agent_demand: prices dimension does not match beliefs");
    for (const auto& p : prices)
        if (p <= 0) throw ValidationError("agent_demand: prices must be strictly positive");
    if (wealth <= 0) throw ValidationError("agent_demand: wealth must be positive");

    switch (family_tag(family)) {
        case FamilyTag::Linear:
        case FamilyTag::ConvexQuadratic:
            return best_vertex(family, beliefs, prices, wealth);
        case FamilyTag::Crra:
            return crra_interior(std::get<Crra>(family), beliefs, prices, wealth);
        case FamilyTag::Cara:
            if (prices.size() == 2)
                return cara_two_state(std::get<Cara>(family), beliefs, prices, wealth);
            break;
        default: break;
    }

    auto best =
        grid_best(family, beliefs, prices, wealth, prices.size() == 2 ? 100'000 : 300);
    std::vector<Rat> demand(prices.size());
    for (size_t s = 0; s < prices.size(); ++s) demand[s] = snap(best.bundle[s]);
    return demand;
}

Dataset generate_dataset(const UtilityFamily& family, const Beliefs& beliefs,
                         const std::vector<Budget>& budgets) {
    if (budgets.empty()) throw ValidationError("generate_dataset: empty budget list");
    Dataset data;
    for (size_t s = 0; s < beliefs.num_states(); ++s)
        data.states.push_back("s" + std::to_string(s + 1));
    for (const auto& budget : budgets) {
        Observation obs;
        obs.prices = budget.prices;
        obs.demand = agent_demand(family, beliefs, budget.prices, budget.wealth);
        data.observations.push_back(std::move(obs));
    }
    validate_dataset(data);
    return data;
}

}  // namespace seu
