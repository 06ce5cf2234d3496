#include "seu/verify.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace seu {

double expected_utility(const UtilityFamily& family, const Beliefs& beliefs,
                        const std::vector<double>& bundle) {
    double eu = 0.0;
    for (size_t s = 0; s < bundle.size(); ++s)
        eu += to_double(beliefs.probabilities[s]) * evaluate(family, bundle[s]);
    return eu;
}

namespace {

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

void consider(GridBest& best, const UtilityFamily& family, const Beliefs& beliefs,
              std::vector<double> bundle) {
    double eu = expected_utility(family, beliefs, bundle);
    if (best.bundle.empty() || eu > best.expected_utility ||
        (eu == best.expected_utility && lex_less(bundle, best.bundle))) {
        best.expected_utility = eu;
        best.bundle = std::move(bundle);
    }
}

// barycentric sweep of the budget face: weights j/G over the n vertices
void sweep_simplex(GridBest& best, const UtilityFamily& family, const Beliefs& beliefs,
                   const std::vector<double>& vertex_qty, size_t grid, size_t state,
                   size_t remaining, std::vector<size_t>& weights) {
    if (state + 1 == weights.size()) {
        weights[state] = remaining;
        std::vector<double> bundle(weights.size());
        for (size_t s = 0; s < weights.size(); ++s)
            bundle[s] = vertex_qty[s] * double(weights[s]) / double(grid);
        consider(best, family, beliefs, std::move(bundle));
        return;
    }
    for (size_t j = 0; j <= remaining; ++j) {
        weights[state] = j;
        sweep_simplex(best, family, beliefs, vertex_qty, grid, state + 1, remaining - j, weights);
    }
}

}  // namespace

GridBest grid_best(const UtilityFamily& family, const Beliefs& beliefs,
                   const std::vector<Rat>& prices, const Rat& wealth, size_t grid_points) {
    validate_family(family);
    if (grid_points < 2) throw std::invalid_argument("grid_best: grid_points must be >= 2");
    if (wealth < 0) throw std::invalid_argument("grid_best: wealth must be nonnegative");
    const size_t n = prices.size();

    GridBest best;
    if (wealth == 0) {  // singleton budget
        best.bundle.assign(n, 0.0);
        best.expected_utility = expected_utility(family, beliefs, best.bundle);
        return best;
    }

    std::vector<double> vertex_qty(n);
    for (size_t s = 0; s < n; ++s) vertex_qty[s] = to_double(wealth / prices[s]);

    if (const auto* q = std::get_if<Quadratic>(&family)) {
        double peak = q->theta / (2.0 * q->lambda);
        for (double v : vertex_qty)
            if (v > peak)
                throw std::domain_error("grid_best: quadratic budget extreme beyond monotone range");
    }

    if (family_tag(family) == FamilyTag::ConvexQuadratic) {
        // vertices only
        for (size_t s = 0; s < n; ++s) {
            std::vector<double> bundle(n, 0.0);
            bundle[s] = vertex_qty[s];
            consider(best, family, beliefs, std::move(bundle));
        }
        return best;
    }

    const size_t grid = grid_points - 1;  // segments per dimension, endpoints included
    std::vector<size_t> weights(n, 0);
    sweep_simplex(best, family, beliefs, vertex_qty, grid, 0, grid, weights);
    return best;
}

namespace {

// d EU / d eps at the corner when moving eps toward state s along the budget:
// pi_s u'(0) - pi_a u'(w) p_s / p_a. Nonpositive for all s iff the corner is
// optimal (global, by concavity).
std::optional<bool> derivative_corner_check(const UtilityFamily& family, const Beliefs& beliefs,
                                            const Observation& obs) {
    if (!family_is_concave(family_tag(family))) return std::nullopt;
    auto corner = corner_state(obs);
    if (!corner) return std::nullopt;
    const size_t a = *corner;
    const double w = to_double(obs.demand[a]);
    const double slope_at_corner = uprime(family, w);
    const double slope_at_zero = uprime(family, 0.0);
    for (size_t s = 0; s < obs.num_states(); ++s) {
        if (s == a) continue;
        double gain = to_double(beliefs.probabilities[s]) * slope_at_zero;
        double loss = to_double(beliefs.probabilities[a]) * slope_at_corner *
                      to_double(obs.prices[s] / obs.prices[a]);
        if (gain > loss) return false;
    }
    return true;
}

}  // namespace

Certificate verify_certificate(const Dataset& data, const Beliefs& beliefs,
                               const UtilityFamily& family, double tol, size_t grid_points,
                               bool use_derivative_check) {
    validate_beliefs(beliefs);
    validate_family(family);
    Certificate cert;
    cert.beliefs = beliefs;
    cert.family = family;
    cert.tol = tol;
    cert.grid_points = grid_points == 0 ? (data.num_states() == 2 ? 10'000 : 300) : grid_points;

    for (size_t i = 0; i < data.num_observations(); ++i) {
        const auto& obs = data.observations[i];
        ObservationVerdict verdict;
        verdict.obs = i;
        auto oracle = grid_best(family, beliefs, obs.prices, wealth(obs), cert.grid_points);
        verdict.oracle_max_eu = oracle.expected_utility;
        std::vector<double> observed(obs.num_states());
        for (size_t s = 0; s < obs.num_states(); ++s) observed[s] = to_double(obs.demand[s]);
        verdict.observed_eu = expected_utility(family, beliefs, observed);
        verdict.gap = verdict.observed_eu - verdict.oracle_max_eu;

        bool ok = verdict.gap >= -tol;
        if (use_derivative_check && data.num_states() == 2) {
            verdict.derivative_optimal = derivative_corner_check(family, beliefs, obs);
            if (verdict.derivative_optimal) ok = *verdict.derivative_optimal;
        }
        if (!ok) cert.valid = false;
        cert.verdicts.push_back(verdict);
    }
    return cert;
}

std::string certificate_to_json(const Certificate& certificate) {
    nlohmann::json doc;
    for (const auto& p : certificate.beliefs.probabilities) doc["pi"].push_back(rat_to_string(p));
    doc["family"] = family_name(family_tag(certificate.family));
    doc["tol"] = certificate.tol;
    doc["grid_points"] = certificate.grid_points;
    doc["valid"] = certificate.valid;
    doc["observations"] = nlohmann::json::array();
    for (const auto& v : certificate.verdicts) {
        nlohmann::json row;
        row["observation"] = v.obs + 1;
        row["oracle_max_eu"] = v.oracle_max_eu;
        row["observed_eu"] = v.observed_eu;
        row["gap"] = v.gap;
        if (v.derivative_optimal) row["derivative_optimal"] = *v.derivative_optimal;
        doc["observations"].push_back(std::move(row));
    }
    return doc.dump();
}

}  // namespace seu
