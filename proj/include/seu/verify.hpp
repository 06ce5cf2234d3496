#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seu/families.hpp"
#include "seu/model.hpp"

namespace seu {

double expected_utility(const UtilityFamily& family, const Beliefs& beliefs,
                        const std::vector<double>& bundle);

struct GridBest {
    std::vector<double> bundle;
    double expected_utility = 0.0;
};

/// Brute-force maximizer of expected utility on the budget face p.x = w.
/// grid_points is the per-dimension resolution. Concave and linear families
/// are swept over a simplex grid (monotonicity puts the max on the face);
/// strictly convex families are evaluated at the n budget vertices only
/// (Bauer: a convex maximum sits at an extreme point). Ties break toward the
/// lexicographically smallest bundle.
GridBest grid_best(const UtilityFamily& family, const Beliefs& beliefs,
                   const std::vector<Rat>& prices, const Rat& wealth, size_t grid_points);

struct ObservationVerdict {
    size_t obs = 0;
    double oracle_max_eu = 0.0;
    double observed_eu = 0.0;
    double gap = 0.0;  // observed_eu - oracle_max_eu; valid when >= -tol
    // Closed-form sign check of the corner directional derivative, available
    // for concave families at 2-state corner observations. When present it is
    // the authority and the grid is a cross-check.
    std::optional<bool> derivative_optimal;
};

struct Certificate {
    Beliefs beliefs;
    UtilityFamily family;
    double tol = 0.0;
    size_t grid_points = 0;
    bool valid = true;
    std::vector<ObservationVerdict> verdicts;
};

/// Checks that the observed demand maximizes expected utility on every
/// observation's budget. Invalid certificates are returned, never thrown.
/// grid_points 0 selects the default resolution (1e4 for 2 states, 300 per
/// dimension otherwise).
Certificate verify_certificate(const Dataset& data, const Beliefs& beliefs,
                               const UtilityFamily& family, double tol = 1e-7,
                               size_t grid_points = 0, bool use_derivative_check = true);

std::string certificate_to_json(const Certificate& certificate);

}  // namespace seu
