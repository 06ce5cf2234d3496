#pragma once

#include <vector>

#include "seu/families.hpp"
#include "seu/model.hpp"

namespace seu {

struct Budget {
    std::vector<Rat> prices;
    Rat wealth;
};

/// Exact EU-maximizing demand for the family on the given budget. Closed
/// forms where they exist (vertex comparison for linear/convex with the
/// lowest-index tie-break, interior first-order conditions for CRRA and
/// 2-state CARA); grid search otherwise, snapped to exact rationals.
std::vector<Rat> agent_demand(const UtilityFamily& family, const Beliefs& beliefs,
                              const std::vector<Rat>& prices, const Rat& wealth);

Dataset generate_dataset(const UtilityFamily& family, const Beliefs& beliefs,
                         const std::vector<Budget>& budgets);

}  // namespace seu
