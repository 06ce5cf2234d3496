#pragma once

#include <vector>

namespace seu {

/// Maximize c·x subject to A x <= b, x >= 0, where b >= 0 (the origin is a
/// basic feasible start). Dense tableau simplex with Bland's rule.
struct SimplexResult {
    bool bounded = true;
    double objective = 0.0;
    std::vector<double> x;
};

SimplexResult simplex_maximize(const std::vector<std::vector<double>>& A,
                               const std::vector<double>& b, const std::vector<double>& c);

}  // namespace seu
