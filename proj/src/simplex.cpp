#include "seu/simplex.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seu {

SimplexResult simplex_maximize(const std::vector<std::vector<double>>& A,
                               const std::vector<double>& b, const std::vector<double>& c) {
    const size_t m = A.size();
    const size_t n = c.size();
    for (double bi : b)
        if (bi < 0) throw std::invalid_argument("simplex_maximize requires b >= 0");

    // tableau: m rows of [A | I | b], objective row holds -c.
    const size_t cols = n + m + 1;
    std::vector<std::vector<double>> T(m + 1, std::vector<double>(cols, 0.0));
    for (size_t i = 0; i < m; ++i) {
        assert(A[i].size() == n);
        for (size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
        T[i][n + i] = 1.0;
        T[i][cols - 1] = b[i];
    }
    for (size_t j = 0; j < n; ++j) T[m][j] = -c[j];

    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; ++i) basis[i] = n + i;

    const double eps = 1e-11;
    SimplexResult res;
    for (;;) {
        // Bland: entering = lowest-index column with negative reduced cost
        size_t enter = cols;
        for (size_t j = 0; j + 1 < cols; ++j) {
            if (T[m][j] < -eps) {
                enter = j;
                break;
            }
        }
        if (enter == cols) break;  // optimal

        // leaving row: min ratio, ties by lowest basis index (Bland)
        size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < m; ++i) {
            if (T[i][enter] > eps) {
                double ratio = T[i][cols - 1] / T[i][enter];
                if (ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps && (leave == m || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave == m) {
            res.bounded = false;
            break;
        }

        double pivot = T[leave][enter];
        for (size_t j = 0; j < cols; ++j) T[leave][j] /= pivot;
        for (size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            double f = T[i][enter];
            if (f == 0.0) continue;
            for (size_t j = 0; j < cols; ++j) T[i][j] -= f * T[leave][j];
        }
        basis[leave] = enter;
    }

    res.x.assign(n, 0.0);
    for (size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = T[i][cols - 1];
    res.objective = 0.0;
    for (size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
    return res;
}

}  // namespace seu
