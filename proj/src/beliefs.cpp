#include "seu/beliefs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seu/simplex.hpp"

namespace seu {

namespace {

size_t require_corner(const Dataset& data, size_t i) {
    auto corner = corner_state(data.observations[i]);
    if (!corner)
        throw ValidationError("observation " + std::to_string(i + 1) +
                              " is diversified (no corner state)");
    return *corner;
}

}  // namespace

CompatibilityReport check_belief_compatibility(const Dataset& data, const Beliefs& beliefs,
                                               bool strict) {
    validate_beliefs(beliefs);
    if (beliefs.num_states() != data.num_states())
        throw ValidationError("beliefs dimension does not match dataset states");
    CompatibilityReport report;
    for (size_t i = 0; i < data.num_observations(); ++i) {
        const auto& obs = data.observations[i];
        size_t a = require_corner(data, i);
        for (size_t s = 0; s < data.num_states(); ++s) {
            if (s == a) continue;
            Rat slack = beliefs.probabilities[a] * obs.prices[s] -
                        beliefs.probabilities[s] * obs.prices[a];
            report.slacks.push_back({i, s, slack});
            if (strict ? slack <= 0 : slack < 0) report.pass = false;
        }
    }
    return report;
}

namespace {

// Tightest ratio requirement per ordered state pair plus the inducing
// observation. Edge (a,b): pi_a / pi_b must exceed ratio[a][b].
struct RatioGraph {
    size_t n;
    std::vector<std::vector<std::optional<Rat>>> ratio;
    std::vector<std::vector<size_t>> source_obs;
};

RatioGraph build_ratio_graph(const Dataset& data) {
    RatioGraph g;
    g.n = data.num_states();
    g.ratio.assign(g.n, std::vector<std::optional<Rat>>(g.n));
    g.source_obs.assign(g.n, std::vector<size_t>(g.n, 0));
    for (size_t i = 0; i < data.num_observations(); ++i) {
        const auto& obs = data.observations[i];
        size_t a = require_corner(data, i);
        for (size_t s = 0; s < g.n; ++s) {
            if (s == a) continue;
            Rat r = obs.prices[a] / obs.prices[s];
            if (!g.ratio[a][s] || r > *g.ratio[a][s]) {
                g.ratio[a][s] = r;
                g.source_obs[a][s] = i;
            }
        }
    }
    return g;
}

// Max-product transitive closure; a simple cycle with product >= 1 witnesses
// infeasibility of the strict ratio system.
std::optional<std::vector<BeliefConstraint>> find_conflict_cycle(const RatioGraph& g) {
    const size_t n = g.n;
    using Row = std::vector<std::optional<Rat>>;
    using Mat = std::vector<Row>;

    // best[k][a][b]: max ratio product over walks of exactly k edges; a
    // positive simple cycle has <= n edges, so k = 1..n suffices. step[k]
    // records the first edge of the optimal walk for reconstruction.
    std::vector<Mat> best(n + 1, Mat(n, Row(n)));
    std::vector<std::vector<std::vector<size_t>>> step(
        n + 1, std::vector<std::vector<size_t>>(n, std::vector<size_t>(n, n)));
    best[1] = g.ratio;
    for (size_t k = 2; k <= n; ++k)
        for (size_t a = 0; a < n; ++a)
            for (size_t m = 0; m < n; ++m) {
                if (!g.ratio[a][m]) continue;
                for (size_t b = 0; b < n; ++b) {
                    if (!best[k - 1][m][b]) continue;
                    Rat through = *g.ratio[a][m] * *best[k - 1][m][b];
                    if (!best[k][a][b] || through > *best[k][a][b]) {
                        best[k][a][b] = through;
                        step[k][a][b] = m;
                    }
                }
            }

    for (size_t k = 1; k <= n; ++k)
        for (size_t a = 0; a < n; ++a) {
            if (!best[k][a][a] || *best[k][a][a] < 1) continue;
            // reconstruct the k-edge closed walk, then peel off simple loops;
            // the loop products multiply to the walk product >= 1, so at
            // least one loop is itself >= 1
            std::vector<size_t> walk{a};
            size_t cur = a;
            for (size_t rem = k; rem > 1; --rem) {
                cur = step[rem][cur][a];
                walk.push_back(cur);
            }
            walk.push_back(a);
            while (true) {
                std::vector<size_t> seen_at(n, walk.size());
                size_t lo = 0, hi = 0;
                for (size_t idx = 0; idx < walk.size(); ++idx) {
                    if (seen_at[walk[idx]] != walk.size()) {
                        lo = seen_at[walk[idx]];
                        hi = idx;
                        break;
                    }
                    seen_at[walk[idx]] = idx;
                }
                Rat product = 1;
                for (size_t idx = lo; idx < hi; ++idx)
                    product *= *g.ratio[walk[idx]][walk[idx + 1]];
                if (product >= 1) {
                    std::vector<BeliefConstraint> cycle;
                    for (size_t idx = lo; idx < hi; ++idx)
                        cycle.push_back({g.source_obs[walk[idx]][walk[idx + 1]], walk[idx],
                                         walk[idx + 1], *g.ratio[walk[idx]][walk[idx + 1]]});
                    return cycle;
                }
                walk.erase(walk.begin() + long(lo), walk.begin() + long(hi));
            }
        }
    return std::nullopt;
}

// One linear inequality expr >= 0 over variables (pi_1..pi_{n-1}, t), with
// pi_n eliminated through sum(pi) = 1.
struct LinearForm {
    std::vector<Rat> coef;  // size n: n-1 pi coefficients then t
    Rat constant = 0;

    Rat eval(const std::vector<Rat>& vars) const {
        Rat v = constant;
        for (size_t j = 0; j < coef.size(); ++j) v += coef[j] * vars[j];
        return v;
    }
};

// coefficient bundle for pi_s as a function of the reduced variables
void add_pi(LinearForm& form, size_t s, size_t n, const Rat& weight) {
    if (s + 1 < n) {
        form.coef[s] += weight;
    } else {  // pi_n = 1 - sum of the others
        form.constant += weight;
        for (size_t j = 0; j + 1 < n; ++j) form.coef[j] -= weight;
    }
}

std::vector<LinearForm> build_constraints(const Dataset& data) {
    const size_t n = data.num_states();
    const size_t d = n;  // n-1 free pi plus t
    std::vector<LinearForm> constraints;
    for (size_t i = 0; i < data.num_observations(); ++i) {
        const auto& obs = data.observations[i];
        size_t a = require_corner(data, i);
        for (size_t s = 0; s < n; ++s) {
            if (s == a) continue;
            LinearForm form;
            form.coef.assign(d, 0);
            add_pi(form, a, n, obs.prices[s]);
            add_pi(form, s, n, -obs.prices[a]);
            form.coef[d - 1] -= 1;  // ... - t >= 0
            constraints.push_back(std::move(form));
        }
    }
    for (size_t s = 0; s < n; ++s) {  // pi_s - t >= 0
        LinearForm form;
        form.coef.assign(d, 0);
        add_pi(form, s, n, Rat(1));
        form.coef[d - 1] -= 1;
        constraints.push_back(std::move(form));
    }
    return constraints;
}

// Solves the d x d system {forms[idx] == 0}. Returns nullopt when singular.
std::optional<std::vector<Rat>> solve_active_set(const std::vector<LinearForm>& constraints,
                                                 const std::vector<size_t>& active, size_t d) {
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(d + 1));
    for (size_t r = 0; r < d; ++r) {
        const auto& form = constraints[active[r]];
        for (size_t c = 0; c < d; ++c) m[r][c] = form.coef[c];
        m[r][d] = -form.constant;
    }
    for (size_t col = 0; col < d; ++col) {
        size_t pivot = col;
        while (pivot < d && m[pivot][col] == 0) ++pivot;
        if (pivot == d) return std::nullopt;
        std::swap(m[col], m[pivot]);
        for (size_t r = 0; r < d; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rat f = m[r][col] / m[col][col];
            for (size_t c = col; c <= d; ++c) m[r][c] -= f * m[col][c];
        }
    }
    std::vector<Rat> x(d);
    for (size_t r = 0; r < d; ++r) x[r] = m[r][d] / m[r][r];
    return x;
}

struct VertexOptimum {
    std::vector<Rat> vars;
    Rat t;
};

// Exact LP by enumerating basic feasible points; the feasible set is pointed
// so the optimum sits on a vertex.
std::optional<VertexOptimum> enumerate_vertices(const std::vector<LinearForm>& constraints,
                                                size_t d) {
    const size_t m = constraints.size();
    if (m < d) return std::nullopt;
    std::optional<VertexOptimum> best;
    std::vector<size_t> idx(d);
    for (size_t r = 0; r < d; ++r) idx[r] = r;
    auto next_combination = [&]() {
        size_t r = d;
        while (r-- > 0) {
            if (idx[r] < m - d + r) {
                ++idx[r];
                for (size_t j = r + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    do {
        if (auto x = solve_active_set(constraints, idx, d)) {
            bool feasible = true;
            for (const auto& form : constraints)
                if (form.eval(*x) < 0) {
                    feasible = false;
                    break;
                }
            if (feasible) {
                Rat t = (*x)[d - 1];
                if (!best || t > best->t) best = VertexOptimum{*x, t};
            }
        }
    } while (next_combination());
    return best;
}

size_t binomial_capped(size_t m, size_t d, size_t cap) {
    size_t result = 1;
    for (size_t j = 0; j < d; ++j) {
        result = result * (m - j) / (j + 1);
        if (result > cap) return cap + 1;
    }
    return result;
}

Beliefs vars_to_beliefs(const std::vector<Rat>& vars, size_t n) {
    Beliefs beliefs;
    Rat rest = 1;
    for (size_t j = 0; j + 1 < n; ++j) {
        beliefs.probabilities.push_back(vars[j]);
        rest -= vars[j];
    }
    beliefs.probabilities.push_back(rest);
    return beliefs;
}

// float LP fallback: maximize t with the same constraints, then snap the
// solution to nearby rationals and re-verify the slacks exactly.
std::optional<BeliefSearchResult> float_lp_fallback(const Dataset& data,
                                                    const std::vector<LinearForm>& constraints,
                                                    size_t n) {
    const size_t d = n;
    // simplex form: variables v = (pi_1..pi_{n-1}, t) are free-signed in
    // principle, but any feasible optimum has pi in (0,1) and t in (0, 1/n],
    // so restricting to v >= 0 keeps the optimum reachable.
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (const auto& form : constraints) {
        std::vector<double> row(d);
        for (size_t j = 0; j < d; ++j) row[j] = -to_double(form.coef[j]);
        A.push_back(std::move(row));
        b.push_back(to_double(form.constant));
    }
    std::vector<double> c(d, 0.0);
    c[d - 1] = 1.0;
    auto lp = simplex_maximize(A, b, c);
    if (!lp.bounded || lp.objective <= 0) return std::nullopt;

    // snap pi to rationals over a fixed denominator and re-check exactly
    for (Int denom : {Int(1'000'000), Int(1'000'000'000)}) {
        std::vector<Rat> vars(d);
        for (size_t j = 0; j + 1 < n; ++j)
            vars[j] = Rat(Int(llround(lp.x[j] * denom.convert_to<double>())), denom);
        vars[d - 1] = 0;
        Beliefs candidate = vars_to_beliefs(vars, n);
        bool positive = true;
        for (const auto& p : candidate.probabilities) positive &= p > 0;
        if (!positive) continue;
        auto report = check_belief_compatibility(data, candidate, true);
        if (report.pass) {
            Rat min_slack;
            bool first = true;
            for (const auto& entry : report.slacks) {
                if (first || entry.slack < min_slack) min_slack = entry.slack;
                first = false;
            }
            for (const auto& p : candidate.probabilities)
                if (p < min_slack) min_slack = p;
            BeliefSearchResult result;
            result.feasible = true;
            result.beliefs = std::move(candidate);
            result.min_slack = min_slack;
            return result;
        }
    }
    return std::nullopt;
}

}  // namespace

BeliefSearchResult find_beliefs(const Dataset& data) {
    const size_t n = data.num_states();
    BeliefSearchResult result;

    auto graph = build_ratio_graph(data);
    if (auto cycle = find_conflict_cycle(graph)) {
        result.feasible = false;
        result.witness = std::move(*cycle);
        return result;
    }

    auto constraints = build_constraints(data);
    const size_t d = n;
    if (binomial_capped(constraints.size(), d, 2'000'000) <= 2'000'000) {
        auto best = enumerate_vertices(constraints, d);
        if (best && best->t > 0) {
            result.feasible = true;
            result.beliefs = vars_to_beliefs(best->vars, n);
            result.min_slack = best->t;
            return result;
        }
    } else {
        if (auto fallback = float_lp_fallback(data, constraints, n)) return *fallback;
        throw std::runtime_error(
            "find_beliefs: system too large for exact enumeration and the floating-point "
            "fallback could not certify a strictly feasible point");
    }

    // No cycle conflict but no strictly positive vertex either: boundary-tight
    // system (some required ratio holds only with equality). Report the
    // tightest edge pair as the witness.
    result.feasible = false;
    for (size_t a = 0; a < n && result.witness.empty(); ++a)
        for (size_t b = 0; b < n && result.witness.empty(); ++b)
            if (a != b && graph.ratio[a][b] && graph.ratio[b][a] &&
                *graph.ratio[a][b] * *graph.ratio[b][a] >= 1) {
                result.witness.push_back({graph.source_obs[a][b], a, b, *graph.ratio[a][b]});
                result.witness.push_back({graph.source_obs[b][a], b, a, *graph.ratio[b][a]});
            }
    return result;
}

InadaLimit inada_limit(const UtilityFamily& family) {
    validate_family(family);
    switch (family_tag(family)) {
        case FamilyTag::ShiftedPower: {
            const auto& f = std::get<ShiftedPower>(family);
            return {true, f.alpha * std::pow(f.c, f.alpha - 1.0)};
        }
        case FamilyTag::Cara: return {true, std::get<Cara>(family).beta};
        case FamilyTag::Quadratic: return {true, std::get<Quadratic>(family).theta};
        case FamilyTag::Hyperbolic: return {true, 1.0};
        case FamilyTag::Linear: return {true, 1.0};
        case FamilyTag::ConvexQuadratic: return {true, 1.0};
        case FamilyTag::Crra: return {false, std::numeric_limits<double>::infinity()};
    }
    throw std::logic_error("inada_limit: unknown family");
}

std::vector<bool> corner_deviation_test(const UtilityFamily& family, const Beliefs& beliefs,
                                        const Observation& obs, size_t deviation_state,
                                        const std::vector<double>& epsilons) {
    auto corner = corner_state(obs);
    if (!corner) throw ValidationError("corner_deviation_test: observation is diversified");
    const size_t a = *corner;
    if (deviation_state == a || deviation_state >= obs.num_states())
        throw ValidationError("corner_deviation_test: invalid deviation state");
    const double w = to_double(obs.demand[a]);
    const double price_ratio = to_double(obs.prices[deviation_state] / obs.prices[a]);
    const double pi_a = to_double(beliefs.probabilities[a]);
    const double pi_d = to_double(beliefs.probabilities[deviation_state]);

    std::vector<bool> verdicts;
    verdicts.reserve(epsilons.size());
    for (double eps : epsilons) {
        double remaining = w - price_ratio * eps;
        if (eps < 0 || remaining < 0)
            throw ValidationError("corner_deviation_test: epsilon makes the deviation infeasible");
        double eu_corner = pi_a * evaluate(family, w);
        double eu_deviated = pi_a * evaluate(family, remaining) + pi_d * evaluate(family, eps);
        verdicts.push_back(eu_corner >= eu_deviated);
    }
    return verdicts;
}

std::optional<double> find_violating_epsilon(const UtilityFamily& family, const Beliefs& beliefs,
                                             const Observation& obs, size_t deviation_state,
                                             int grid_points) {
    auto corner = corner_state(obs);
    if (!corner) throw ValidationError("find_violating_epsilon: observation is diversified");
    const double w = to_double(obs.demand[*corner]);
    const double price_ratio = to_double(obs.prices[deviation_state] / obs.prices[*corner]);
    const double eps_max = 0.5 * w / price_ratio;
    for (int j = 0; j < grid_points; ++j) {
        double eps = eps_max * std::pow(10.0, -0.25 * j);
        auto verdict = corner_deviation_test(family, beliefs, obs, deviation_state, {eps});
        if (!verdict[0]) return eps;
    }
    return std::nullopt;
}

}  // namespace seu
