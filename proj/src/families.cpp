#include "seu/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace seu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_nonnegative(double x) {
    if (x < 0) throw std::domain_error("utility argument must be nonnegative");
}

}  // namespace

FamilyTag family_tag(const UtilityFamily& family) {
    return std::visit(overloaded{[](const ShiftedPower&) { return FamilyTag::ShiftedPower; },
                                 [](const Cara&) { return FamilyTag::Cara; },
                                 [](const Quadratic&) { return FamilyTag::Quadratic; },
                                 [](const Hyperbolic&) { return FamilyTag::Hyperbolic; },
                                 [](const Linear&) { return FamilyTag::Linear; },
                                 [](const ConvexQuadratic&) { return FamilyTag::ConvexQuadratic; },
                                 [](const Crra&) { return FamilyTag::Crra; }},
                      family);
}

std::string family_name(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::ShiftedPower: return "shifted_power";
        case FamilyTag::Cara: return "cara";
        case FamilyTag::Quadratic: return "quadratic";
        case FamilyTag::Hyperbolic: return "hyperbolic";
        case FamilyTag::Linear: return "linear";
        case FamilyTag::ConvexQuadratic: return "convex_quadratic";
        case FamilyTag::Crra: return "crra";
    }
    return "?";
}

std::optional<FamilyTag> family_tag_from_name(const std::string& name) {
    for (FamilyTag tag : {FamilyTag::ShiftedPower, FamilyTag::Cara, FamilyTag::Quadratic,
                          FamilyTag::Hyperbolic, FamilyTag::Linear, FamilyTag::ConvexQuadratic,
                          FamilyTag::Crra})
        if (family_name(tag) == name) return tag;
    return std::nullopt;
}

bool family_is_concave(FamilyTag tag) {
    return tag != FamilyTag::ConvexQuadratic;
}

bool family_is_convex(FamilyTag tag) {
    return tag == FamilyTag::ConvexQuadratic || tag == FamilyTag::Linear;
}

void validate_family(const UtilityFamily& family) {
    std::visit(overloaded{[](const ShiftedPower& f) {
                              if (!(f.alpha > 0 && f.alpha < 1))
                                  throw std::domain_error("shifted_power: alpha must be in (0,1)");
                              if (!(f.c > 0))
                                  throw std::domain_error("shifted_power: c must be > 0");
                          },
                          [](const Cara& f) {
                              if (!(f.beta > 0)) throw std::domain_error("cara: beta must be > 0");
                          },
                          [](const Quadratic& f) {
                              if (!(f.theta > 0 && f.lambda > 0))
                                  throw std::domain_error("quadratic: theta and lambda must be > 0");
                          },
                          [](const Hyperbolic& f) {
                              if (!(f.gamma > 0))
                                  throw std::domain_error("hyperbolic: gamma must be > 0");
                          },
                          [](const Linear&) {},
                          [](const ConvexQuadratic& f) {
                              if (!(f.eps > 0))
                                  throw std::domain_error("convex_quadratic: eps must be > 0");
                          },
                          [](const Crra& f) {
                              if (!(f.alpha > 0 && f.alpha < 1))
                                  throw std::domain_error("crra: alpha must be in (0,1)");
                          }},
               family);
}

double monotone_upper(const UtilityFamily& family) {
    if (const auto* q = std::get_if<Quadratic>(&family)) return q->theta / (2.0 * q->lambda);
    return kInf;
}

double evaluate(const UtilityFamily& family, double x) {
    require_nonnegative(x);
    return std::visit(
        overloaded{[x](const ShiftedPower& f) { return std::pow(x + f.c, f.alpha) - std::pow(f.c, f.alpha); },
                   [x](const Cara& f) { return 1.0 - std::exp(-f.beta * x); },
                   [x](const Quadratic& f) { return f.theta * x - f.lambda * x * x; },
                   [x](const Hyperbolic& f) { return x / (1.0 + f.gamma * x); },
                   [x](const Linear&) { return x; },
                   [x](const ConvexQuadratic& f) { return x + f.eps * x * x; },
                   [x](const Crra& f) { return std::pow(x, f.alpha); }},
        family);
}

double uprime(const UtilityFamily& family, double x) {
    require_nonnegative(x);
    return std::visit(
        overloaded{[x](const ShiftedPower& f) { return f.alpha * std::pow(x + f.c, f.alpha - 1.0); },
                   [x](const Cara& f) { return f.beta * std::exp(-f.beta * x); },
                   [x](const Quadratic& f) { return f.theta - 2.0 * f.lambda * x; },
                   [x](const Hyperbolic& f) {
                       double d = 1.0 + f.gamma * x;
                       return 1.0 / (d * d);
                   },
                   [x](const Linear&) { return 1.0; },
                   [x](const ConvexQuadratic& f) { return 1.0 + 2.0 * f.eps * x; },
                   [x](const Crra& f) {
                       return x == 0.0 ? kInf : f.alpha * std::pow(x, f.alpha - 1.0);
                   }},
        family);
}

double marginal_ratio(const UtilityFamily& family, double x) {
    require_nonnegative(x);
    return std::visit(
        overloaded{[x](const ShiftedPower& f) { return std::pow((x + f.c) / f.c, f.alpha - 1.0); },
                   [x](const Cara& f) { return std::exp(-f.beta * x); },
                   [x](const Quadratic& f) { return 1.0 - 2.0 * (f.lambda / f.theta) * x; },
                   [x](const Hyperbolic& f) {
                       double d = 1.0 + f.gamma * x;
                       return 1.0 / (d * d);
                   },
                   [x](const Linear&) { return 1.0; },
                   [x](const ConvexQuadratic& f) { return 1.0 + 2.0 * f.eps * x; },
                   [](const Crra&) -> double {
                       throw std::domain_error("crra: u'(0) is infinite, marginal ratio undefined");
                   }},
        family);
}

UtilityFamily scale(const UtilityFamily& family, double kappa) {
    if (!(kappa > 0.0 && kappa <= 1.0)) throw std::domain_error("scale: kappa must be in (0,1]");
    return std::visit(
        overloaded{[kappa](ShiftedPower f) -> UtilityFamily {
                       // (kx + c)^a ~ k^a (x + c/k)^a, cardinally equivalent
                       f.c /= kappa;
                       return f;
                   },
                   [kappa](Cara f) -> UtilityFamily {
                       f.beta *= kappa;
                       return f;
                   },
                   [kappa](Quadratic f) -> UtilityFamily {
                       // t(kx) - l(kx)^2 ~ t x - (kl) x^2 after dividing by k
                       f.lambda *= kappa;
                       return f;
                   },
                   [kappa](Hyperbolic f) -> UtilityFamily {
                       f.gamma *= kappa;
                       return f;
                   },
                   [](Linear f) -> UtilityFamily { return f; },
                   [kappa](ConvexQuadratic f) -> UtilityFamily {
                       f.eps *= kappa;
                       return f;
                   },
                   [](Crra f) -> UtilityFamily { return f; }},  // x^a scales cardinally
        family);
}

MrsReport mrs_condition(const UtilityFamily& family, const Beliefs& beliefs,
                        const Observation& obs) {
    auto corner = corner_state(obs);
    if (!corner) throw ValidationError("mrs_condition: observation has no corner state");
    const size_t a = *corner;
    const double w = to_double(obs.demand[a]);
    const double mr = marginal_ratio(family, w);

    MrsReport report;
    for (size_t s = 0; s < obs.prices.size(); ++s) {
        if (s == a) continue;
        double lhs = to_double(beliefs.probabilities[a] / beliefs.probabilities[s]) * mr;
        double rhs = to_double(obs.prices[a] / obs.prices[s]);
        double margin = lhs - rhs;
        report.margins.push_back({s, margin});
        if (margin < 0 && report.holds) {
            report.holds = false;
            report.violated_state = s;
        }
    }
    return report;
}

Rat corner_ratio(const Beliefs& beliefs, const Observation& obs, size_t corner,
                 size_t* argmin_state) {
    std::optional<Rat> best;
    for (size_t s = 0; s < obs.prices.size(); ++s) {
        if (s == corner) continue;
        Rat r = (beliefs.probabilities[corner] * obs.prices[s]) /
                (beliefs.probabilities[s] * obs.prices[corner]);
        if (!best || r < *best) {
            best = r;
            if (argmin_state) *argmin_state = s;
        }
    }
    if (!best) throw ValidationError("corner_ratio: single-state observation has no alternative");
    return *best;
}

namespace {

struct CornerInfo {
    size_t obs;
    Rat ratio;   // min corner ratio over alternative states
    Rat wealth;  // the positive demand coordinate w^i
};

std::vector<CornerInfo> collect_corners(const Beliefs& beliefs, const Dataset& data) {
    validate_beliefs(beliefs);
    std::vector<CornerInfo> corners;
    for (size_t i = 0; i < data.num_observations(); ++i) {
        const auto& obs = data.observations[i];
        auto corner = corner_state(obs);
        if (!corner)
            throw ValidationError("solve_region: observation " + std::to_string(i + 1) +
                                  " is diversified (no corner state)");
        if (obs.num_states() < 2) continue;  // unconstrained
        corners.push_back({i, corner_ratio(beliefs, obs, *corner), obs.demand[*corner]});
    }
    return corners;
}

ParameterRegion empty_region(FamilyTag tag, size_t binding, const std::string& note) {
    ParameterRegion region;
    region.family = tag;
    region.kind = RegionKind::Empty;
    region.binding_observation = static_cast<int>(binding);
    region.note = note;
    return region;
}

ParameterRegion solve_cara(const std::vector<CornerInfo>& corners) {
    ParameterRegion region;
    region.family = FamilyTag::Cara;
    double best = kInf;
    for (const auto& c : corners) {
        if (c.ratio <= 1)
            return empty_region(FamilyTag::Cara, c.obs,
                                "requires exp(-beta w) >= 1/ratio with ratio <= 1");
        double bound = std::log(to_double(c.ratio)) / to_double(c.wealth);
        if (bound < best) {
            best = bound;
            region.endpoint_ratio = c.ratio;
            region.endpoint_scale = c.wealth;
            region.binding_observation = static_cast<int>(c.obs);
        }
    }
    region.kind = RegionKind::Interval;
    region.lower = 0.0;
    region.upper = best;
    region.closed_lower = false;
    region.closed_upper = std::isfinite(best);
    region.lower_expr = "0";
    region.upper_expr = std::isfinite(best) ? "ln(" + rat_to_string(*region.endpoint_ratio) +
                                                  ")/" + rat_to_string(*region.endpoint_scale)
                                            : "inf";
    return region;
}

ParameterRegion solve_shifted_power(const std::vector<CornerInfo>& corners, const Rat& c) {
    if (c <= 0) throw std::domain_error("solve_region: shifted_power c must be > 0");
    ParameterRegion region;
    region.family = FamilyTag::ShiftedPower;
    region.fixed_c = to_double(c);
    double best = 0.0;
    bool bound_set = false;
    for (const auto& info : corners) {
        if (info.ratio <= 1)
            return empty_region(FamilyTag::ShiftedPower, info.obs,
                                "threshold 1 - ln(ratio)/ln((w+c)/c) reaches 1 when ratio <= 1");
        Rat base = (info.wealth + c) / c;  // > 1
        double threshold =
            1.0 - std::log(to_double(info.ratio)) / std::log(to_double(base));
        if (!bound_set || threshold > best) {
            best = threshold;
            bound_set = true;
            region.endpoint_ratio = info.ratio;
            region.endpoint_base = base;
            region.binding_observation = static_cast<int>(info.obs);
        }
    }
    region.kind = RegionKind::Interval;
    region.upper = 1.0;
    region.closed_upper = false;
    region.upper_expr = "1";
    if (!bound_set || best <= 0.0) {
        region.lower = 0.0;
        region.closed_lower = false;
        region.lower_expr = "0";
        region.endpoint_ratio.reset();
        region.endpoint_base.reset();
        region.binding_observation = -1;
    } else {
        region.lower = best;
        region.closed_lower = true;
        region.lower_expr = "1 + ln(1/(" + rat_to_string(*region.endpoint_ratio) + "))/ln(" +
                            rat_to_string(*region.endpoint_base) + ")";
    }
    return region;
}

ParameterRegion solve_quadratic(const std::vector<CornerInfo>& corners) {
    ParameterRegion region;
    region.family = FamilyTag::Quadratic;
    std::optional<Rat> bound;
    for (const auto& c : corners) {
        if (c.ratio <= 1)
            return empty_region(FamilyTag::Quadratic, c.obs,
                                "requires 1 - 2(lambda/theta) w >= 1/ratio with ratio <= 1");
        Rat b = (1 - 1 / c.ratio) / (2 * c.wealth);
        if (!bound || b < *bound) {
            bound = b;
            region.binding_observation = static_cast<int>(c.obs);
        }
    }
    // monotone-range requirement: peak theta/(2 lambda) >= max observed w
    std::optional<Rat> max_w;
    size_t max_w_obs = 0;
    for (const auto& c : corners)
        if (!max_w || c.wealth > *max_w) {
            max_w = c.wealth;
            max_w_obs = c.obs;
        }
    if (max_w) {
        Rat mono = 1 / (2 * *max_w);
        if (!bound || mono < *bound) {
            bound = mono;
            region.binding_observation = static_cast<int>(max_w_obs);
            region.note = "bound by monotone range, not the MRS condition";
        }
    }
    if (!bound) {
        region.kind = RegionKind::All;
        return region;
    }
    if (*bound <= 0) return empty_region(FamilyTag::Quadratic, region.binding_observation, region.note);
    region.kind = RegionKind::HalfSpace;
    region.ratio_bound = *bound;
    region.upper = to_double(*bound);
    region.closed_upper = true;
    region.upper_expr = rat_to_string(*bound);
    return region;
}

ParameterRegion solve_hyperbolic(const std::vector<CornerInfo>& corners) {
    ParameterRegion region;
    region.family = FamilyTag::Hyperbolic;
    double best = kInf;
    for (const auto& c : corners) {
        if (c.ratio <= 1)
            return empty_region(FamilyTag::Hyperbolic, c.obs,
                                "requires (1 + gamma w)^2 <= ratio with ratio <= 1");
        double bound = (std::sqrt(to_double(c.ratio)) - 1.0) / to_double(c.wealth);
        if (bound < best) {
            best = bound;
            region.endpoint_ratio = c.ratio;
            region.endpoint_scale = c.wealth;
            region.binding_observation = static_cast<int>(c.obs);
        }
    }
    region.kind = RegionKind::Interval;
    region.lower = 0.0;
    region.upper = best;
    region.closed_lower = false;
    region.closed_upper = std::isfinite(best);
    region.lower_expr = "0";
    region.upper_expr = std::isfinite(best)
                            ? "(sqrt(" + rat_to_string(*region.endpoint_ratio) + ") - 1)/" +
                                  rat_to_string(*region.endpoint_scale)
                            : "inf";
    return region;
}

ParameterRegion solve_all_or_empty(FamilyTag tag, const std::vector<CornerInfo>& corners,
                                   bool strict) {
    ParameterRegion region;
    region.family = tag;
    for (const auto& c : corners) {
        bool ok = strict ? c.ratio > 1 : c.ratio >= 1;
        if (!ok)
            return empty_region(tag, c.obs,
                                strict ? "needs strict ratio dominance (convex uniqueness)"
                                       : "belief/price ratio dominance fails");
    }
    region.kind = RegionKind::All;
    return region;
}

}  // namespace

ParameterRegion solve_region(FamilyTag tag, const Beliefs& beliefs, const Dataset& data,
                             const Rat& shifted_power_c) {
    auto corners = collect_corners(beliefs, data);
    switch (tag) {
        case FamilyTag::Cara: return solve_cara(corners);
        case FamilyTag::ShiftedPower: return solve_shifted_power(corners, shifted_power_c);
        case FamilyTag::Quadratic: return solve_quadratic(corners);
        case FamilyTag::Hyperbolic: return solve_hyperbolic(corners);
        case FamilyTag::Linear: return solve_all_or_empty(FamilyTag::Linear, corners, false);
        case FamilyTag::ConvexQuadratic:
            return solve_all_or_empty(FamilyTag::ConvexQuadratic, corners, true);
        case FamilyTag::Crra: {
            auto region = empty_region(FamilyTag::Crra, 0, "infinite marginal utility at zero");
            region.binding_observation = -1;
            return region;
        }
    }
    throw std::logic_error("solve_region: unknown family tag");
}

std::optional<UtilityFamily> region_interior_family(const ParameterRegion& region) {
    if (region.empty()) return std::nullopt;
    switch (region.family) {
        case FamilyTag::Cara:
            return Cara{region.kind == RegionKind::All ? 1.0 : region.upper / 2.0};
        case FamilyTag::ShiftedPower: {
            double lo = region.lower > 0 ? region.lower : 0.0;
            return ShiftedPower{(lo + 1.0) / 2.0, region.fixed_c};
        }
        case FamilyTag::Quadratic: {
            if (region.kind == RegionKind::All) return Quadratic{1.0, 1e-9};
            double bound = to_double(*region.ratio_bound);
            return Quadratic{1.0, bound / 2.0};
        }
        case FamilyTag::Hyperbolic:
            return Hyperbolic{region.kind == RegionKind::All ? 1.0 : region.upper / 2.0};
        case FamilyTag::Linear: return Linear{};
        case FamilyTag::ConvexQuadratic: return ConvexQuadratic{1.0};
        case FamilyTag::Crra: return std::nullopt;
    }
    return std::nullopt;
}

std::map<FamilyTag, ParameterRegion> all_family_report(const Beliefs& beliefs,
                                                       const Dataset& data,
                                                       const Rat& shifted_power_c) {
    std::map<FamilyTag, ParameterRegion> report;
    for (FamilyTag tag : {FamilyTag::ShiftedPower, FamilyTag::Cara, FamilyTag::Quadratic,
                          FamilyTag::Hyperbolic, FamilyTag::Linear, FamilyTag::ConvexQuadratic,
                          FamilyTag::Crra})
        report.emplace(tag, solve_region(tag, beliefs, data, shifted_power_c));
    return report;
}

std::string region_to_json(const ParameterRegion& region) {
    nlohmann::json doc;
    doc["family"] = family_name(region.family);
    nlohmann::json r;
    switch (region.kind) {
        case RegionKind::Empty: r["type"] = "empty"; break;
        case RegionKind::All: r["type"] = "all"; break;
        case RegionKind::HalfSpace:
            r["type"] = "half_space";
            r["lambda_over_theta_max"] = rat_to_string(*region.ratio_bound);
            r["closed_upper"] = true;
            break;
        case RegionKind::Interval:
            r["type"] = "interval";
            r["lower"] = region.lower_expr;
            r["upper"] = region.upper_expr;
            {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.17g", region.lower);
                r["lower_decimal"] = std::string(buf);
                std::snprintf(buf, sizeof(buf), "%.17g", region.upper);
                r["upper_decimal"] = std::string(buf);
            }
            r["closed_lower"] = region.closed_lower;
            r["closed_upper"] = region.closed_upper;
            break;
    }
    doc["region"] = std::move(r);
    if (region.binding_observation >= 0)
        doc["binding_observation"] = region.binding_observation + 1;
    if (!region.note.empty()) doc["note"] = region.note;
    if (region.family == FamilyTag::ShiftedPower && region.kind != RegionKind::Empty)
        doc["fixed_c"] = region.fixed_c;
    return doc.dump();
}

}  // namespace seu
