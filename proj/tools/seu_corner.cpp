// Command-line surface over the dataset model, axiom tests, belief recovery,
// family region solvers and the brute-force verification oracle.
//
// Exit codes: 0 pass/feasible, 1 fail/infeasible/invalid, 2 input or usage
// error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <array>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "seu/axioms.hpp"
#include "seu/beliefs.hpp"
#include "seu/families.hpp"
#include "seu/model.hpp"
#include "seu/rational.hpp"
#include "seu/synth.hpp"
#include "seu/verify.hpp"

namespace {

using nlohmann::json;
using namespace seu;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::map<std::string, double> parse_params(const std::string& text) {
    std::map<std::string, double> params;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value in --params: " + item);
        params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return params;
}

double take(std::map<std::string, double>& params, const std::string& key,
            std::optional<double> fallback = {}) {
    auto it = params.find(key);
    if (it == params.end()) {
        if (fallback) return *fallback;
        throw ParseError("missing parameter '" + key + "'");
    }
    double v = it->second;
    params.erase(it);
    return v;
}

UtilityFamily make_family(FamilyTag tag, std::map<std::string, double> params) {
    UtilityFamily family;
    switch (tag) {
        case FamilyTag::ShiftedPower:
            family = ShiftedPower{take(params, "alpha"), take(params, "c", 1.0)};
            break;
        case FamilyTag::Cara: family = Cara{take(params, "beta")}; break;
        case FamilyTag::Quadratic:
            family = Quadratic{take(params, "theta"), take(params, "lambda")};
            break;
        case FamilyTag::Hyperbolic: family = Hyperbolic{take(params, "gamma")}; break;
        case FamilyTag::Linear: family = Linear{}; break;
        case FamilyTag::ConvexQuadratic: family = ConvexQuadratic{take(params, "eps")}; break;
        case FamilyTag::Crra: family = Crra{take(params, "alpha")}; break;
    }
    if (!params.empty())
        throw ParseError("unknown parameter '" + params.begin()->first + "' for family " +
                         family_name(tag));
    validate_family(family);
    return family;
}

FamilyTag parse_family_tag(const std::string& name) {
    auto tag = family_tag_from_name(name);
    if (!tag) throw ParseError("unknown family '" + name + "'");
    return *tag;
}

int cmd_validate(const std::string& file) {
    auto data = load_dataset_file(file);
    json doc;
    doc["states"] = data.num_states();
    doc["observations"] = data.num_observations();
    doc["corners"] = json::array();
    doc["all_zero_demands"] = json::array();
    for (size_t i = 0; i < data.num_observations(); ++i) {
        auto corner = corner_state(data.observations[i]);
        doc["corners"].push_back(corner ? json(data.states[*corner]) : json(nullptr));
        if (!corner && wealth(data.observations[i]) == 0)
            doc["all_zero_demands"].push_back(i + 1);  // accepted, flagged
    }
    std::cout << doc.dump(2) << "\n";
    return kPass;
}

int cmd_garp(const std::string& file) {
    auto data = load_dataset_file(file);
    auto result = check_garp(data);
    if (result.pass) {
        std::cout << R"({"axiom":"garp","pass":true})" << "\n";
        return kPass;
    }
    std::cout << garp_failure_json(result) << "\n";
    return kFail;
}

int cmd_sarseu(const std::string& file, int max_pairs, bool lp, size_t budget) {
    auto data = load_dataset_file(file);
    if (lp) {
        auto oracle = sarseu_lp_oracle(data);
        json doc;
        doc["axiom"] = "sarseu_lp";
        doc["violation_found"] = oracle.violation_found;
        doc["optimum"] = oracle.optimum;
        if (oracle.near_zero_warning) doc["warning"] = "optimum within tolerance of 0";
        if (oracle.violation_found) {
            for (size_t j = 0; j < oracle.pairs.size(); ++j)
                if (oracle.weights[j] > 1e-12)
                    doc["weights"].push_back({{"pair",
                                               {oracle.pairs[j].obs_hi + 1, oracle.pairs[j].state_hi + 1,
                                                oracle.pairs[j].obs_lo + 1, oracle.pairs[j].state_lo + 1}},
                                              {"weight", oracle.weights[j]}});
        }
        std::cout << doc.dump() << "\n";
        return oracle.violation_found ? kFail : kPass;
    }
    size_t bound = max_pairs > 0 ? size_t(max_pairs) : default_max_pairs(data);
    auto result = check_sarseu(data, bound, budget);
    switch (result.verdict) {
        case SarseuVerdict::Pass:
            std::cout << R"({"axiom":"sarseu","pass":true,"max_pairs":)" << bound << "}\n";
            return kPass;
        case SarseuVerdict::Fail:
            std::cout << sarseu_failure_json(result) << "\n";
            return kFail;
        case SarseuVerdict::Inconclusive:
            std::cerr << "inconclusive at bound " << bound << " (node budget " << budget
                      << " exhausted)\n";
            return kUsage;
    }
    return kUsage;
}

int cmd_corners(const std::string& file) {
    auto data = load_dataset_file(file);
    json doc = json::array();
    bool all_corner = true;
    for (size_t i = 0; i < data.num_observations(); ++i) {
        auto corner = corner_state(data.observations[i]);
        json row;
        row["observation"] = i + 1;
        row["corner_state"] = corner ? json(data.states[*corner]) : json(nullptr);
        row["wealth"] = rat_to_string(wealth(data.observations[i]));
        all_corner &= corner.has_value();
        doc.push_back(std::move(row));
    }
    std::cout << doc.dump(2) << "\n";
    return all_corner ? kPass : kFail;
}

int cmd_beliefs(const std::string& file, bool weak, const std::string& pi_text) {
    auto data = load_dataset_file(file);
    if (!pi_text.empty()) {
        auto beliefs = parse_beliefs(pi_text);
        auto report = check_belief_compatibility(data, beliefs, !weak);
        json doc;
        doc["pass"] = report.pass;
        doc["mode"] = weak ? "weak" : "strict";
        for (const auto& s : report.slacks)
            doc["slacks"].push_back({{"observation", s.obs + 1},
                                     {"state", data.states[s.state]},
                                     {"slack", rat_to_string(s.slack)}});
        std::cout << doc.dump(2) << "\n";
        return report.pass ? kPass : kFail;
    }
    auto result = find_beliefs(data);
    if (result.feasible) {
        std::cout << beliefs_to_json(result.beliefs, result.min_slack) << "\n";
        return kPass;
    }
    json doc;
    doc["feasible"] = false;
    for (const auto& c : result.witness)
        doc["witness"].push_back({{"observation", c.obs + 1},
                                  {"corner_state", data.states[c.corner]},
                                  {"other_state", data.states[c.other]},
                                  {"required_ratio_above", rat_to_string(c.price_ratio)}});
    std::cout << doc.dump(2) << "\n";
    return kFail;
}

int cmd_solve(const std::string& file, const std::string& pi_text, const std::string& family,
              const std::string& fix) {
    auto data = load_dataset_file(file);
    auto beliefs = parse_beliefs(pi_text);
    Rat c = 1;
    if (!fix.empty()) {
        if (fix.rfind("c=", 0) != 0) throw ParseError("--fix expects c=<rational>");
        c = parse_rational(fix.substr(2));
    }
    auto region = solve_region(parse_family_tag(family), beliefs, data, c);
    std::cout << region_to_json(region) << "\n";
    return region.empty() ? kFail : kPass;
}

int cmd_verify(const std::string& file, const std::string& pi_text, const std::string& family,
               const std::string& params, size_t grid, double tol) {
    auto data = load_dataset_file(file);
    auto beliefs = parse_beliefs(pi_text);
    auto f = make_family(parse_family_tag(family), parse_params(params));
    auto cert = verify_certificate(data, beliefs, f, tol, grid);
    std::cout << certificate_to_json(cert) << "\n";
    return cert.valid ? kPass : kFail;
}

int cmd_synth(const std::string& family, const std::string& params, const std::string& pi_text,
              const std::string& budgets_file) {
    auto beliefs = parse_beliefs(pi_text);
    auto f = make_family(parse_family_tag(family),
                         params.empty() ? std::map<std::string, double>{} : parse_params(params));
    std::ifstream in(budgets_file);
    if (!in) throw ParseError("cannot open '" + budgets_file + "'");
    json doc = json::parse(in);
    if (doc.is_object() && doc.contains("budgets")) doc = doc["budgets"];
    if (!doc.is_array()) throw ParseError("budgets file must be a JSON array of budgets");
    std::vector<Budget> budgets;
    for (const auto& row : doc) {
        Budget budget;
        for (const auto& cell : row.at("prices"))
            budget.prices.push_back(parse_rational(cell.get<std::string>()));
        budget.wealth = parse_rational(row.at("wealth").get<std::string>());
        budgets.push_back(std::move(budget));
    }
    auto data = generate_dataset(f, beliefs, budgets);
    std::cout << dataset_to_json(data) << "\n";
    return kPass;
}

// ---------------------------------------------------------------------------
// plotting (2-state panels: budget line + certified indifference curve)

double u_inverse(const UtilityFamily& family, double target, double hi) {
    if (target <= 0) return 0.0;
    double lo = 0.0;
    if (evaluate(family, hi) < target) return hi;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (evaluate(family, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct PlotCurves {
    // columns: observation, curve (budget|indifference), x1, x2
    std::vector<std::array<std::string, 4>> rows;
    std::string svg;
};

PlotCurves build_plot(const Dataset& data, const Beliefs& beliefs, const UtilityFamily& family,
                      size_t samples = 512) {
    if (data.num_states() != 2) throw ParseError("plot-data supports 2-state datasets only");
    PlotCurves plot;
    std::ostringstream svg;
    const double panel = 320.0, margin = 40.0;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << data.num_observations() * (panel + margin) + margin << "\" height=\"" << panel + 2 * margin
        << "\">\n";
    for (size_t i = 0; i < data.num_observations(); ++i) {
        const auto& obs = data.observations[i];
        double w = to_double(wealth(obs));
        double p0 = to_double(obs.prices[0]), p1 = to_double(obs.prices[1]);
        double xmax0 = w / p0, xmax1 = w / p1;
        double span = std::max(xmax0, xmax1) * 1.1;
        double ox = margin + i * (panel + margin), oy = margin + panel;
        auto px = [&](double x) { return ox + x / span * panel; };
        auto py = [&](double y) { return oy - y / span * panel; };

        std::vector<double> observed{to_double(obs.demand[0]), to_double(obs.demand[1])};
        double level = expected_utility(family, beliefs, observed);
        double pi0 = to_double(beliefs.probabilities[0]);
        double pi1 = to_double(beliefs.probabilities[1]);

        std::ostringstream budget_pts, indiff_pts;
        for (size_t j = 0; j < samples; ++j) {
            double x0 = xmax0 * double(j) / double(samples - 1);
            double x1 = (w - p0 * x0) / p1;
            plot.rows.push_back({std::to_string(i + 1), "budget", std::to_string(x0),
                                 std::to_string(x1)});
            budget_pts << px(x0) << "," << py(x1) << " ";

            double residual = (level - pi0 * evaluate(family, x0)) / pi1;
            if (residual >= 0) {
                double xi = u_inverse(family, residual, span);
                plot.rows.push_back({std::to_string(i + 1), "indifference", std::to_string(x0),
                                     std::to_string(xi)});
                indiff_pts << px(x0) << "," << py(xi) << " ";
            }
        }
        svg << "  <rect x=\"" << ox << "\" y=\"" << margin << "\" width=\"" << panel
            << "\" height=\"" << panel << "\" fill=\"none\" stroke=\"#888\"/>\n";
        svg << "  <polyline points=\"" << budget_pts.str()
            << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
        svg << "  <polyline points=\"" << indiff_pts.str()
            << "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
        svg << "  <circle cx=\"" << px(observed[0]) << "\" cy=\"" << py(observed[1])
            << "\" r=\"4\" fill=\"#2ca02c\"/>\n";
        svg << "  <text x=\"" << ox + 4 << "\" y=\"" << margin - 6 << "\" font-size=\"12\">obs "
            << i + 1 << "</text>\n";
    }
    svg << "</svg>\n";
    plot.svg = svg.str();
    return plot;
}

int cmd_plot_data(const std::string& file, const std::string& pi_text, const std::string& family,
                  const std::string& params, const std::string& out_prefix) {
    auto data = load_dataset_file(file);
    auto beliefs = parse_beliefs(pi_text);
    auto f = make_family(parse_family_tag(family),
                         params.empty() ? std::map<std::string, double>{} : parse_params(params));
    auto plot = build_plot(data, beliefs, f);
    {
        std::ofstream csv(out_prefix + ".csv");
        csv << "observation,curve,x1,x2\n";
        for (const auto& row : plot.rows)
            csv << row[0] << "," << row[1] << "," << row[2] << "," << row[3] << "\n";
    }
    {
        std::ofstream svg(out_prefix + ".svg");
        svg << plot.svg;
    }
    std::cout << "wrote " << out_prefix << ".csv and " << out_prefix << ".svg\n";
    return kPass;
}

int cmd_report(const std::string& file, const std::string& pi_text, const std::string& fix,
               const std::string& plot_prefix) {
    auto data = load_dataset_file(file);
    json doc;
    doc["dataset"] = {{"states", data.num_states()}, {"observations", data.num_observations()}};

    auto garp = check_garp(data);
    doc["garp"] = garp.pass;
    auto sarseu = check_sarseu(data, default_max_pairs(data));
    doc["sarseu"] = sarseu.verdict == SarseuVerdict::Pass
                        ? "pass"
                        : (sarseu.verdict == SarseuVerdict::Fail ? "fail" : "inconclusive");

    Beliefs beliefs;
    if (!pi_text.empty()) {
        beliefs = parse_beliefs(pi_text);
        doc["beliefs"] = json::parse(beliefs_to_json(beliefs));
        doc["beliefs"]["source"] = "given";
    } else {
        auto found = find_beliefs(data);
        if (!found.feasible) {
            doc["beliefs"] = {{"feasible", false}};
            std::cout << doc.dump(2) << "\n";
            return kFail;
        }
        beliefs = found.beliefs;
        doc["beliefs"] = json::parse(beliefs_to_json(beliefs, found.min_slack));
        doc["beliefs"]["source"] = "solved";
    }

    Rat c = 1;
    if (!fix.empty() && fix.rfind("c=", 0) == 0) c = parse_rational(fix.substr(2));

    bool all_valid = true;
    doc["families"] = json::array();
    for (const auto& [tag, region] : all_family_report(beliefs, data, c)) {
        json entry = json::parse(region_to_json(region));
        if (auto family = region_interior_family(region)) {
            auto cert = verify_certificate(data, beliefs, *family);
            entry["certificate"] = json::parse(certificate_to_json(cert));
            all_valid &= cert.valid;
        }
        doc["families"].push_back(std::move(entry));
    }
    std::cout << doc.dump(2) << "\n";

    if (!plot_prefix.empty()) {
        auto linear_plot = build_plot(data, beliefs, Linear{});
        std::ofstream svg(plot_prefix + ".svg");
        svg << linear_plot.svg;
    }
    return all_valid && garp.pass && sarseu.verdict == SarseuVerdict::Pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SEU rationalizability of non-diversified demand datasets"};
    app.require_subcommand(1);

    std::string file, pi, family, params, fix, budgets, out = "plot";
    int max_pairs = 0;
    bool lp = false, weak = false;
    size_t grid = 0, node_budget = 5'000'000;
    double tol = 1e-7;

    auto* validate = app.add_subcommand("validate", "parse and validate a dataset");
    validate->add_option("file", file)->required();

    auto* garp = app.add_subcommand("garp", "Generalized Axiom of Revealed Preference");
    garp->add_option("file", file)->required();

    auto* sarseu = app.add_subcommand("sarseu", "Strong Axiom of Revealed SEU");
    sarseu->add_option("file", file)->required();
    sarseu->add_option("--max-pairs", max_pairs, "sequence length bound (default 2*k*n)");
    sarseu->add_option("--node-budget", node_budget, "enumeration node budget");
    sarseu->add_flag("--lp-oracle", lp, "use the LP relaxation instead of enumeration");

    auto* corners = app.add_subcommand("corners", "corner state and wealth per observation");
    corners->add_option("file", file)->required();

    auto* beliefs_cmd = app.add_subcommand("beliefs", "find or test ratio-dominant beliefs");
    beliefs_cmd->add_option("file", file)->required();
    beliefs_cmd->add_option("--pi", pi, "test these beliefs instead of solving");
    beliefs_cmd->add_flag("--weak", weak, "weak slack test (default strict)");

    auto* solve = app.add_subcommand("solve", "exact parameter region for one family");
    solve->add_option("file", file)->required();
    solve->add_option("--pi", pi)->required();
    solve->add_option("--family", family)->required();
    solve->add_option("--fix", fix, "c=<rational> for shifted_power (default c=1)");

    auto* verify = app.add_subcommand("verify", "brute-force certificate check");
    verify->add_option("file", file)->required();
    verify->add_option("--pi", pi)->required();
    verify->add_option("--family", family)->required();
    verify->add_option("--params", params)->required();
    verify->add_option("--grid", grid, "grid points per face dimension");
    verify->add_option("--tol", tol, "EU gap tolerance");

    auto* synth = app.add_subcommand("synth", "generate a dataset from an SEU agent");
    synth->add_option("--family", family)->required();
    synth->add_option("--params", params);
    synth->add_option("--pi", pi)->required();
    synth->add_option("--budgets", budgets)->required();

    auto* report = app.add_subcommand("report", "full pipeline report");
    report->add_option("file", file)->required();
    report->add_option("--pi", pi, "beliefs (solved from the data when omitted)");
    report->add_option("--fix", fix, "c=<rational> for shifted_power");
    report->add_option("--plot", out, "also write <prefix>.svg")->expected(1)->default_str("");

    auto* plot = app.add_subcommand("plot-data", "budget/indifference curve samples");
    plot->add_option("file", file)->required();
    plot->add_option("--pi", pi)->required();
    plot->add_option("--family", family)->required();
    plot->add_option("--params", params);
    plot->add_option("--out", out, "output prefix (default 'plot')");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*validate) return cmd_validate(file);
        if (*garp) return cmd_garp(file);
        if (*sarseu) return cmd_sarseu(file, max_pairs, lp, node_budget);
        if (*corners) return cmd_corners(file);
        if (*beliefs_cmd) return cmd_beliefs(file, weak, pi);
        if (*solve) return cmd_solve(file, pi, family, fix);
        if (*verify) return cmd_verify(file, pi, family, params, grid, tol);
        if (*synth) return cmd_synth(family, params, pi, budgets);
        if (*report) return cmd_report(file, pi, fix, report->count("--plot") ? out : "");
        if (*plot) return cmd_plot_data(file, pi, family, params, out);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
