#include <doctest.h>

#include <cmath>
#include <random>

#include "seu/families.hpp"
#include "seu/model.hpp"

using namespace seu;

namespace {

Dataset example_dataset() { return load_dataset_file(std::string(SEU_TEST_DATA_DIR) + "/example.json"); }

Beliefs example_beliefs() { return Beliefs{{Rat(1, 4), Rat(3, 4)}}; }

std::vector<UtilityFamily> sample_members() {
    return {UtilityFamily{ShiftedPower{0.95, 1.0}}, UtilityFamily{Cara{0.002}},
            UtilityFamily{Quadratic{1.0, 0.001}},   UtilityFamily{Hyperbolic{0.001}},
            UtilityFamily{Linear{}},                UtilityFamily{ConvexQuadratic{0.5}},
            UtilityFamily{Crra{0.5}}};
}

}  // namespace

TEST_CASE("names round-trip and classification") {
    for (const auto& f : sample_members()) {
        auto tag = family_tag(f);
        auto back = family_tag_from_name(family_name(tag));
        REQUIRE(back.has_value());
        CHECK(*back == tag);
    }
    CHECK(!family_tag_from_name("cobb_douglas").has_value());
    CHECK(family_is_concave(FamilyTag::Cara));
    CHECK(family_is_concave(FamilyTag::Linear));
    CHECK(family_is_convex(FamilyTag::Linear));
    CHECK(family_is_convex(FamilyTag::ConvexQuadratic));
    CHECK(!family_is_concave(FamilyTag::ConvexQuadratic));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate_family(UtilityFamily{Cara{0.0}}), std::domain_error);
    CHECK_THROWS_AS(validate_family(UtilityFamily{Cara{-1.0}}), std::domain_error);
    CHECK_THROWS_AS(validate_family(UtilityFamily{ShiftedPower{1.0, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(validate_family(UtilityFamily{ShiftedPower{0.5, 0.0}}), std::domain_error);
    CHECK_THROWS_AS(validate_family(UtilityFamily{Quadratic{1.0, 0.0}}), std::domain_error);
    CHECK_THROWS_AS(validate_family(UtilityFamily{Hyperbolic{0.0}}), std::domain_error);
    CHECK_THROWS_AS(validate_family(UtilityFamily{ConvexQuadratic{0.0}}), std::domain_error);
    CHECK_THROWS_AS(validate_family(UtilityFamily{Crra{1.0}}), std::domain_error);
    for (const auto& f : sample_members()) CHECK_NOTHROW(validate_family(f));
}

TEST_CASE("evaluate: closed-form spot checks, u(0) = 0") {
    CHECK(evaluate(UtilityFamily{Cara{0.01}}, 0.0) == 0.0);
    CHECK(evaluate(UtilityFamily{Cara{0.01}}, 100.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(evaluate(UtilityFamily{Hyperbolic{1.0}}, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(evaluate(UtilityFamily{Quadratic{1.0, 0.00125}}, 100.0) ==
          doctest::Approx(87.5).epsilon(1e-12));
    CHECK(evaluate(UtilityFamily{ShiftedPower{0.5, 1.0}}, 3.0) ==
          doctest::Approx(1.0).epsilon(1e-12));  // sqrt(4) - sqrt(1)
    CHECK(evaluate(UtilityFamily{Linear{}}, 7.25) == doctest::Approx(7.25));
    CHECK(evaluate(UtilityFamily{ConvexQuadratic{0.5}}, 2.0) == doctest::Approx(4.0));
    CHECK(evaluate(UtilityFamily{Crra{0.5}}, 9.0) == doctest::Approx(3.0));
    for (const auto& f : sample_members()) {
        CHECK(evaluate(f, 0.0) == 0.0);
        CHECK_THROWS_AS(evaluate(f, -1.0), std::domain_error);
    }
}

TEST_CASE("marginal_ratio: closed forms") {
    double alpha = 0.95;
    CHECK(marginal_ratio(UtilityFamily{ShiftedPower{alpha, 1.0}}, 100.0) ==
          doctest::Approx(std::pow(101.0, alpha - 1.0)).epsilon(1e-12));
    CHECK(marginal_ratio(UtilityFamily{Cara{0.002}}, 100.0) ==
          doctest::Approx(std::exp(-0.2)).epsilon(1e-12));
    CHECK(marginal_ratio(UtilityFamily{Hyperbolic{0.003}}, 100.0) ==
          doctest::Approx(1.0 / (1.3 * 1.3)).epsilon(1e-12));
    CHECK(marginal_ratio(UtilityFamily{Quadratic{1.0, 0.001}}, 100.0) ==
          doctest::Approx(0.8).epsilon(1e-12));
    CHECK(marginal_ratio(UtilityFamily{Linear{}}, 123.0) == doctest::Approx(1.0));
    CHECK(marginal_ratio(UtilityFamily{ConvexQuadratic{0.01}}, 50.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(marginal_ratio(UtilityFamily{Crra{0.5}}, 10.0), std::domain_error);
    for (const auto& f : sample_members())
        if (family_tag(f) != FamilyTag::Crra) CHECK(marginal_ratio(f, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("marginal_ratio matches finite differences of evaluate") {
    for (const auto& f : sample_members()) {
        if (family_tag(f) == FamilyTag::Crra) continue;
        double h = 1e-6;
        double d0 = (evaluate(f, h) - evaluate(f, 0.0)) / h;
        for (double x : {0.5, 10.0, 75.0}) {
            double dx = (evaluate(f, x + h) - evaluate(f, x - h)) / (2 * h);
            CHECK(marginal_ratio(f, x) == doctest::Approx(dx / d0).epsilon(1e-4));
        }
    }
}

TEST_CASE("scale: closed-form parameter maps") {
    auto cara = scale(UtilityFamily{Cara{0.01}}, 0.5);
    CHECK(std::get<Cara>(cara).beta == doctest::Approx(0.005).epsilon(1e-15));
    auto hyp = scale(UtilityFamily{Hyperbolic{0.003}}, 1.0 / 3.0);
    CHECK(std::get<Hyperbolic>(hyp).gamma == doctest::Approx(0.001).epsilon(1e-15));
    auto sp = scale(UtilityFamily{ShiftedPower{0.9, 1.0}}, 0.25);
    CHECK(std::get<ShiftedPower>(sp).c == doctest::Approx(4.0).epsilon(1e-15));
    auto quad = scale(UtilityFamily{Quadratic{2.0, 0.001}}, 0.5);
    CHECK(std::get<Quadratic>(quad).theta == doctest::Approx(2.0));
    CHECK(std::get<Quadratic>(quad).lambda == doctest::Approx(0.0005).epsilon(1e-15));
    CHECK_THROWS_AS(scale(UtilityFamily{Cara{0.01}}, 0.0), std::domain_error);
    CHECK_THROWS_AS(scale(UtilityFamily{Cara{0.01}}, 1.5), std::domain_error);
}

TEST_CASE("scale is cardinal equivalence: ratios of utilities and marginals agree") {
    for (const auto& f : sample_members()) {
        for (double kappa : {1.0, 0.5, 0.125}) {
            auto g = scale(f, kappa);
            // u_g(x) = A * u_f(kappa x) for some A > 0: check via ratios
            double x1 = 3.0, x2 = 41.0;
            CHECK(evaluate(g, x1) / evaluate(g, x2) ==
                  doctest::Approx(evaluate(f, kappa * x1) / evaluate(f, kappa * x2))
                      .epsilon(1e-10));
            if (family_tag(f) != FamilyTag::Crra)
                CHECK(marginal_ratio(g, x1) ==
                      doctest::Approx(marginal_ratio(f, kappa * x1)).epsilon(1e-10));
        }
    }
}

TEST_CASE("corner ratios on the example") {
    auto data = example_dataset();
    auto beliefs = example_beliefs();
    size_t argmin = 99;
    CHECK(corner_ratio(beliefs, data.observations[0], 0, &argmin) == Rat(4, 3));
    CHECK(argmin == 1);
    CHECK(corner_ratio(beliefs, data.observations[1], 1) == 12);
    CHECK(corner_ratio(beliefs, data.observations[2], 1) == 9);
}

TEST_CASE("mrs_condition spot checks") {
    auto data = example_dataset();
    auto beliefs = example_beliefs();

    auto ok = mrs_condition(UtilityFamily{Cara{0.002}}, beliefs, data.observations[1]);
    CHECK(ok.holds);  // e^{0.002*80} = 1.17 <= 12

    CHECK(mrs_condition(UtilityFamily{Linear{}}, beliefs, data.observations[0]).holds);

    auto bad = mrs_condition(UtilityFamily{Cara{0.01}}, beliefs, data.observations[0]);
    CHECK(!bad.holds);  // e^{0.01*100} = e > 4/3
    REQUIRE(bad.violated_state.has_value());
    CHECK(*bad.violated_state == 1);
    REQUIRE(bad.margins.size() == 1);
    CHECK(bad.margins[0].margin < 0);
}

TEST_CASE("solve_region golden values on the example") {
    auto data = example_dataset();
    auto beliefs = example_beliefs();

    auto cara = solve_region(FamilyTag::Cara, beliefs, data);
    REQUIRE(cara.kind == RegionKind::Interval);
    CHECK(cara.lower == 0.0);
    CHECK(!cara.closed_lower);
    CHECK(cara.closed_upper);
    CHECK(cara.upper == doctest::Approx(std::log(4.0 / 3.0) / 100.0).epsilon(1e-14));
    CHECK(*cara.endpoint_ratio == Rat(4, 3));
    CHECK(*cara.endpoint_scale == 100);
    CHECK(cara.binding_observation == 0);
    // the paper's sample parameter sits inside
    CHECK(0.00285 < cara.upper);

    auto sp = solve_region(FamilyTag::ShiftedPower, beliefs, data);
    REQUIRE(sp.kind == RegionKind::Interval);
    CHECK(sp.lower == doctest::Approx(1.0 - std::log(4.0 / 3.0) / std::log(101.0)).epsilon(1e-14));
    CHECK(sp.lower == doctest::Approx(0.9378).epsilon(2e-4));
    CHECK(sp.closed_lower);
    CHECK(sp.upper == 1.0);
    CHECK(!sp.closed_upper);
    CHECK(*sp.endpoint_ratio == Rat(4, 3));
    CHECK(*sp.endpoint_base == 101);

    auto quad = solve_region(FamilyTag::Quadratic, beliefs, data);
    REQUIRE(quad.kind == RegionKind::HalfSpace);
    CHECK(*quad.ratio_bound == Rat(1, 800));  // lambda/theta <= 1/800, i.e. theta >= 800 lambda

    auto hyp = solve_region(FamilyTag::Hyperbolic, beliefs, data);
    REQUIRE(hyp.kind == RegionKind::Interval);
    // (sqrt(4/3) - 1)/100 = (2 sqrt(3) - 3)/300, exactly, via the audit pieces
    CHECK(*hyp.endpoint_ratio == Rat(4, 3));
    CHECK(*hyp.endpoint_scale == 100);
    CHECK(hyp.upper == doctest::Approx((2.0 * std::sqrt(3.0) - 3.0) / 300.0).epsilon(1e-14));

    CHECK(solve_region(FamilyTag::Linear, beliefs, data).kind == RegionKind::All);
    CHECK(solve_region(FamilyTag::ConvexQuadratic, beliefs, data).kind == RegionKind::All);

    auto crra = solve_region(FamilyTag::Crra, beliefs, data);
    CHECK(crra.kind == RegionKind::Empty);
    CHECK(crra.note.find("marginal utility") != std::string::npos);
}

TEST_CASE("all_family_report: six nonempty families, crra empty") {
    auto report = all_family_report(example_beliefs(), example_dataset());
    REQUIRE(report.size() == 7);
    for (const auto& [tag, region] : report)
        CHECK(region.empty() == (tag == FamilyTag::Crra));
}

TEST_CASE("boundary data: unit price ratio keeps linear but kills convex quadratic") {
    Dataset data;
    data.states = {"s1", "s2"};
    data.observations = {{{Rat(1), Rat(1)}, {Rat(10), Rat(0)}}};
    Beliefs half{{Rat(1, 2), Rat(1, 2)}};  // corner ratio exactly 1
    auto report = all_family_report(half, data);
    CHECK(report.at(FamilyTag::Linear).kind == RegionKind::All);
    CHECK(report.at(FamilyTag::ConvexQuadratic).empty());
    // strictly concave families need ratio > 1 and get nothing at ratio = 1
    CHECK(report.at(FamilyTag::Cara).empty());
    CHECK(report.at(FamilyTag::ShiftedPower).empty());
    CHECK(report.at(FamilyTag::Hyperbolic).empty());
    CHECK(report.at(FamilyTag::Quadratic).empty());
}

TEST_CASE("region soundness and tightness on the example") {
    auto data = example_dataset();
    auto beliefs = example_beliefs();
    auto report = all_family_report(beliefs, data);

    for (const auto& [tag, region] : report) {
        if (region.empty()) continue;
        auto member = region_interior_family(region);
        REQUIRE(member.has_value());
        for (const auto& obs : data.observations)
            CHECK(mrs_condition(*member, beliefs, obs).holds);
    }

    // endpoints are sharp: just outside, the binding observation fails
    double beyond = report.at(FamilyTag::Cara).upper * (1 + 1e-9);
    CHECK(!mrs_condition(UtilityFamily{Cara{beyond}}, beliefs, data.observations[0]).holds);
    double below = report.at(FamilyTag::ShiftedPower).lower * (1 - 1e-9);
    CHECK(!mrs_condition(UtilityFamily{ShiftedPower{below, 1.0}}, beliefs, data.observations[0])
               .holds);
    double past = report.at(FamilyTag::Hyperbolic).upper * (1 + 1e-9);
    CHECK(!mrs_condition(UtilityFamily{Hyperbolic{past}}, beliefs, data.observations[0]).holds);
    // quadratic: lambda/theta just over 1/800 fails, at 1/800 holds with equality
    CHECK(!mrs_condition(UtilityFamily{Quadratic{800.0, 1.0 + 1e-6}}, beliefs, data.observations[0])
               .holds);
    CHECK(mrs_condition(UtilityFamily{Quadratic{800.0, 1.0}}, beliefs, data.observations[0]).holds);
}

TEST_CASE("solve_region honors the fixed shift parameter") {
    auto data = example_dataset();
    auto beliefs = example_beliefs();
    auto sp4 = solve_region(FamilyTag::ShiftedPower, beliefs, data, Rat(4));
    REQUIRE(sp4.kind == RegionKind::Interval);
    CHECK(sp4.fixed_c == doctest::Approx(4.0));
    // (w + c)/c = 26 at the binding observation: alpha >= 1 - ln(4/3)/ln(26)
    CHECK(sp4.lower ==
          doctest::Approx(1.0 - std::log(4.0 / 3.0) / std::log(26.0)).epsilon(1e-14));
    CHECK(*sp4.endpoint_base == 26);
}

TEST_CASE("diversified observations are rejected") {
    auto data = example_dataset();
    data.observations[1].demand = {Rat(5), Rat(5)};
    CHECK_THROWS_AS(solve_region(FamilyTag::Cara, example_beliefs(), data), ValidationError);
}

TEST_CASE("region json uses one-based binding observation") {
    auto region = solve_region(FamilyTag::Cara, example_beliefs(), example_dataset());
    auto json = region_to_json(region);
    CHECK(json.find("\"binding_observation\":1") != std::string::npos);
    CHECK(json.find("\"family\":\"cara\"") != std::string::npos);
}
