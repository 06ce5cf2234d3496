#include <doctest.h>

#include <random>
#include <sstream>

#include "seu/model.hpp"

using namespace seu;

namespace {

Dataset example_dataset() { return load_dataset_file(std::string(SEU_TEST_DATA_DIR) + "/example.json"); }

Observation make_obs(std::vector<Rat> p, std::vector<Rat> x) { return Observation{std::move(p), std::move(x)}; }

}  // namespace

TEST_CASE("rational parsing") {
    CHECK(parse_rational("1/3") == Rat(1, 3));
    CHECK(parse_rational("0.25") == Rat(1, 4));
    CHECK(parse_rational("-2.5") == Rat(-5, 2));
    CHECK(parse_rational("100") == 100);
    CHECK(rat_to_string(Rat(3, 1)) == "3");
    CHECK(rat_to_string(Rat(1, 48)) == "1/48");
    CHECK(!try_parse_rational("1/0"));
    CHECK(!try_parse_rational("abc"));
    CHECK(!try_parse_rational(""));
}

TEST_CASE("load the worked example") {
    auto data = example_dataset();
    CHECK(data.num_states() == 2);
    CHECK(data.num_observations() == 3);
    CHECK(data.observations[0].prices == std::vector<Rat>{1, 4});
    CHECK(data.observations[0].demand == std::vector<Rat>{100, 0});
}

TEST_CASE("minimal one-state dataset") {
    std::istringstream in(R"({"states":["s"],"observations":[{"prices":["1"],"demand":["0"]}]})");
    auto data = load_dataset(in, DatasetFormat::Json);
    CHECK(data.num_observations() == 1);
    CHECK(wealth(data.observations[0]) == 0);
}

TEST_CASE("validation errors name the offender") {
    std::istringstream zero_price(
        R"({"states":["a","b"],"observations":[{"prices":["0","1"],"demand":["1","1"]}]})");
    CHECK_THROWS_AS(load_dataset(zero_price, DatasetFormat::Json), ValidationError);

    std::istringstream negative_demand(
        R"({"states":["a","b"],"observations":[{"prices":["1","1"],"demand":["1","-1"]}]})");
    CHECK_THROWS_WITH_AS(load_dataset(negative_demand, DatasetFormat::Json),
                         doctest::Contains("observation 1"), ValidationError);

    std::istringstream ragged(
        R"({"states":["a","b"],"observations":[{"prices":["1"],"demand":["1","1"]}]})");
    CHECK_THROWS_AS(load_dataset(ragged, DatasetFormat::Json), ValidationError);

    std::istringstream garbage("not json");
    CHECK_THROWS_AS(load_dataset(garbage, DatasetFormat::Json), ParseError);
}

TEST_CASE("csv ingestion") {
    std::istringstream in(
        "state_1_price,state_2_price,state_1_demand,state_2_demand\n"
        "1,4,100,0\n"
        "4,1,0,80\n");
    auto data = load_dataset(in, DatasetFormat::Csv);
    CHECK(data.num_observations() == 2);
    CHECK(data.observations[1].demand[1] == 80);
}

TEST_CASE("corner_state") {
    CHECK(corner_state(make_obs({1, 4}, {100, 0})) == 0);
    CHECK(corner_state(make_obs({1, 4}, {0, 80})) == 1);
    CHECK(!corner_state(make_obs({1, 1}, {0, 0})));   // all-zero: diversified
    CHECK(!corner_state(make_obs({1, 1}, {1, 1})));   // diversified
}

TEST_CASE("wealth") {
    CHECK(wealth(make_obs({1, 4}, {100, 0})) == 100);
    CHECK(wealth(make_obs({4, 1}, {0, 80})) == 80);
    CHECK(wealth(make_obs({1, 1}, {0, 0})) == 0);
}

TEST_CASE("corner_state and wealth under price scaling") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coin(0, 4);
    for (int trial = 0; trial < 200; ++trial) {
        Observation obs;
        size_t n = 2 + rng() % 2;
        for (size_t s = 0; s < n; ++s) {
            obs.prices.push_back(Rat(1 + int(rng() % 9), 1 + int(rng() % 4)));
            obs.demand.push_back(coin(rng) == 0 ? Rat(0) : Rat(int(rng() % 50)));
        }
        Rat c(1 + int(rng() % 7), 1 + int(rng() % 5));
        Observation scaled = obs;
        for (auto& p : scaled.prices) p *= c;
        CHECK(corner_state(scaled) == corner_state(obs));
        CHECK(wealth(scaled) == c * wealth(obs));
        if (auto corner = corner_state(obs)) {
            size_t positives = 0;
            for (const auto& x : obs.demand) positives += x > 0;
            CHECK(positives == 1);
            CHECK(obs.demand[*corner] > 0);
        }
    }
}

TEST_CASE("beliefs validation") {
    CHECK_NOTHROW(validate_beliefs(Beliefs{{Rat(1, 4), Rat(3, 4)}}));
    CHECK_THROWS_AS(validate_beliefs(Beliefs{{Rat(1, 4), Rat(1, 2)}}), ValidationError);
    CHECK_THROWS_AS(validate_beliefs(Beliefs{{Rat(0), Rat(1)}}), ValidationError);
    CHECK(parse_beliefs("1/4,3/4").probabilities == std::vector<Rat>{Rat(1, 4), Rat(3, 4)});
}

TEST_CASE("dataset json round trip") {
    auto data = example_dataset();
    std::istringstream in(dataset_to_json(data));
    auto reloaded = load_dataset(in, DatasetFormat::Json);
    CHECK(reloaded.states == data.states);
    for (size_t i = 0; i < data.num_observations(); ++i) {
        CHECK(reloaded.observations[i].prices == data.observations[i].prices);
        CHECK(reloaded.observations[i].demand == data.observations[i].demand);
    }
}
