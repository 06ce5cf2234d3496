#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seu/rational.hpp"

namespace seu {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One observed (price vector, demand vector) pair over the state space.
/// Prices are strictly positive; demands nonnegative. Both exact rationals.
struct Observation {
    std::vector<Rat> prices;
    std::vector<Rat> demand;

    size_t num_states() const { return prices.size(); }
};

struct Dataset {
    std::vector<std::string> states;
    std::vector<Observation> observations;

    size_t num_states() const { return states.size(); }
    size_t num_observations() const { return observations.size(); }
};

/// Full-support subjective beliefs; probabilities sum to 1 exactly.
struct Beliefs {
    std::vector<Rat> probabilities;

    size_t num_states() const { return probabilities.size(); }
};

/// Throws ValidationError unless every entry is > 0 and the exact sum is 1.
void validate_beliefs(const Beliefs& beliefs);

std::string beliefs_to_json(const Beliefs& beliefs, const std::optional<Rat>& min_slack = {});

/// Parses "1/4,3/4" (rational or decimal components) into Beliefs.
Beliefs parse_beliefs(const std::string& csv);

enum class DatasetFormat { Json, Csv };

/// Parses and validates a dataset. Throws ParseError on malformed input and
/// ValidationError on a nonpositive price, negative demand or ragged row;
/// messages name the offending observation and state (1-based).
Dataset load_dataset(std::istream& source, DatasetFormat format);
Dataset load_dataset_file(const std::string& path);

/// Re-runs the structural invariants on an in-memory dataset.
void validate_dataset(const Dataset& data);

/// Index of the unique strictly positive coordinate, if the demand is
/// non-diversified; nullopt otherwise (including the all-zero demand).
std::optional<size_t> corner_state(const Observation& obs);

/// Implied budget p·x of the observation.
Rat wealth(const Observation& obs);

std::string dataset_to_json(const Dataset& data);

}  // namespace seu
