#include "seu/model.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace seu {

namespace {

using nlohmann::json;

Rat parse_cell(const json& cell, const char* what, size_t obs, size_t state) {
    std::string text;
    if (cell.is_string()) {
        text = cell.get<std::string>();
    } else if (cell.is_number_integer()) {
        text = std::to_string(cell.get<long long>());
    } else if (cell.is_number_float()) {
        // re-render through the JSON dump so "0.25" stays exact base-10
        text = cell.dump();
    } else {
        throw ParseError("observation " + std::to_string(obs + 1) + ", state " +
                         std::to_string(state + 1) + ": " + what + " is not a number or string");
    }
    auto r = try_parse_rational(text);
    if (!r)
        throw ParseError("observation " + std::to_string(obs + 1) + ", state " +
                         std::to_string(state + 1) + ": cannot parse " + what + " '" + text + "'");
    return *r;
}

Dataset load_json(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("states") || !doc.contains("observations"))
        throw ParseError("dataset JSON must be an object with 'states' and 'observations'");

    Dataset data;
    for (const auto& s : doc["states"]) data.states.push_back(s.get<std::string>());
    size_t i = 0;
    for (const auto& row : doc["observations"]) {
        if (!row.is_object() || !row.contains("prices") || !row.contains("demand"))
            throw ParseError("observation " + std::to_string(i + 1) +
                             ": expected object with 'prices' and 'demand'");
        Observation obs;
        size_t j = 0;
        for (const auto& cell : row["prices"]) obs.prices.push_back(parse_cell(cell, "price", i, j++));
        j = 0;
        for (const auto& cell : row["demand"]) obs.demand.push_back(parse_cell(cell, "demand", i, j++));
        data.observations.push_back(std::move(obs));
        ++i;
    }
    return data;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

Dataset load_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV input");
    auto header = split_csv_line(line);
    if (header.empty() || header.size() % 2 != 0)
        throw ParseError("CSV header must hold n price columns followed by n demand columns");
    size_t n = header.size() / 2;

    Dataset data;
    for (size_t s = 0; s < n; ++s) data.states.push_back("s" + std::to_string(s + 1));

    size_t i = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 2 * n)
            throw ParseError("observation " + std::to_string(i + 1) + ": expected " +
                             std::to_string(2 * n) + " cells, got " + std::to_string(cells.size()));
        Observation obs;
        for (size_t s = 0; s < n; ++s) {
            auto r = try_parse_rational(cells[s]);
            if (!r)
                throw ParseError("observation " + std::to_string(i + 1) + ", state " +
                                 std::to_string(s + 1) + ": cannot parse price '" + cells[s] + "'");
            obs.prices.push_back(*r);
        }
        for (size_t s = 0; s < n; ++s) {
            auto r = try_parse_rational(cells[n + s]);
            if (!r)
                throw ParseError("observation " + std::to_string(i + 1) + ", state " +
                                 std::to_string(s + 1) + ": cannot parse demand '" + cells[n + s] + "'");
            obs.demand.push_back(*r);
        }
        data.observations.push_back(std::move(obs));
        ++i;
    }
    return data;
}

}  // namespace

void validate_dataset(const Dataset& data) {
    if (data.states.empty()) throw ValidationError("dataset has no states");
    if (data.observations.empty()) throw ValidationError("dataset has no observations");
    size_t n = data.states.size();
    for (size_t i = 0; i < data.observations.size(); ++i) {
        const auto& obs = data.observations[i];
        if (obs.prices.size() != n || obs.demand.size() != n)
            throw ValidationError("observation " + std::to_string(i + 1) + ": ragged row (expected " +
                                  std::to_string(n) + " states, got " +
                                  std::to_string(obs.prices.size()) + " prices / " +
                                  std::to_string(obs.demand.size()) + " demands)");
        for (size_t s = 0; s < n; ++s) {
            if (obs.prices[s] <= 0)
                throw ValidationError("observation " + std::to_string(i + 1) + ", state " +
                                      data.states[s] + ": price must be strictly positive, got " +
                                      rat_to_string(obs.prices[s]));
            if (obs.demand[s] < 0)
                throw ValidationError("observation " + std::to_string(i + 1) + ", state " +
                                      data.states[s] + ": demand must be nonnegative, got " +
                                      rat_to_string(obs.demand[s]));
        }
    }
}

Dataset load_dataset(std::istream& source, DatasetFormat format) {
    Dataset data = format == DatasetFormat::Json ? load_json(source) : load_csv(source);
    validate_dataset(data);
    return data;
}

Dataset load_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    auto format = path.size() >= 4 && path.substr(path.size() - 4) == ".csv" ? DatasetFormat::Csv
                                                                             : DatasetFormat::Json;
    return load_dataset(in, format);
}

std::optional<size_t> corner_state(const Observation& obs) {
    std::optional<size_t> positive;
    for (size_t s = 0; s < obs.demand.size(); ++s) {
        if (obs.demand[s] > 0) {
            if (positive) return std::nullopt;  // diversified
            positive = s;
        }
    }
    return positive;  // nullopt for all-zero demand
}

Rat wealth(const Observation& obs) {
    Rat w = 0;
    for (size_t s = 0; s < obs.prices.size(); ++s) w += obs.prices[s] * obs.demand[s];
    return w;
}

void validate_beliefs(const Beliefs& beliefs) {
    if (beliefs.probabilities.empty()) throw ValidationError("beliefs are empty");
    Rat sum = 0;
    for (size_t s = 0; s < beliefs.probabilities.size(); ++s) {
        if (beliefs.probabilities[s] <= 0)
            throw ValidationError("beliefs must have full support; state " + std::to_string(s + 1) +
                                  " has probability " + rat_to_string(beliefs.probabilities[s]));
        sum += beliefs.probabilities[s];
    }
    if (sum != 1)
        throw ValidationError("beliefs must sum to exactly 1, got " + rat_to_string(sum));
}

std::string beliefs_to_json(const Beliefs& beliefs, const std::optional<Rat>& min_slack) {
    nlohmann::json doc;
    for (const auto& p : beliefs.probabilities) doc["pi"].push_back(rat_to_string(p));
    if (min_slack) doc["min_slack"] = rat_to_string(*min_slack);
    return doc.dump();
}

Beliefs parse_beliefs(const std::string& csv) {
    Beliefs beliefs;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        auto r = try_parse_rational(cell);
        if (!r) throw ParseError("cannot parse belief component '" + cell + "'");
        beliefs.probabilities.push_back(*r);
    }
    validate_beliefs(beliefs);
    return beliefs;
}

std::string dataset_to_json(const Dataset& data) {
    nlohmann::json doc;
    doc["states"] = data.states;
    doc["observations"] = nlohmann::json::array();
    for (const auto& obs : data.observations) {
        nlohmann::json row;
        for (const auto& p : obs.prices) row["prices"].push_back(rat_to_string(p));
        for (const auto& x : obs.demand) row["demand"].push_back(rat_to_string(x));
        doc["observations"].push_back(std::move(row));
    }
    return doc.dump(2);
}

}  // namespace seu
