#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace seu {

// Exact rational scalar used for all prices, demands, beliefs and axiom
// comparisons. Verdicts must never depend on float rounding.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// Parses "a/b", an integer, or a plain decimal ("0.25") into an exact
/// rational. Returns nullopt on malformed input.
std::optional<Rat> try_parse_rational(std::string_view text);

/// Same as try_parse_rational but throws std::invalid_argument.
Rat parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q==1) rendering.
std::string rat_to_string(const Rat& r);

}  // namespace seu
