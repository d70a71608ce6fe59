#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "factum/ast.hpp"
#include "factum/trace.hpp"

namespace factum::testing {

std::string fixture_path(std::string_view name);
std::string golden_path(std::string_view name);
std::string read_file(const std::string& path);
// Throws std::runtime_error if the fixture does not parse.
Pattern load_fixture(std::string_view name);

// Syntactically well-formed pattern; usually does not validate.
Pattern random_pattern(std::mt19937& rng);

// Random trace over the e-Car pattern: one Car c1, one Power p1, Switches
// s1 and s2, carrier {en0, en1}. Not checked against the transfer rule.
ConfigurationTrace random_ecar_trace(std::mt19937& rng, std::size_t max_length = 5);

// Each check returns a description of the first failing case, or "" when
// all cases pass.
std::string check_round_trip(std::uint32_t seed, std::size_t cases);
std::string check_ltl_laws(std::uint32_t seed, std::size_t cases);
std::string check_determinism(std::uint32_t seed, std::size_t cases);
std::string check_fuzz(std::uint32_t seed, std::size_t cases);

}  // namespace factum::testing
