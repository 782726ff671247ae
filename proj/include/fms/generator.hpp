#pragma once

#include <cstdint>
#include <string>

#include "fms/instance.hpp"
#include "fms/rng.hpp"

namespace fms {

struct WeightLaw {
  enum class Kind { lognormal, power, two_point };
  Kind kind = Kind::lognormal;
  double a = 0.0;  // lognormal mean / power exponent / first two-point value
  double b = 1.0;  // lognormal sdev / unused / second two-point value
};

struct GeneratorSpec {
  enum class Kind { dyadic, random_tree };
  Kind kind = Kind::dyadic;
  int depth = 3;
  int branching = 2;
  WeightLaw law;
  std::uint64_t seed = 0;
};

/// Deterministic instance from a spec. The dyadic kind produces a uniform
/// measure on branching^depth atoms; the random-tree kind draws a tree shape
/// and random masses normalized to total 1. Also fills weights omega/v,
/// functions f/h, and a per-level alpha, all derived from the same seed.
Instance generate(const GeneratorSpec& spec);

WeightLaw parse_weight_law(const std::string& name, double a, double b);

}  // namespace fms
