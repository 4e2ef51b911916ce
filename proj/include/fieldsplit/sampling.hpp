#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fieldsplit/expr.hpp"

namespace fieldsplit {

struct SampleConfig {
  std::uint64_t seed = 42;
  int samples = 100;
  double tolerance = 1e-9;
  int generated_functions = 8;
  int generated_fields = 20;

  void validate() const;
};

/// Derives an independent sub-seed from a seed and a purpose tag, so each
/// sampler and generator owns its own deterministic stream.
std::uint64_t sub_seed(std::uint64_t seed, std::string_view tag);

/// Prefix-stable stream of points uniform in [-1,1]^dim: for a fixed seed,
/// the first k points are the same no matter how many are drawn.
class PointStream {
public:
  PointStream(std::vector<std::string> coords, std::uint64_t seed);

  Bindings next();
  double next_value();  // one uniform draw in [-1,1]

private:
  std::vector<std::string> coords_;
  std::mt19937_64 rng_;
};

std::vector<Bindings> sample_points(const std::vector<std::string>& coords,
                                    const SampleConfig& cfg);

/// Deterministic generator of smooth test functions: polynomials of total
/// degree at most 3 with coefficients uniform in [-1,1], optionally
/// post-composed with sin or exp.
class FunctionGen {
public:
  explicit FunctionGen(std::uint64_t seed) : rng_(seed) {}

  Expr polynomial(const std::vector<std::string>& coords);
  Expr smooth(const std::vector<std::string>& coords);

private:
  double uniform();
  std::mt19937_64 rng_;
};

}  // namespace fieldsplit
