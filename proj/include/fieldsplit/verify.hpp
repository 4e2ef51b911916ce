#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fieldsplit/field.hpp"

namespace fieldsplit {

struct Check {
  std::string name;
  int points_tested = 0;
  double max_abs_error = 0.0;
  bool pass = true;
  std::optional<PredicateWitness> witness;  // first failure only
};

struct CheckReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  bool pass = true;
};

/// Sampled equality of two functions on a shared carrier:
/// |f1 - f2| <= tolerance * max(1, |f1|, |f2|) at every accepted point.
Check check_functions_equal(const SmoothFunction& f1, const SmoothFunction& f2,
                            const SampleConfig& cfg,
                            const std::string& name = "functions-equal");

/// The field operations a suite exercises, injectable so tests can verify
/// that deliberately broken operators are caught.
struct FieldOps {
  std::function<VectorField(const VectorFieldFamily&)> iota;
  std::function<VectorFieldFamily(const VectorField&, const ProductManifold&,
                                  const std::string&)>
      project;
  std::function<OneForm(const OneForm&, const ProductManifold&)> pullback_oneform;

  static FieldOps standard();
};

enum class Mutation {
  IotaSkipComplementZero,   // iota leaves nonzero complementary components
  ProjectSwapActive,        // projection reads the wrong factor's components
  OneFormDropComplementZero // pulled-back 1-form gets nonzero complementary components
};

Mutation mutation_from_name(const std::string& name);
FieldOps mutated_ops(Mutation m);

extern const std::vector<std::string> kSuiteNames;  // includes "all"
bool is_suite_name(const std::string& name);

/// Runs the named suite against the supplied fields (carried on `product`)
/// plus cfg.generated_fields generated ones. Deterministic for fixed cfg.
/// Suites: leibniz, pullbacks, canonical-iso, theorem, exact-sequence,
/// one-forms, three-factor, all. theorem/exact-sequence/one-forms require a
/// two-factor product, three-factor a three-factor one; "all" runs every
/// suite applicable to the product's factor count.
CheckReport run_suite(const ProductManifold& product,
                      const std::vector<VectorField>& fields, const std::string& suite,
                      const SampleConfig& cfg, const FieldOps& ops = FieldOps::standard());

}  // namespace fieldsplit
