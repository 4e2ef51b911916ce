#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fieldsplit/manifold.hpp"
#include "fieldsplit/sampling.hpp"

namespace fieldsplit {

/// A vector field as a derivation: one coefficient expression per carrier
/// coordinate.
struct VectorField {
  Carrier carrier;
  std::map<std::string, Expr> components;
};

/// Requires exactly one component per carrier coordinate (zero allowed) with
/// free variables inside the carrier.
VectorField make_field(Carrier carrier, std::map<std::string, Expr> components);

VectorField zero_field(Carrier carrier);

/// Componentwise sum of two fields on the same carrier.
VectorField add_fields(const VectorField& a, const VectorField& b);

/// A smooth family of vector fields on the active factor: components keyed by
/// the active factor's coordinates, coefficients over all product coordinates
/// (the complementary coordinates act as parameters).
struct VectorFieldFamily {
  ProductManifold product;
  std::string active;
  std::map<std::string, Expr> components;
};

VectorFieldFamily make_field_family(ProductManifold product, std::string active,
                                    std::map<std::string, Expr> components);

struct OneForm {
  Carrier carrier;
  std::map<std::string, Expr> components;
};

OneForm make_oneform(Carrier carrier, std::map<std::string, Expr> components);

/// v(f) = sum_i v_i * df/dx_i on the shared carrier.
SmoothFunction apply_derivation(const VectorField& v, const SmoothFunction& f);

/// Natural embedding of a family into fields on the product: the active
/// components carry over, the complementary components are zero.
VectorField iota_family(const VectorFieldFamily& w);

/// The family induced by a field on V: component for an active coordinate c
/// is v applied to the pulled-back coordinate function c, with complementary
/// coordinates read as parameters.
VectorFieldFamily project_to_family(const VectorField& v, const ProductManifold& product,
                                    const std::string& active);

/// Composition iota_family(project_to_family(v, first factor)); requires a
/// two-factor product.
VectorField horizontal_projection(const VectorField& v, const ProductManifold& product);

/// Mirror composition with the second factor active.
VectorField vertical_projection(const VectorField& v, const ProductManifold& product);

std::pair<VectorField, VectorField> decompose(const VectorField& v,
                                              const ProductManifold& product);

/// Per-factor split on a three-factor product: component k carries only the
/// coordinates of factor k.
std::vector<VectorField> multi_decompose(const VectorField& v,
                                         const ProductManifold& product);

struct PredicateWitness {
  std::string function;  // printed test function
  Bindings point;
  double value;
};

struct PredicateResult {
  bool value = false;
  std::optional<PredicateWitness> witness;  // present on failure

  explicit operator bool() const { return value; }
};

/// True iff v annihilates the pullback of every function in the test set over
/// the named factor (coordinate functions plus cfg.generated_functions
/// generated ones), sampled at cfg.samples points within cfg.tolerance.
PredicateResult annihilates_pullbacks_from(const VectorField& v,
                                           const ProductManifold& product,
                                           const std::string& factor_name,
                                           const SampleConfig& cfg);

/// Two-factor predicates: horizontal fields kill pullbacks from the second
/// factor, vertical fields kill pullbacks from the first.
PredicateResult is_horizontal(const VectorField& v, const ProductManifold& product,
                              const SampleConfig& cfg);
PredicateResult is_vertical(const VectorField& v, const ProductManifold& product,
                            const SampleConfig& cfg);

/// Pullback of a 1-form on a factor: components carried over, zero on the
/// complementary coordinates.
OneForm pullback_oneform(const OneForm& form, const ProductManifold& product);

/// Pointwise pairing <alpha, v> = sum_i alpha_i * v_i.
SmoothFunction pair_oneform(const OneForm& alpha, const VectorField& v);

/// 1-form characterization of horizontality: pairs v against pullbacks of a
/// test set of 1-forms over the named factor (coordinate 1-forms plus
/// generated-coefficient forms).
PredicateResult annihilated_by_pulled_back_oneforms(const VectorField& v,
                                                    const ProductManifold& product,
                                                    const std::string& factor_name,
                                                    const SampleConfig& cfg);

}  // namespace fieldsplit
