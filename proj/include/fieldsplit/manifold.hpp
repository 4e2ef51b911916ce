#pragma once

#include <string>
#include <vector>

#include "fieldsplit/expr.hpp"

namespace fieldsplit {

/// A single global coordinate chart.
struct Manifold {
  std::string name;
  std::vector<std::string> coords;

  int dim() const { return static_cast<int>(coords.size()); }
};

/// Validates coordinate names (distinct, non-empty, identifier grammar).
Manifold make_manifold(std::string name, std::vector<std::string> coords);

/// Ordered product of 2 or 3 charts with concatenated coordinates.
/// Coordinate names are globally unique across factors.
class ProductManifold {
public:
  static ProductManifold make(std::vector<Manifold> factors);

  const std::vector<Manifold>& factors() const { return factors_; }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(coords_.size()); }

  bool has_factor(const std::string& factor_name) const;
  const Manifold& factor(const std::string& factor_name) const;
  int factor_index(const std::string& factor_name) const;

  /// Coordinates of every factor except the named one, in product order.
  std::vector<std::string> complement_coords(const std::string& factor_name) const;

private:
  std::string name_ = "V";
  std::vector<Manifold> factors_;
  std::vector<std::string> coords_;
};

/// Identity of the chart an object lives on: name plus ordered coordinates.
struct Carrier {
  std::string name;
  std::vector<std::string> coords;

  int dim() const { return static_cast<int>(coords.size()); }
  bool has_coord(const std::string& c) const;

  friend bool operator==(const Carrier&, const Carrier&) = default;
};

Carrier carrier_of(const Manifold& m);
Carrier carrier_of(const ProductManifold& v);

struct SmoothFunction {
  Carrier carrier;
  Expr body;
};

/// Validates free variables of `body` against the carrier's coordinates.
SmoothFunction make_function(Carrier carrier, Expr body);

/// A smooth family of functions on one factor, parameterized by the rest of
/// the product: an expression over all product coordinates tagged with the
/// active factor.
struct FunctionFamily {
  ProductManifold product;
  std::string active;  // factor name
  Expr body;
};

FunctionFamily make_family(ProductManifold product, std::string active, Expr body);

/// Pullback along the projection V -> F: the body is unchanged, the carrier
/// widens to V.
SmoothFunction pullback_projection(const SmoothFunction& g, const ProductManifold& v);

/// Pullback along the embedding F -> V at a fixed point of the complementary
/// factor(s): substitutes the point and narrows the carrier to F.
/// `point` must bind exactly the complementary coordinates.
SmoothFunction pullback_embedding(const SmoothFunction& f, const ProductManifold& v,
                                  const std::string& factor_name, const Bindings& point);

/// The function on V determined by a family (same body, carrier V).
SmoothFunction family_to_function(const FunctionFamily& fam);

/// The family obtained from a function on V by reading the complementary
/// coordinates as parameters. Inverse of family_to_function.
FunctionFamily function_to_family(const SmoothFunction& f, const ProductManifold& v,
                                  const std::string& active);

}  // namespace fieldsplit
