#include "fieldsplit/manifold.hpp"

#include <algorithm>
#include <set>

namespace fieldsplit {

Manifold make_manifold(std::string name, std::vector<std::string> coords) {
  if (coords.empty()) throw SemanticError("manifold '" + name + "' has no coordinates");
  std::set<std::string> seen;
  for (const auto& c : coords) {
    if (!is_identifier(c))
      throw SemanticError("invalid coordinate name '" + c + "' on manifold '" + name + "'");
    if (!seen.insert(c).second)
      throw SemanticError("duplicate coordinate '" + c + "' on manifold '" + name + "'");
  }
  return Manifold{std::move(name), std::move(coords)};
}

ProductManifold ProductManifold::make(std::vector<Manifold> factors) {
  if (factors.size() != 2 && factors.size() != 3)
    throw SemanticError("product manifold requires 2 or 3 factors, got " +
                        std::to_string(factors.size()));
  ProductManifold v;
  std::set<std::string> seen;
  std::set<std::string> names;
  for (const auto& f : factors) {
    if (!names.insert(f.name).second)
      throw SemanticError("duplicate factor name '" + f.name + "'");
    for (const auto& c : f.coords) {
      if (!seen.insert(c).second)
        throw SemanticError("coordinate name collision '" + c + "' across factors");
      v.coords_.push_back(c);
    }
  }
  v.factors_ = std::move(factors);
  return v;
}

bool ProductManifold::has_factor(const std::string& factor_name) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Manifold& f) { return f.name == factor_name; });
}

const Manifold& ProductManifold::factor(const std::string& factor_name) const {
  for (const auto& f : factors_)
    if (f.name == factor_name) return f;
  throw SemanticError("'" + factor_name + "' is not a factor of " + name_);
}

int ProductManifold::factor_index(const std::string& factor_name) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].name == factor_name) return static_cast<int>(i);
  throw SemanticError("'" + factor_name + "' is not a factor of " + name_);
}

std::vector<std::string> ProductManifold::complement_coords(
    const std::string& factor_name) const {
  factor(factor_name);  // validates
  std::vector<std::string> out;
  for (const auto& f : factors_)
    if (f.name != factor_name)
      out.insert(out.end(), f.coords.begin(), f.coords.end());
  return out;
}

bool Carrier::has_coord(const std::string& c) const {
  return std::find(coords.begin(), coords.end(), c) != coords.end();
}

Carrier carrier_of(const Manifold& m) { return Carrier{m.name, m.coords}; }
Carrier carrier_of(const ProductManifold& v) { return Carrier{v.name(), v.coords()}; }

SmoothFunction make_function(Carrier carrier, Expr body) {
  for (const auto& var : free_variables(body))
    if (!carrier.has_coord(var))
      throw SemanticError("function body uses '" + var + "' which is not a coordinate of " +
                          carrier.name);
  return SmoothFunction{std::move(carrier), std::move(body)};
}

FunctionFamily make_family(ProductManifold product, std::string active, Expr body) {
  product.factor(active);  // validates
  Carrier c = carrier_of(product);
  for (const auto& var : free_variables(body))
    if (!c.has_coord(var))
      throw SemanticError("family body uses '" + var + "' which is not a coordinate of " +
                          c.name);
  return FunctionFamily{std::move(product), std::move(active), std::move(body)};
}

SmoothFunction pullback_projection(const SmoothFunction& g, const ProductManifold& v) {
  const Manifold& f = v.factor(g.carrier.name);
  if (f.coords != g.carrier.coords)
    throw SemanticError("carrier of '" + g.carrier.name + "' does not match factor chart");
  return SmoothFunction{carrier_of(v), g.body};
}

SmoothFunction pullback_embedding(const SmoothFunction& f, const ProductManifold& v,
                                  const std::string& factor_name, const Bindings& point) {
  if (f.carrier != carrier_of(v))
    throw SemanticError("function is not carried on " + v.name());
  std::vector<std::string> comp = v.complement_coords(factor_name);
  if (point.size() != comp.size())
    throw SemanticError("embedding point must bind exactly the complementary coordinates");
  std::map<std::string, Expr> subs;
  for (const auto& c : comp) {
    auto it = point.find(c);
    if (it == point.end())
      throw SemanticError("embedding point missing binding for '" + c + "'");
    subs.emplace(c, Expr::constant(it->second));
  }
  return make_function(carrier_of(v.factor(factor_name)), substitute(f.body, subs));
}

SmoothFunction family_to_function(const FunctionFamily& fam) {
  return SmoothFunction{carrier_of(fam.product), fam.body};
}

FunctionFamily function_to_family(const SmoothFunction& f, const ProductManifold& v,
                                  const std::string& active) {
  if (f.carrier != carrier_of(v))
    throw SemanticError("function is not carried on " + v.name());
  return make_family(v, active, f.body);
}

}  // namespace fieldsplit
