#include "fieldsplit/field.hpp"

#include <algorithm>
#include <cmath>

namespace fieldsplit {

namespace {

void check_component_cover(const Carrier& carrier,
                           const std::map<std::string, Expr>& components,
                           const char* what) {
  for (const auto& c : carrier.coords)
    if (!components.count(c))
      throw SemanticError(std::string(what) + " missing component for coordinate '" + c + "'");
  for (const auto& [c, e] : components) {
    if (!carrier.has_coord(c))
      throw SemanticError(std::string(what) + " has component for '" + c +
                          "' which is not a coordinate of " + carrier.name);
    for (const auto& var : free_variables(e))
      if (!carrier.has_coord(var))
        throw SemanticError(std::string(what) + " component for '" + c + "' uses '" + var +
                            "' which is not a coordinate of " + carrier.name);
  }
}

}  // namespace

VectorField make_field(Carrier carrier, std::map<std::string, Expr> components) {
  check_component_cover(carrier, components, "vector field");
  return VectorField{std::move(carrier), std::move(components)};
}

VectorField zero_field(Carrier carrier) {
  std::map<std::string, Expr> comps;
  for (const auto& c : carrier.coords) comps[c] = Expr();
  return VectorField{std::move(carrier), std::move(comps)};
}

VectorField add_fields(const VectorField& a, const VectorField& b) {
  if (a.carrier != b.carrier) throw SemanticError("cannot add fields on different carriers");
  std::map<std::string, Expr> comps;
  for (const auto& c : a.carrier.coords)
    comps[c] = a.components.at(c) + b.components.at(c);
  return VectorField{a.carrier, std::move(comps)};
}

VectorFieldFamily make_field_family(ProductManifold product, std::string active,
                                    std::map<std::string, Expr> components) {
  const Manifold& f = product.factor(active);
  for (const auto& c : f.coords)
    if (!components.count(c))
      throw SemanticError("field family missing component for coordinate '" + c + "'");
  Carrier vc = carrier_of(product);
  for (const auto& [c, e] : components) {
    if (std::find(f.coords.begin(), f.coords.end(), c) == f.coords.end())
      throw SemanticError("field family component '" + c + "' is not a coordinate of factor " +
                          active);
    for (const auto& var : free_variables(e))
      if (!vc.has_coord(var))
        throw SemanticError("field family component for '" + c + "' uses unknown variable '" +
                            var + "'");
  }
  return VectorFieldFamily{std::move(product), std::move(active), std::move(components)};
}

OneForm make_oneform(Carrier carrier, std::map<std::string, Expr> components) {
  check_component_cover(carrier, components, "1-form");
  return OneForm{std::move(carrier), std::move(components)};
}

SmoothFunction apply_derivation(const VectorField& v, const SmoothFunction& f) {
  if (v.carrier != f.carrier)
    throw SemanticError("vector field and function live on different carriers");
  Expr out;
  for (const auto& c : v.carrier.coords)
    out = out + v.components.at(c) * differentiate(f.body, c);
  return SmoothFunction{v.carrier, out};
}

VectorField iota_family(const VectorFieldFamily& w) {
  Carrier vc = carrier_of(w.product);
  std::map<std::string, Expr> comps;
  for (const auto& c : vc.coords) comps[c] = Expr();
  for (const auto& [c, e] : w.components) comps[c] = e;
  return VectorField{std::move(vc), std::move(comps)};
}

VectorFieldFamily project_to_family(const VectorField& v, const ProductManifold& product,
                                    const std::string& active) {
  if (v.carrier != carrier_of(product))
    throw SemanticError("vector field is not carried on " + product.name());
  const Manifold& f = product.factor(active);
  std::map<std::string, Expr> comps;
  for (const auto& c : f.coords) {
    // w(c) = v(pullback of the coordinate function c), complementary
    // coordinates read as parameters.
    SmoothFunction coord_fn{v.carrier, Expr::variable(c)};
    comps[c] = apply_derivation(v, coord_fn).body;
  }
  return VectorFieldFamily{product, active, std::move(comps)};
}

VectorField horizontal_projection(const VectorField& v, const ProductManifold& product) {
  if (product.factors().size() != 2)
    throw SemanticError("horizontal projection requires a two-factor product");
  return iota_family(project_to_family(v, product, product.factors()[0].name));
}

VectorField vertical_projection(const VectorField& v, const ProductManifold& product) {
  if (product.factors().size() != 2)
    throw SemanticError("vertical projection requires a two-factor product");
  return iota_family(project_to_family(v, product, product.factors()[1].name));
}

std::pair<VectorField, VectorField> decompose(const VectorField& v,
                                              const ProductManifold& product) {
  return {horizontal_projection(v, product), vertical_projection(v, product)};
}

std::vector<VectorField> multi_decompose(const VectorField& v,
                                         const ProductManifold& product) {
  if (product.factors().size() != 3)
    throw SemanticError("multi_decompose requires a three-factor product");
  std::vector<VectorField> out;
  for (const auto& f : product.factors())
    out.push_back(iota_family(project_to_family(v, product, f.name)));
  return out;
}

namespace {

// Scans accepted sample points for a value exceeding the tolerance.
// Points where evaluation fails (log, division) are rejected and redrawn;
// more than 100 consecutive rejections is an error.
std::optional<PredicateWitness> find_nonzero(const Expr& e, const std::string& label,
                                             PointStream& stream, const SampleConfig& cfg) {
  int accepted = 0;
  int consecutive_rejects = 0;
  while (accepted < cfg.samples) {
    Bindings b = stream.next();
    double val;
    try {
      val = evaluate(e, b);
    } catch (const EvalError&) {
      if (++consecutive_rejects > 100)
        throw EvalError("rejection cap exceeded while sampling " + label);
      continue;
    }
    consecutive_rejects = 0;
    ++accepted;
    if (std::abs(val) > cfg.tolerance)
      return PredicateWitness{label, b, val};
  }
  return std::nullopt;
}

PredicateResult check_annihilation(const std::vector<std::pair<Expr, std::string>>& actions,
                                   const std::vector<std::string>& coords,
                                   const SampleConfig& cfg, std::uint64_t stream_seed) {
  for (const auto& [action, label] : actions) {
    PointStream stream(coords, stream_seed);
    if (auto w = find_nonzero(action, label, stream, cfg))
      return PredicateResult{false, w};
  }
  return PredicateResult{true, std::nullopt};
}

}  // namespace

PredicateResult annihilates_pullbacks_from(const VectorField& v,
                                           const ProductManifold& product,
                                           const std::string& factor_name,
                                           const SampleConfig& cfg) {
  if (v.carrier != carrier_of(product))
    throw SemanticError("vector field is not carried on " + product.name());
  const Manifold& f = product.factor(factor_name);

  std::vector<Expr> test_fns;
  for (const auto& c : f.coords) test_fns.push_back(Expr::variable(c));
  FunctionGen gen(sub_seed(cfg.seed, "annihilation-test-functions:" + factor_name));
  for (int i = 0; i < cfg.generated_functions; ++i) test_fns.push_back(gen.smooth(f.coords));

  std::vector<std::pair<Expr, std::string>> actions;
  for (const auto& g : test_fns) {
    SmoothFunction pulled = pullback_projection(SmoothFunction{carrier_of(f), g}, product);
    actions.emplace_back(apply_derivation(v, pulled).body, to_string(g));
  }
  return check_annihilation(actions, product.coords(), cfg,
                            sub_seed(cfg.seed, "annihilation-points"));
}

PredicateResult is_horizontal(const VectorField& v, const ProductManifold& product,
                              const SampleConfig& cfg) {
  if (product.factors().size() != 2)
    throw SemanticError("is_horizontal requires a two-factor product");
  return annihilates_pullbacks_from(v, product, product.factors()[1].name, cfg);
}

PredicateResult is_vertical(const VectorField& v, const ProductManifold& product,
                            const SampleConfig& cfg) {
  if (product.factors().size() != 2)
    throw SemanticError("is_vertical requires a two-factor product");
  return annihilates_pullbacks_from(v, product, product.factors()[0].name, cfg);
}

OneForm pullback_oneform(const OneForm& form, const ProductManifold& product) {
  const Manifold& f = product.factor(form.carrier.name);
  if (f.coords != form.carrier.coords)
    throw SemanticError("1-form carrier does not match factor chart");
  Carrier vc = carrier_of(product);
  std::map<std::string, Expr> comps;
  for (const auto& c : vc.coords) comps[c] = Expr();
  for (const auto& [c, e] : form.components) comps[c] = e;
  return OneForm{std::move(vc), std::move(comps)};
}

SmoothFunction pair_oneform(const OneForm& alpha, const VectorField& v) {
  if (alpha.carrier != v.carrier)
    throw SemanticError("1-form and vector field live on different carriers");
  Expr out;
  for (const auto& c : v.carrier.coords)
    out = out + alpha.components.at(c) * v.components.at(c);
  return SmoothFunction{v.carrier, out};
}

PredicateResult annihilated_by_pulled_back_oneforms(const VectorField& v,
                                                    const ProductManifold& product,
                                                    const std::string& factor_name,
                                                    const SampleConfig& cfg) {
  if (v.carrier != carrier_of(product))
    throw SemanticError("vector field is not carried on " + product.name());
  const Manifold& f = product.factor(factor_name);

  std::vector<OneForm> forms;
  for (const auto& c : f.coords) {
    std::map<std::string, Expr> comps;
    for (const auto& d : f.coords) comps[d] = Expr();
    comps[c] = Expr::constant(1.0);  // the coordinate 1-form dc
    forms.push_back(OneForm{carrier_of(f), std::move(comps)});
  }
  FunctionGen gen(sub_seed(cfg.seed, "oneform-test-coefficients:" + factor_name));
  for (int i = 0; i < cfg.generated_functions; ++i) {
    std::map<std::string, Expr> comps;
    for (const auto& d : f.coords) comps[d] = gen.smooth(f.coords);
    forms.push_back(OneForm{carrier_of(f), std::move(comps)});
  }

  std::vector<std::pair<Expr, std::string>> actions;
  for (const auto& form : forms) {
    OneForm pulled = pullback_oneform(form, product);
    std::string label;
    for (const auto& c : f.coords) {
      if (!label.empty()) label += " + ";
      label += to_string(form.components.at(c)) + "*d" + c;
    }
    actions.emplace_back(pair_oneform(pulled, v).body, label);
  }
  return check_annihilation(actions, product.coords(), cfg,
                            sub_seed(cfg.seed, "oneform-points"));
}

}  // namespace fieldsplit
