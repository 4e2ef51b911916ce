#include "fieldsplit/verify.hpp"

#include <algorithm>
#include <cmath>

namespace fieldsplit {

namespace {

struct ExprPair {
  Expr lhs;
  Expr rhs;
  std::string label;
};

// Sampled equality of expression pairs over a shared coordinate list.
// Each pair is evaluated at cfg.samples accepted points from a per-check
// stream; points with failing evaluations are rejected and redrawn, with an
// error surfaced as a failed check after 100 consecutive rejections.
Check compare_exprs(std::string name, const std::vector<ExprPair>& pairs,
                    const std::vector<std::string>& coords, const SampleConfig& cfg) {
  Check chk{std::move(name)};
  std::uint64_t seed = sub_seed(cfg.seed, "points:" + chk.name);
  for (const auto& p : pairs) {
    PointStream stream(coords, seed);
    int accepted = 0;
    int consecutive = 0;
    while (accepted < cfg.samples) {
      Bindings b = stream.next();
      double a, c;
      try {
        a = evaluate(p.lhs, b);
        c = evaluate(p.rhs, b);
      } catch (const EvalError& e) {
        if (++consecutive > 100) {
          chk.pass = false;
          if (!chk.witness)
            chk.witness = PredicateWitness{
                p.label + " [rejection cap exceeded: " + e.what() + "]", b, 0.0};
          break;
        }
        continue;
      }
      consecutive = 0;
      ++accepted;
      ++chk.points_tested;
      double err = std::abs(a - c);
      chk.max_abs_error = std::max(chk.max_abs_error, err);
      if (err > cfg.tolerance * std::max({1.0, std::abs(a), std::abs(c)})) {
        if (chk.pass) chk.witness = PredicateWitness{p.label, b, err};
        chk.pass = false;
      }
    }
  }
  return chk;
}

struct BoolItem {
  std::string label;
  bool lhs;
  bool rhs;
};

// Pass iff the two predicates agree on every item.
Check agreement_check(std::string name, const std::vector<BoolItem>& items,
                      const SampleConfig& cfg) {
  Check chk{std::move(name)};
  chk.points_tested = cfg.samples;
  for (const auto& it : items) {
    if (it.lhs != it.rhs) {
      if (chk.pass)
        chk.witness = PredicateWitness{it.label + " [predicates disagree]", {}, 0.0};
      chk.pass = false;
    }
  }
  return chk;
}

std::string describe_field(const VectorField& v) {
  std::string out;
  for (const auto& c : v.carrier.coords) {
    if (!out.empty()) out += " + ";
    out += to_string(v.components.at(c)) + "*d/d" + c;
  }
  return out;
}

std::string describe_family(const VectorFieldFamily& w) {
  std::string out;
  const Manifold& f = w.product.factor(w.active);
  for (const auto& c : f.coords) {
    if (!out.empty()) out += " + ";
    out += to_string(w.components.at(c)) + "*d/d" + c;
  }
  return out;
}

class SuiteRunner {
public:
  SuiteRunner(const ProductManifold& product, const std::vector<VectorField>& fields,
              const SampleConfig& cfg, const FieldOps& ops)
      : product_(product), cfg_(cfg), ops_(ops) {
    const auto& coords = product_.coords();
    for (const auto& v : fields) {
      if (v.carrier != carrier_of(product_))
        throw SemanticError("field under test is not carried on " + product_.name());
      fields_.push_back(v);
    }
    FunctionGen fgen(sub_seed(cfg_.seed, "generated-fields"));
    for (int i = 0; i < cfg_.generated_fields; ++i) {
      std::map<std::string, Expr> comps;
      for (const auto& c : coords) comps[c] = fgen.smooth(coords);
      fields_.push_back(VectorField{carrier_of(product_), std::move(comps)});
    }
    FunctionGen ggen(sub_seed(cfg_.seed, "generated-functions"));
    for (const auto& c : coords) test_functions_.push_back(Expr::variable(c));
    for (int i = 0; i < cfg_.generated_functions; ++i)
      test_functions_.push_back(ggen.smooth(coords));
  }

  // Fields supported only on the named factor's coordinates.
  std::vector<VectorField> factor_supported_fields(const std::string& factor_name,
                                                   int count) const {
    FunctionGen gen(sub_seed(cfg_.seed, "factor-supported-fields:" + factor_name));
    const Manifold& f = product_.factor(factor_name);
    std::vector<VectorField> out;
    for (int i = 0; i < count; ++i) {
      std::map<std::string, Expr> comps;
      for (const auto& c : product_.coords()) comps[c] = Expr();
      for (const auto& c : f.coords) comps[c] = gen.smooth(product_.coords());
      out.push_back(VectorField{carrier_of(product_), std::move(comps)});
    }
    return out;
  }

  std::vector<VectorFieldFamily> generated_families(const std::string& active,
                                                    int count) const {
    FunctionGen gen(sub_seed(cfg_.seed, "generated-families:" + active));
    const Manifold& f = product_.factor(active);
    std::vector<VectorFieldFamily> out;
    for (int i = 0; i < count; ++i) {
      std::map<std::string, Expr> comps;
      for (const auto& c : f.coords) comps[c] = gen.smooth(product_.coords());
      out.push_back(VectorFieldFamily{product_, active, std::move(comps)});
    }
    return out;
  }

  VectorField hor(const VectorField& v) const {
    return ops_.iota(ops_.project(v, product_, product_.factors()[0].name));
  }
  VectorField ver(const VectorField& v) const {
    return ops_.iota(ops_.project(v, product_, product_.factors()[1].name));
  }

  bool field_is_zero_sampled(const VectorField& v, const std::string& tag) const {
    return exprs_are_zero_sampled(values_of(v), tag);
  }

  bool family_is_zero_sampled(const VectorFieldFamily& w, const std::string& tag) const {
    std::vector<Expr> es;
    for (const auto& [c, e] : w.components) es.push_back(e);
    return exprs_are_zero_sampled(es, tag);
  }

  void add(Check c) {
    checks_.push_back(std::move(c));
  }

  // ---- suites ----

  void suite_leibniz() {
    PointStream consts(std::vector<std::string>{}, sub_seed(cfg_.seed, "leibniz-constants"));
    std::vector<ExprPair> lin, prod, kill;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      const VectorField& v = fields_[i];
      std::string vtxt = "v" + std::to_string(i);
      for (std::size_t j = 0; j + 1 < test_functions_.size(); j += 2) {
        Expr f1 = test_functions_[j], f2 = test_functions_[j + 1];
        Expr a = Expr::constant(consts.next_value());
        SmoothFunction comb{v.carrier, a * f1 + f2};
        lin.push_back({apply_derivation(v, comb).body,
                       a * apply_derivation(v, SmoothFunction{v.carrier, f1}).body +
                           apply_derivation(v, SmoothFunction{v.carrier, f2}).body,
                       vtxt + " linearity on " + to_string(f1) + ", " + to_string(f2)});
        prod.push_back(
            {apply_derivation(v, SmoothFunction{v.carrier, f1 * f2}).body,
             apply_derivation(v, SmoothFunction{v.carrier, f1}).body * f2 +
                 f1 * apply_derivation(v, SmoothFunction{v.carrier, f2}).body,
             vtxt + " Leibniz on " + to_string(f1) + ", " + to_string(f2)});
      }
      for (double c : {1.0, -2.5, 3.75})
        kill.push_back({apply_derivation(v, SmoothFunction{v.carrier, Expr::constant(c)}).body,
                        Expr(), vtxt + " on constant " + format_double(c)});
    }
    add(compare_exprs("derivation-linearity", lin, product_.coords(), cfg_));
    add(compare_exprs("derivation-leibniz", prod, product_.coords(), cfg_));
    add(compare_exprs("derivation-constants", kill, product_.coords(), cfg_));
  }

  void suite_pullbacks() {
    const Manifold& m = product_.factors()[0];
    std::vector<std::string> comp_m = product_.complement_coords(m.name);
    FunctionGen mg(sub_seed(cfg_.seed, "pullback-functions-first"));
    FunctionGen ng(sub_seed(cfg_.seed, "pullback-functions-complement"));
    PointStream pts(comp_m, sub_seed(cfg_.seed, "pullback-embedding-points"));

    int nfuncs = std::max(cfg_.generated_functions, 3);
    std::vector<ExprPair> section, constant, morphism;
    for (int i = 0; i < nfuncs; ++i) {
      Expr g = mg.smooth(m.coords);
      Expr h = ng.smooth(comp_m);
      for (int k = 0; k < 3; ++k) {
        Bindings n = pts.next();
        SmoothFunction gv =
            pullback_projection(SmoothFunction{carrier_of(m), g}, product_);
        section.push_back({pullback_embedding(gv, product_, m.name, n).body, g,
                           "embed(project(" + to_string(g) + "))"});
        SmoothFunction hv{carrier_of(product_), h};
        constant.push_back({pullback_embedding(hv, product_, m.name, n).body,
                            Expr::constant(evaluate(h, n)),
                            "embed of complement function " + to_string(h)});
      }
      Expr g2 = mg.smooth(m.coords);
      Expr g3 = mg.smooth(m.coords);
      morphism.push_back(
          {pullback_projection(SmoothFunction{carrier_of(m), g * g2 + g3}, product_).body,
           pullback_projection(SmoothFunction{carrier_of(m), g}, product_).body *
                   pullback_projection(SmoothFunction{carrier_of(m), g2}, product_).body +
               pullback_projection(SmoothFunction{carrier_of(m), g3}, product_).body,
           "morphism on " + to_string(g)});
    }
    add(compare_exprs("embedding-section-identity", section, m.coords, cfg_));
    add(compare_exprs("embedding-constant-pullback", constant, m.coords, cfg_));
    add(compare_exprs("pullback-algebra-morphism", morphism, product_.coords(), cfg_));
  }

  void suite_canonical_iso() {
    std::vector<ExprPair> roundtrip;
    for (std::size_t j = 0; j < test_functions_.size(); ++j) {
      SmoothFunction f{carrier_of(product_), test_functions_[j]};
      for (const auto& fac : product_.factors()) {
        FunctionFamily fam = function_to_family(f, product_, fac.name);
        roundtrip.push_back({family_to_function(fam).body, f.body,
                             "roundtrip of " + to_string(f.body) + " via " + fac.name});
      }
    }
    add(compare_exprs("family-function-roundtrip", roundtrip, product_.coords(), cfg_));

    // The embedding anchor: applying the embedded field then restricting
    // agrees with applying the family at the restriction.
    const Manifold& m = product_.factors()[0];
    std::vector<std::string> comp_m = product_.complement_coords(m.name);
    PointStream pts(comp_m, sub_seed(cfg_.seed, "anchor-embedding-points"));
    auto families = generated_families(m.name, std::min(cfg_.generated_fields, 5));
    std::vector<ExprPair> anchor;
    std::size_t nf = std::min<std::size_t>(test_functions_.size(), 6);
    for (std::size_t wi = 0; wi < families.size(); ++wi) {
      const auto& w = families[wi];
      VectorField embedded = ops_.iota(w);
      for (std::size_t j = 0; j < nf; ++j) {
        SmoothFunction f{carrier_of(product_), test_functions_[j]};
        Bindings n = pts.next();
        std::map<std::string, Expr> subs;
        for (const auto& [c, val] : n) subs.emplace(c, Expr::constant(val));
        Expr lhs = substitute(apply_derivation(embedded, f).body, subs);
        Expr restricted = substitute(f.body, subs);
        Expr rhs;
        for (const auto& c : m.coords)
          rhs = rhs + substitute(w.components.at(c), subs) * differentiate(restricted, c);
        anchor.push_back({lhs, rhs,
                          "family w" + std::to_string(wi) + " on " + to_string(f.body)});
      }
    }
    add(compare_exprs("iota-derivation-anchor", anchor, m.coords, cfg_));
  }

  void suite_theorem() {
    const Manifold& m = product_.factors()[0];
    const Manifold& n = product_.factors()[1];

    std::vector<ExprPair> sum, idem_h, idem_v, section, image;
    std::vector<BoolItem> ranges, kernel;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      const VectorField& v = fields_[i];
      std::string vtxt = "v" + std::to_string(i);
      VectorField h = hor(v), w = ver(v);
      for (std::size_t j = 0; j < test_functions_.size(); ++j) {
        SmoothFunction f{v.carrier, test_functions_[j]};
        sum.push_back({apply_derivation(h, f).body + apply_derivation(w, f).body,
                       apply_derivation(v, f).body,
                       vtxt + " sum action on " + to_string(f.body)});
      }
      PredicateResult hh = is_horizontal(h, product_, cfg_);
      PredicateResult vv = is_vertical(w, product_, cfg_);
      ranges.push_back({vtxt + " horizontal part", hh.value, true});
      ranges.push_back({vtxt + " vertical part", vv.value, true});

      VectorField hh2 = hor(h), vv2 = ver(w);
      for (const auto& c : product_.coords()) {
        idem_h.push_back({hh2.components.at(c), h.components.at(c),
                          vtxt + " d/d" + c + " component"});
        idem_v.push_back({vv2.components.at(c), w.components.at(c),
                          vtxt + " d/d" + c + " component"});
      }
    }
    add(compare_exprs("direct-sum-action", sum, product_.coords(), cfg_));
    add(agreement_check("projection-ranges", ranges, cfg_));
    add(compare_exprs("projection-idempotent-horizontal", idem_h, product_.coords(), cfg_));
    add(compare_exprs("projection-idempotent-vertical", idem_v, product_.coords(), cfg_));

    auto families = generated_families(m.name, cfg_.generated_fields);
    for (std::size_t wi = 0; wi < families.size(); ++wi) {
      const auto& w = families[wi];
      VectorFieldFamily back = ops_.project(ops_.iota(w), product_, m.name);
      for (const auto& c : m.coords)
        section.push_back({back.components.at(c), w.components.at(c),
                           "family w" + std::to_string(wi) + " d/d" + c});
    }
    add(compare_exprs("iota-section-identity", section, product_.coords(), cfg_));

    // Kernel of the projection to the first factor is the vertical subspace:
    // the sampled zero-family test must agree with the Def-1 predicate.
    std::vector<VectorField> mixed = fields_;
    for (auto& v : factor_supported_fields(n.name, 3)) mixed.push_back(std::move(v));
    for (auto& v : factor_supported_fields(m.name, 3)) mixed.push_back(std::move(v));
    for (std::size_t i = 0; i < mixed.size(); ++i) {
      bool proj_zero = family_is_zero_sampled(ops_.project(mixed[i], product_, m.name),
                                              "kernel-check");
      bool vertical = is_vertical(mixed[i], product_, cfg_).value;
      kernel.push_back({"field " + std::to_string(i) + ": " + describe_field(mixed[i]),
                        proj_zero, vertical});
    }
    add(agreement_check("kernel-is-vertical", kernel, cfg_));

    // Image of iota is exactly the horizontal subspace.
    std::vector<BoolItem> image_pred;
    auto horizontals = factor_supported_fields(m.name, 5);
    for (std::size_t i = 0; i < horizontals.size(); ++i) {
      const VectorField& v = horizontals[i];
      VectorField back = ops_.iota(ops_.project(v, product_, m.name));
      for (const auto& c : product_.coords())
        image.push_back({back.components.at(c), v.components.at(c),
                         "horizontal field " + std::to_string(i) + " d/d" + c});
    }
    for (std::size_t wi = 0; wi < families.size(); ++wi)
      image_pred.push_back({"iota image of family w" + std::to_string(wi),
                            is_horizontal(ops_.iota(families[wi]), product_, cfg_).value,
                            true});
    add(compare_exprs("horizontal-image-roundtrip", image, product_.coords(), cfg_));
    add(agreement_check("iota-image-horizontal", image_pred, cfg_));
  }

  void suite_exact_sequence() {
    const Manifold& m = product_.factors()[0];
    const Manifold& n = product_.factors()[1];

    auto fams_m = generated_families(m.name, cfg_.generated_fields);
    auto fams_n = generated_families(n.name, cfg_.generated_fields);

    std::vector<BoolItem> injective;
    {
      std::map<std::string, Expr> zero;
      for (const auto& c : m.coords) zero[c] = Expr();
      fams_m.push_back(VectorFieldFamily{product_, m.name, std::move(zero)});
    }
    for (std::size_t wi = 0; wi < fams_m.size(); ++wi) {
      bool image_zero = field_is_zero_sampled(ops_.iota(fams_m[wi]), "iota-injective");
      bool fam_zero = family_is_zero_sampled(fams_m[wi], "iota-injective");
      injective.push_back({"family w" + std::to_string(wi) + ": " +
                               describe_family(fams_m[wi]),
                           image_zero, fam_zero});
    }
    add(agreement_check("exact-iota-injective", injective, cfg_));

    std::vector<ExprPair> composite;
    for (std::size_t wi = 0; wi + 1 < fams_m.size(); ++wi) {  // skip the zero family
      VectorFieldFamily out = ops_.project(ops_.iota(fams_m[wi]), product_, n.name);
      for (const auto& c : n.coords)
        composite.push_back({out.components.at(c), Expr(),
                             "family w" + std::to_string(wi) + " d/d" + c});
    }
    add(compare_exprs("exact-composite-zero", composite, product_.coords(), cfg_));

    // Fields annihilated by the second projection are embedded families.
    std::vector<ExprPair> kernel_image;
    auto horizontals = factor_supported_fields(m.name, cfg_.generated_fields);
    for (std::size_t i = 0; i < horizontals.size(); ++i) {
      const VectorField& v = horizontals[i];
      VectorField back = ops_.iota(ops_.project(v, product_, m.name));
      for (const auto& c : product_.coords())
        kernel_image.push_back({back.components.at(c), v.components.at(c),
                                "kernel field " + std::to_string(i) + " d/d" + c});
    }
    add(compare_exprs("exact-kernel-in-image", kernel_image, product_.coords(), cfg_));

    std::vector<ExprPair> surjective;
    for (std::size_t ui = 0; ui < fams_n.size(); ++ui) {
      VectorFieldFamily back = ops_.project(ops_.iota(fams_n[ui]), product_, n.name);
      for (const auto& c : n.coords)
        surjective.push_back({back.components.at(c), fams_n[ui].components.at(c),
                              "family u" + std::to_string(ui) + " d/d" + c});
    }
    add(compare_exprs("exact-projection-surjective", surjective, product_.coords(), cfg_));
  }

  // 1-form characterization through injected pullback, so a broken pullback
  // is caught here.
  bool oneform_annihilation(const VectorField& v, const Manifold& f) const {
    std::vector<OneForm> forms;
    for (const auto& c : f.coords) {
      std::map<std::string, Expr> comps;
      for (const auto& d : f.coords) comps[d] = Expr();
      comps[c] = Expr::constant(1.0);
      forms.push_back(OneForm{carrier_of(f), std::move(comps)});
    }
    FunctionGen gen(sub_seed(cfg_.seed, "suite-oneform-coefficients:" + f.name));
    for (int i = 0; i < cfg_.generated_functions; ++i) {
      std::map<std::string, Expr> comps;
      for (const auto& d : f.coords) comps[d] = gen.smooth(f.coords);
      forms.push_back(OneForm{carrier_of(f), std::move(comps)});
    }
    std::vector<Expr> pairings;
    for (const auto& form : forms)
      pairings.push_back(pair_oneform(ops_.pullback_oneform(form, product_), v).body);
    return exprs_are_zero_sampled(pairings, "oneform-annihilation:" + f.name);
  }

  void suite_one_forms() {
    const Manifold& m = product_.factors()[0];
    const Manifold& n = product_.factors()[1];

    std::vector<VectorField> mixed = fields_;
    for (auto& v : factor_supported_fields(m.name, 5)) mixed.push_back(std::move(v));
    for (auto& v : factor_supported_fields(n.name, 5)) mixed.push_back(std::move(v));

    std::vector<BoolItem> horiz, vert;
    for (std::size_t i = 0; i < mixed.size(); ++i) {
      std::string label = "field " + std::to_string(i) + ": " + describe_field(mixed[i]);
      horiz.push_back({label, is_horizontal(mixed[i], product_, cfg_).value,
                       oneform_annihilation(mixed[i], n)});
      vert.push_back({label, is_vertical(mixed[i], product_, cfg_).value,
                      oneform_annihilation(mixed[i], m)});
    }
    add(agreement_check("oneform-horizontal-agreement", horiz, cfg_));
    add(agreement_check("oneform-vertical-agreement", vert, cfg_));
  }

  void suite_three_factor() {
    std::vector<ExprPair> sum;
    std::vector<BoolItem> support, intersection;
    const auto& factors = product_.factors();

    for (std::size_t i = 0; i < fields_.size(); ++i) {
      const VectorField& v = fields_[i];
      std::string vtxt = "v" + std::to_string(i);
      std::vector<VectorField> parts;
      for (const auto& f : factors)
        parts.push_back(ops_.iota(ops_.project(v, product_, f.name)));
      for (std::size_t j = 0; j < test_functions_.size(); ++j) {
        SmoothFunction f{v.carrier, test_functions_[j]};
        Expr lhs;
        for (const auto& part : parts) lhs = lhs + apply_derivation(part, f).body;
        sum.push_back({lhs, apply_derivation(v, f).body,
                       vtxt + " sum action on " + to_string(f.body)});
      }
      for (std::size_t k = 0; k < factors.size(); ++k)
        for (std::size_t o = 0; o < factors.size(); ++o)
          if (o != k)
            support.push_back(
                {vtxt + " component " + factors[k].name + " vs pullbacks from " +
                     factors[o].name,
                 annihilates_pullbacks_from(parts[k], product_, factors[o].name, cfg_).value,
                 true});
    }
    add(compare_exprs("three-factor-direct-sum", sum, product_.coords(), cfg_));
    add(agreement_check("three-factor-component-support", support, cfg_));

    // Image of the first-factor embedding equals the joint kernel of the
    // other two projections.
    std::vector<VectorField> mixed = fields_;
    for (auto& v : factor_supported_fields(factors[0].name, 3)) mixed.push_back(std::move(v));
    for (auto& v : factor_supported_fields(factors[1].name, 3)) mixed.push_back(std::move(v));
    for (std::size_t i = 0; i < mixed.size(); ++i) {
      const VectorField& v = mixed[i];
      VectorField back = ops_.iota(ops_.project(v, product_, factors[0].name));
      std::vector<Expr> diffs;
      for (const auto& c : product_.coords())
        diffs.push_back(back.components.at(c) - v.components.at(c));
      bool in_image = exprs_are_zero_sampled(diffs, "three-factor-image");
      bool in_kernels =
          family_is_zero_sampled(ops_.project(v, product_, factors[1].name), "tf-ker1") &&
          family_is_zero_sampled(ops_.project(v, product_, factors[2].name), "tf-ker2");
      intersection.push_back({"field " + std::to_string(i) + ": " + describe_field(v),
                              in_image, in_kernels});
    }
    add(agreement_check("three-factor-image-intersection", intersection, cfg_));
  }

  std::vector<Check> take_checks() { return std::move(checks_); }

private:
  std::vector<Expr> values_of(const VectorField& v) const {
    std::vector<Expr> es;
    for (const auto& [c, e] : v.components) es.push_back(e);
    return es;
  }

  bool exprs_are_zero_sampled(const std::vector<Expr>& es, const std::string& tag) const {
    std::uint64_t seed = sub_seed(cfg_.seed, "zero-points:" + tag);
    for (const auto& e : es) {
      if (e.is_constant(0.0)) continue;
      PointStream stream(product_.coords(), seed);
      int accepted = 0;
      int consecutive = 0;
      while (accepted < cfg_.samples) {
        Bindings b = stream.next();
        double val;
        try {
          val = evaluate(e, b);
        } catch (const EvalError&) {
          if (++consecutive > 100)
            throw EvalError("rejection cap exceeded while sampling " + tag);
          continue;
        }
        consecutive = 0;
        ++accepted;
        if (std::abs(val) > cfg_.tolerance) return false;
      }
    }
    return true;
  }

  const ProductManifold& product_;
  SampleConfig cfg_;
  FieldOps ops_;
  std::vector<VectorField> fields_;
  std::vector<Expr> test_functions_;
  std::vector<Check> checks_;
};

}  // namespace

Check check_functions_equal(const SmoothFunction& f1, const SmoothFunction& f2,
                            const SampleConfig& cfg, const std::string& name) {
  if (f1.carrier != f2.carrier)
    throw SemanticError("cannot compare functions on different carriers");
  cfg.validate();
  return compare_exprs(name,
                       {{f1.body, f2.body,
                         to_string(f1.body) + " vs " + to_string(f2.body)}},
                       f1.carrier.coords, cfg);
}

FieldOps FieldOps::standard() {
  FieldOps ops;
  ops.iota = [](const VectorFieldFamily& w) { return iota_family(w); };
  ops.project = [](const VectorField& v, const ProductManifold& p, const std::string& a) {
    return project_to_family(v, p, a);
  };
  ops.pullback_oneform = [](const OneForm& f, const ProductManifold& p) {
    return fieldsplit::pullback_oneform(f, p);
  };
  return ops;
}

Mutation mutation_from_name(const std::string& name) {
  if (name == "iota-skip-zero") return Mutation::IotaSkipComplementZero;
  if (name == "project-swap-active") return Mutation::ProjectSwapActive;
  if (name == "oneform-drop-zero") return Mutation::OneFormDropComplementZero;
  throw SemanticError("unknown mutation '" + name +
                      "' (expected iota-skip-zero, project-swap-active or oneform-drop-zero)");
}

FieldOps mutated_ops(Mutation m) {
  FieldOps ops = FieldOps::standard();
  switch (m) {
    case Mutation::IotaSkipComplementZero:
      ops.iota = [](const VectorFieldFamily& w) {
        VectorField v = iota_family(w);
        for (const auto& c : w.product.complement_coords(w.active))
          v.components[c] = Expr::constant(1.0);
        return v;
      };
      break;
    case Mutation::ProjectSwapActive:
      ops.project = [](const VectorField& v, const ProductManifold& p,
                       const std::string& active) {
        const auto& factors = p.factors();
        std::string other = factors[(p.factor_index(active) + 1) % factors.size()].name;
        VectorFieldFamily wrong = project_to_family(v, p, other);
        const Manifold& a = p.factor(active);
        const Manifold& o = p.factor(other);
        std::map<std::string, Expr> comps;
        for (std::size_t i = 0; i < a.coords.size(); ++i)
          comps[a.coords[i]] = wrong.components.at(o.coords[i % o.coords.size()]);
        return VectorFieldFamily{p, active, std::move(comps)};
      };
      break;
    case Mutation::OneFormDropComplementZero:
      ops.pullback_oneform = [](const OneForm& f, const ProductManifold& p) {
        OneForm out = pullback_oneform(f, p);
        for (const auto& c : p.complement_coords(f.carrier.name))
          out.components[c] = Expr::constant(1.0);
        return out;
      };
      break;
  }
  return ops;
}

const std::vector<std::string> kSuiteNames = {
    "leibniz",        "pullbacks", "canonical-iso", "theorem",
    "exact-sequence", "one-forms", "three-factor",  "all"};

bool is_suite_name(const std::string& name) {
  return std::find(kSuiteNames.begin(), kSuiteNames.end(), name) != kSuiteNames.end();
}

CheckReport run_suite(const ProductManifold& product,
                      const std::vector<VectorField>& fields, const std::string& suite,
                      const SampleConfig& cfg, const FieldOps& ops) {
  cfg.validate();
  if (!is_suite_name(suite)) throw SemanticError("unknown suite '" + suite + "'");
  bool two = product.factors().size() == 2;
  bool all = suite == "all";
  if (!two && !all && (suite == "theorem" || suite == "exact-sequence" || suite == "one-forms"))
    throw SemanticError("suite '" + suite + "' requires a two-factor product");
  if (suite == "three-factor" && two)
    throw SemanticError("suite 'three-factor' requires a three-factor product");

  SuiteRunner runner(product, fields, cfg, ops);
  if (all || suite == "leibniz") runner.suite_leibniz();
  if (all || suite == "pullbacks") runner.suite_pullbacks();
  if (all || suite == "canonical-iso") runner.suite_canonical_iso();
  if (two && (all || suite == "theorem")) runner.suite_theorem();
  if (two && (all || suite == "exact-sequence")) runner.suite_exact_sequence();
  if (two && (all || suite == "one-forms")) runner.suite_one_forms();
  if (!two && (all || suite == "three-factor")) runner.suite_three_factor();

  CheckReport report{suite, cfg.seed, runner.take_checks(), true};
  for (const auto& c : report.checks)
    if (!c.pass) report.pass = false;
  return report;
}

}  // namespace fieldsplit
