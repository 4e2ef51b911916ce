#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fieldsplit/field.hpp"

using namespace fieldsplit;

namespace {

ProductManifold two_factor() {
  return ProductManifold::make({make_manifold("M", {"x"}), make_manifold("N", {"y"})});
}

ProductManifold three_factor() {
  return ProductManifold::make(
      {make_manifold("M", {"x"}), make_manifold("N", {"y"}), make_manifold("L", {"z"})});
}

VectorField field_on(const ProductManifold& v, std::map<std::string, Expr> comps) {
  return make_field(carrier_of(v), std::move(comps));
}

// Independent oracle for the decomposition: keep the factor's components,
// zero the rest, without going through the family maps.
VectorField component_split(const VectorField& v, const ProductManifold& product,
                            const std::string& factor_name) {
  const Manifold& f = product.factor(factor_name);
  std::map<std::string, Expr> comps;
  for (const auto& c : product.coords()) comps[c] = Expr();
  for (const auto& c : f.coords) comps[c] = v.components.at(c);
  return VectorField{v.carrier, std::move(comps)};
}

bool fields_agree(const VectorField& a, const VectorField& b, std::uint64_t seed) {
  PointStream pts(a.carrier.coords, seed);
  for (int i = 0; i < 50; ++i) {
    Bindings p = pts.next();
    for (const auto& c : a.carrier.coords) {
      double va = evaluate(a.components.at(c), p);
      double vb = evaluate(b.components.at(c), p);
      if (std::abs(va - vb) > 1e-9 * std::max({1.0, std::abs(va), std::abs(vb)})) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("apply_derivation") {
  ProductManifold v = two_factor();

  VectorField a_dx = field_on(v, {{"x", Expr::constant(3)}, {"y", Expr()}});
  SmoothFunction xsq = make_function(carrier_of(v), parse_expr("x^2"));
  Expr r = apply_derivation(a_dx, xsq).body;
  CHECK(evaluate(r, {{"x", 2.0}, {"y", 0.0}}) == doctest::Approx(12.0));

  // Hand-worked: (y d/dx + x d/dy)(x*y) = y^2 + x^2, cross-checked against
  // finite differences of the directional derivative.
  VectorField rot = field_on(v, {{"x", parse_expr("y")}, {"y", parse_expr("x")}});
  SmoothFunction f = make_function(carrier_of(v), parse_expr("x*y"));
  Expr d = apply_derivation(rot, f).body;
  PointStream pts({"x", "y"}, 81);
  for (int i = 0; i < 10; ++i) {
    Bindings p = pts.next();
    double expected = p["y"] * p["y"] + p["x"] * p["x"];
    CHECK(evaluate(d, p) == doctest::Approx(expected).epsilon(1e-12));
    double h = 1e-6;
    Bindings hi = p, lo = p;
    hi["x"] += h * p["y"]; hi["y"] += h * p["x"];
    lo["x"] -= h * p["y"]; lo["y"] -= h * p["x"];
    double fd = (evaluate(f.body, hi) - evaluate(f.body, lo)) / (2 * h);
    CHECK(evaluate(d, p) == doctest::Approx(fd).epsilon(1e-6));
  }

  SmoothFunction c = make_function(carrier_of(v), Expr::constant(7));
  CHECK(apply_derivation(rot, c).body == Expr());

  VectorField on_m = make_field(carrier_of(v.factor("M")), {{"x", parse_expr("x")}});
  CHECK_THROWS_AS(apply_derivation(on_m, f), SemanticError);
}

TEST_CASE("iota_family embeds with zero complementary components") {
  ProductManifold v = two_factor();
  VectorFieldFamily w = make_field_family(v, "M", {{"x", parse_expr("y")}});
  VectorField embedded = iota_family(w);
  CHECK(embedded.components.at("x") == parse_expr("y"));
  CHECK(embedded.components.at("y") == Expr());

  VectorFieldFamily zero = make_field_family(v, "M", {{"x", Expr()}});
  CHECK(iota_family(zero).components.at("x") == Expr());

  VectorFieldFamily param_free = make_field_family(v, "M", {{"x", Expr::constant(1)}});
  CHECK(iota_family(param_free).components.at("x") == Expr::constant(1));
}

TEST_CASE("project_to_family reads the active components") {
  ProductManifold v = two_factor();

  VectorField f1 = field_on(v, {{"x", parse_expr("sin(y)")}, {"y", parse_expr("x")}});
  VectorFieldFamily w1 = project_to_family(f1, v, "M");
  CHECK(evaluate(w1.components.at("x"), {{"y", 0.5}}) == doctest::Approx(std::sin(0.5)));

  VectorField vert = field_on(v, {{"x", Expr()}, {"y", parse_expr("x")}});
  CHECK(project_to_family(vert, v, "M").components.at("x") == Expr());

  VectorField both = field_on(v, {{"x", Expr::constant(1)}, {"y", Expr::constant(1)}});
  CHECK(project_to_family(both, v, "N").components.at("y") == Expr::constant(1));

  CHECK_THROWS_AS(project_to_family(f1, v, "Q"), SemanticError);
}

TEST_CASE("horizontal and vertical projections") {
  ProductManifold v = two_factor();
  VectorField rot = field_on(v, {{"x", parse_expr("y")}, {"y", parse_expr("x")}});

  VectorField h = horizontal_projection(rot, v);
  CHECK(h.components.at("x") == parse_expr("y"));
  CHECK(h.components.at("y") == Expr());
  CHECK(fields_agree(horizontal_projection(h, v), h, 91));  // idempotent fixed point

  VectorField w = vertical_projection(rot, v);
  CHECK(w.components.at("x") == Expr());
  CHECK(w.components.at("y") == parse_expr("x"));
  CHECK(fields_agree(vertical_projection(w, v), w, 93));

  VectorField purely_vertical = field_on(v, {{"x", Expr()}, {"y", parse_expr("x")}});
  CHECK(horizontal_projection(purely_vertical, v).components.at("x") == Expr());
  CHECK(fields_agree(vertical_projection(purely_vertical, v), purely_vertical, 95));
  VectorField purely_horizontal = field_on(v, {{"x", parse_expr("y")}, {"y", Expr()}});
  CHECK(vertical_projection(purely_horizontal, v).components.at("y") == Expr());
}

TEST_CASE("decompose") {
  ProductManifold v = two_factor();

  auto [h0, v0] = decompose(zero_field(carrier_of(v)), v);
  CHECK(h0.components.at("x") == Expr());
  CHECK(v0.components.at("y") == Expr());

  VectorField mixed =
      field_on(v, {{"x", parse_expr("exp(x*y)")}, {"y", parse_expr("cos(x)")}});
  auto [h, w] = decompose(mixed, v);
  CHECK(fields_agree(h, component_split(mixed, v, "M"), 101));
  CHECK(fields_agree(w, component_split(mixed, v, "N"), 103));

  // Sum identity at sampled points.
  SmoothFunction f = make_function(carrier_of(v), parse_expr("x^2*y + sin(x)"));
  Expr sum = apply_derivation(h, f).body + apply_derivation(w, f).body;
  Expr direct = apply_derivation(mixed, f).body;
  PointStream pts({"x", "y"}, 105);
  for (int i = 0; i < 10; ++i) {
    Bindings p = pts.next();
    double r = evaluate(direct, p);
    CHECK(evaluate(sum, p) == doctest::Approx(r).epsilon(1e-12).scale(std::abs(r) + 1));
  }

  ProductManifold v3 = three_factor();
  CHECK_THROWS_AS(decompose(zero_field(carrier_of(v3)), v3), SemanticError);
}

TEST_CASE("operator composition agrees with the component-split oracle") {
  std::vector<ProductManifold> products = {
      two_factor(),
      ProductManifold::make({make_manifold("M", {"x1", "x2"}), make_manifold("N", {"y"})}),
      ProductManifold::make(
          {make_manifold("M", {"x1", "x2"}), make_manifold("N", {"y1", "y2"})})};
  for (const auto& v : products) {
    FunctionGen gen(111);
    for (int i = 0; i < 10; ++i) {
      std::map<std::string, Expr> comps;
      for (const auto& c : v.coords()) comps[c] = gen.smooth(v.coords());
      VectorField field = field_on(v, std::move(comps));
      CHECK(fields_agree(horizontal_projection(field, v),
                         component_split(field, v, v.factors()[0].name), 113));
      CHECK(fields_agree(vertical_projection(field, v),
                         component_split(field, v, v.factors()[1].name), 115));
    }
  }
}

TEST_CASE("is_horizontal and is_vertical") {
  ProductManifold v = two_factor();
  SampleConfig cfg;
  cfg.samples = 50;

  VectorField h = field_on(v, {{"x", parse_expr("y")}, {"y", Expr()}});
  CHECK(is_horizontal(h, v, cfg).value);
  PredicateResult r = is_vertical(h, v, cfg);
  CHECK(!r.value);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->function == "x");

  VectorField zero = zero_field(carrier_of(v));
  CHECK(is_horizontal(zero, v, cfg).value);
  CHECK(is_vertical(zero, v, cfg).value);

  VectorField both = field_on(v, {{"x", Expr::constant(1)}, {"y", Expr::constant(1)}});
  CHECK(!is_horizontal(both, v, cfg).value);
  CHECK(!is_vertical(both, v, cfg).value);
  CHECK(is_horizontal(both, v, cfg).witness.has_value());
}

TEST_CASE("one-forms") {
  ProductManifold v = two_factor();
  Carrier m = carrier_of(v.factor("M"));

  OneForm dx = make_oneform(m, {{"x", Expr::constant(1)}});
  OneForm dx_v = pullback_oneform(dx, v);
  CHECK(dx_v.components.at("x") == Expr::constant(1));
  CHECK(dx_v.components.at("y") == Expr());

  OneForm xdx = make_oneform(m, {{"x", parse_expr("x")}});
  CHECK(pullback_oneform(xdx, v).components.at("x") == parse_expr("x"));

  OneForm eta = make_oneform(carrier_of(v.factor("N")), {{"y", parse_expr("sin(y)")}});
  CHECK(pullback_oneform(eta, v).components.at("y") == parse_expr("sin(y)"));

  VectorField ddx = field_on(v, {{"x", Expr::constant(1)}, {"y", Expr()}});
  CHECK(pair_oneform(dx_v, ddx).body == Expr::constant(1));

  OneForm dy_v = pullback_oneform(make_oneform(carrier_of(v.factor("N")),
                                               {{"y", Expr::constant(1)}}),
                                  v);
  VectorField ydx = field_on(v, {{"x", parse_expr("y")}, {"y", Expr()}});
  CHECK(pair_oneform(dy_v, ydx).body == Expr());

  // (x dx + dy, y d/dx + x d/dy) = x*y + x, frozen by hand.
  OneForm alpha = make_oneform(carrier_of(v), {{"x", parse_expr("x")}, {"y", Expr::constant(1)}});
  VectorField rot = field_on(v, {{"x", parse_expr("y")}, {"y", parse_expr("x")}});
  Expr paired = pair_oneform(alpha, rot).body;
  PointStream pts({"x", "y"}, 121);
  for (int i = 0; i < 10; ++i) {
    Bindings p = pts.next();
    CHECK(evaluate(paired, p) == doctest::Approx(p["x"] * p["y"] + p["x"]).epsilon(1e-12));
  }

  // The 1-form characterization matches the derivation-based predicate.
  SampleConfig cfg;
  cfg.samples = 50;
  CHECK(annihilated_by_pulled_back_oneforms(ydx, v, "N", cfg).value);
  CHECK(!annihilated_by_pulled_back_oneforms(rot, v, "N", cfg).value);
}

TEST_CASE("multi_decompose") {
  ProductManifold v3 = three_factor();
  VectorField cyc = field_on(v3, {{"x", parse_expr("z")},
                                  {"y", parse_expr("x")},
                                  {"z", parse_expr("y")}});
  auto parts = multi_decompose(cyc, v3);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].components.at("x") == parse_expr("z"));
  CHECK(parts[0].components.at("y") == Expr());
  CHECK(parts[1].components.at("y") == parse_expr("x"));
  CHECK(parts[2].components.at("z") == parse_expr("y"));

  auto zeros = multi_decompose(zero_field(carrier_of(v3)), v3);
  for (const auto& part : zeros)
    for (const auto& c : v3.coords()) CHECK(part.components.at(c) == Expr());

  VectorField ddx = field_on(v3, {{"x", Expr::constant(1)}, {"y", Expr()}, {"z", Expr()}});
  auto single = multi_decompose(ddx, v3);
  CHECK(single[0].components.at("x") == Expr::constant(1));
  CHECK(single[1].components.at("y") == Expr());
  CHECK(single[2].components.at("z") == Expr());

  CHECK_THROWS_AS(multi_decompose(ddx, two_factor()), SemanticError);

  SampleConfig cfg;
  cfg.samples = 50;
  CHECK(annihilates_pullbacks_from(parts[0], v3, "N", cfg).value);
  CHECK(annihilates_pullbacks_from(parts[0], v3, "L", cfg).value);
  CHECK(!annihilates_pullbacks_from(parts[0], v3, "M", cfg).value);
}

TEST_CASE("field construction validation") {
  ProductManifold v = two_factor();
  CHECK_THROWS_AS(make_field(carrier_of(v), {{"x", parse_expr("y")}}), SemanticError);
  CHECK_THROWS_AS(make_field(carrier_of(v), {{"x", Expr()}, {"y", Expr()}, {"z", Expr()}}),
                  SemanticError);
  CHECK_THROWS_AS(make_field(carrier_of(v), {{"x", parse_expr("q")}, {"y", Expr()}}),
                  SemanticError);
  CHECK_THROWS_AS(make_field_family(v, "M", {{"y", Expr()}}), SemanticError);
}
