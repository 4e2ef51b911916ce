#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fieldsplit/spec_io.hpp"
#include "fieldsplit/verify.hpp"

using namespace fieldsplit;

namespace {

ProductManifold two_factor() {
  return ProductManifold::make({make_manifold("M", {"x"}), make_manifold("N", {"y"})});
}

SampleConfig quick_cfg() {
  SampleConfig cfg;
  cfg.samples = 40;
  cfg.generated_fields = 6;
  cfg.generated_functions = 4;
  return cfg;
}

VectorField rotation_field(const ProductManifold& v) {
  return make_field(carrier_of(v), {{"x", parse_expr("y")}, {"y", parse_expr("x")}});
}

}  // namespace

TEST_CASE("sample_points determinism and range") {
  SampleConfig cfg;
  cfg.seed = 7;
  cfg.samples = 3;
  auto a = sample_points({"x", "y"}, cfg);
  auto b = sample_points({"x", "y"}, cfg);
  REQUIRE(a.size() == 3);
  CHECK(a == b);
  for (const auto& p : a)
    for (const auto& [name, val] : p) {
      CHECK(val >= -1.0);
      CHECK(val <= 1.0);
    }

  // Prefix stability: a shorter draw is a prefix of a longer one.
  cfg.samples = 10;
  auto longer = sample_points({"x", "y"}, cfg);
  for (int i = 0; i < 3; ++i) CHECK(longer[i] == a[i]);

  cfg.samples = 0;
  CHECK_THROWS_AS(sample_points({"x"}, cfg), SemanticError);
}

TEST_CASE("check_functions_equal") {
  ProductManifold v = two_factor();
  Carrier m = carrier_of(v.factor("M"));
  SampleConfig cfg;

  Check same = check_functions_equal(make_function(m, parse_expr("x^2")),
                                     make_function(m, parse_expr("x^2")), cfg);
  CHECK(same.pass);
  CHECK(same.max_abs_error == 0.0);
  CHECK(same.points_tested == cfg.samples);

  Check trig = check_functions_equal(make_function(m, parse_expr("sin(x)^2")),
                                     make_function(m, parse_expr("1 - cos(x)^2")), cfg);
  CHECK(trig.pass);

  Check offset = check_functions_equal(make_function(m, parse_expr("x")),
                                       make_function(m, parse_expr("x + 1e-3")), cfg);
  CHECK(!offset.pass);
  REQUIRE(offset.witness.has_value());
  CHECK(offset.witness->value == doctest::Approx(1e-3));

  CHECK_THROWS_AS(check_functions_equal(make_function(m, parse_expr("x")),
                                        make_function(carrier_of(v), parse_expr("x")), cfg),
                  SemanticError);
}

TEST_CASE("evaluation failures surface as failed checks with a witness") {
  ProductManifold v = two_factor();
  Carrier m = carrier_of(v.factor("M"));
  SampleConfig cfg;
  // log is undefined on half the sampling box, so every point is rejected
  // somewhere and the rejection cap trips.
  Check c = check_functions_equal(make_function(m, parse_expr("log(x - 2)")),
                                  make_function(m, Expr()), cfg);
  CHECK(!c.pass);
  CHECK(c.witness.has_value());
}

TEST_CASE("run_suite passes on the hand-worked field") {
  ProductManifold v = two_factor();
  CheckReport report = run_suite(v, {rotation_field(v)}, "theorem", quick_cfg());
  CHECK(report.pass);
  CHECK(!report.checks.empty());
  for (const auto& c : report.checks) CHECK(c.pass);
}

TEST_CASE("every suite passes with the standard operators") {
  ProductManifold v = two_factor();
  for (const char* suite : {"leibniz", "pullbacks", "canonical-iso", "theorem",
                            "exact-sequence", "one-forms", "all"}) {
    CheckReport report = run_suite(v, {rotation_field(v)}, suite, quick_cfg());
    CHECK_MESSAGE(report.pass, "suite ", suite);
  }
  ProductManifold v3 = ProductManifold::make(
      {make_manifold("M", {"x"}), make_manifold("N", {"y"}), make_manifold("L", {"z"})});
  CheckReport tf = run_suite(v3, {}, "three-factor", quick_cfg());
  CHECK(tf.pass);
  CheckReport all3 = run_suite(v3, {}, "all", quick_cfg());
  CHECK(all3.pass);
}

TEST_CASE("suite and factor-count validation") {
  ProductManifold v = two_factor();
  CHECK_THROWS_AS(run_suite(v, {}, "nonsense", quick_cfg()), SemanticError);
  CHECK_THROWS_AS(run_suite(v, {}, "three-factor", quick_cfg()), SemanticError);
}

TEST_CASE("each canonical mutation is caught") {
  ProductManifold v = two_factor();
  for (Mutation m : {Mutation::IotaSkipComplementZero, Mutation::ProjectSwapActive,
                     Mutation::OneFormDropComplementZero}) {
    CheckReport report = run_suite(v, {rotation_field(v)}, "all", quick_cfg(), mutated_ops(m));
    CHECK(!report.pass);
    bool any_witness = false;
    for (const auto& c : report.checks)
      if (!c.pass && c.witness) any_witness = true;
    CHECK(any_witness);
  }
  CHECK(mutation_from_name("iota-skip-zero") == Mutation::IotaSkipComplementZero);
  CHECK_THROWS_AS(mutation_from_name("bogus"), SemanticError);
}

TEST_CASE("a broken projection is caught on a field with a vertical part") {
  // Projection that leaks every component into the active slots.
  ProductManifold v = two_factor();
  FieldOps ops = FieldOps::standard();
  ops.project = [](const VectorField& field, const ProductManifold& p,
                   const std::string& active) {
    Expr leak;
    for (const auto& [c, e] : field.components) leak = leak + e;
    std::map<std::string, Expr> comps;
    for (const auto& c : p.factor(active).coords) comps[c] = leak;
    return VectorFieldFamily{p, active, std::move(comps)};
  };
  VectorField vertical_part =
      make_field(carrier_of(v), {{"x", Expr()}, {"y", parse_expr("x")}});
  CheckReport report = run_suite(v, {vertical_part}, "theorem", quick_cfg(), ops);
  CHECK(!report.pass);
}

TEST_CASE("reports are byte-identical across runs") {
  ProductManifold v = two_factor();
  SampleConfig cfg = quick_cfg();
  CheckReport a = run_suite(v, {rotation_field(v)}, "all", cfg);
  CheckReport b = run_suite(v, {rotation_field(v)}, "all", cfg);
  CHECK(report_to_json(a) == report_to_json(b));

  cfg.seed = 43;
  CheckReport c = run_suite(v, {rotation_field(v)}, "all", cfg);
  CHECK(report_to_json(a) != report_to_json(c));  // the seed is part of the report
}

TEST_CASE("iota image projects to the zero family on the other factor") {
  ProductManifold v = two_factor();
  VectorFieldFamily w = make_field_family(v, "M", {{"x", parse_expr("sin(y)*x")}});
  VectorFieldFamily out = project_to_family(iota_family(w), v, "N");
  CHECK(out.components.at("y") == Expr());
}
