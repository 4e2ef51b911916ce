#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fieldsplit/spec_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Horizontal/vertical decomposition of vector fields on product manifolds"};
  app.require_subcommand(1);

  std::string spec_path, field_name, json_path;
  auto* dec = app.add_subcommand("decompose",
                                 "Split a field into its per-factor components");
  dec->add_option("--spec", spec_path, "spec file (JSON)")->required();
  dec->add_option("--field", field_name, "field name from the spec file")->required();
  dec->add_option("--json", json_path, "write the machine-readable form here");

  fieldsplit::VerifyOptions opts;
  std::string mutation_name;
  auto* ver = app.add_subcommand("verify", "Run a verification suite over the spec's fields");
  ver->add_option("--spec", spec_path, "spec file (JSON)")->required();
  ver->add_option("--suite", opts.suite,
                  "one of leibniz, pullbacks, canonical-iso, theorem, exact-sequence, "
                  "one-forms, three-factor, all")
      ->required();
  ver->add_option("--samples", opts.cfg.samples, "sample points per check");
  ver->add_option("--tol", opts.cfg.tolerance, "relative-absolute tolerance");
  ver->add_option("--seed", opts.cfg.seed, "random seed");
  ver->add_option("--gen-funcs", opts.cfg.generated_functions, "generated test functions");
  ver->add_option("--gen-fields", opts.cfg.generated_fields, "generated test fields");
  ver->add_option("--json", opts.json_path, "write the report file here");
  ver->add_option("--mutate", mutation_name,
                  "self-test hook: run with a deliberately broken operator "
                  "(iota-skip-zero, project-swap-active, oneform-drop-zero)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : fieldsplit::kExitUsage;
  }

  if (dec->parsed())
    return fieldsplit::cmd_decompose(spec_path, field_name, json_path, std::cout, std::cerr);

  if (!mutation_name.empty()) {
    try {
      opts.mutation = fieldsplit::mutation_from_name(mutation_name);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return fieldsplit::kExitUsage;
    }
  }
  return fieldsplit::cmd_verify(spec_path, opts, std::cout, std::cerr);
}
