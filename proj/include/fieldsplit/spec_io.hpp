#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fieldsplit/verify.hpp"

namespace fieldsplit {

struct NamedFunction {
  std::string name;
  SmoothFunction fn;
};

struct NamedField {
  std::string name;
  VectorField field;
};

/// A fully constructed spec file: manifolds, the product (always named "V"),
/// named functions and named fields, in file order.
struct LoadedSpec {
  std::vector<Manifold> manifolds;
  ProductManifold product;
  std::vector<NamedFunction> functions;
  std::vector<NamedField> fields;
};

/// Loads and validates a JSON spec file. Throws SemanticError on I/O,
/// JSON or semantic problems and ParseError on expression syntax errors.
LoadedSpec load_spec(const std::string& path);

std::string report_to_json(const CheckReport& report);
void print_report(const CheckReport& report, std::ostream& out);

/// Exit codes shared by both commands: 0 pass, 1 verification failure,
/// 2 usage/parse/semantic error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

int cmd_decompose(const std::string& spec_path, const std::string& field_name,
                  const std::string& json_path, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string suite = "all";
  SampleConfig cfg;
  std::string json_path;  // empty: no report file
  std::optional<Mutation> mutation;  // self-test hook
};

int cmd_verify(const std::string& spec_path, const VerifyOptions& options,
               std::ostream& out, std::ostream& err);

}  // namespace fieldsplit
