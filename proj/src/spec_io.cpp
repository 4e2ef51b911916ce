#include "fieldsplit/spec_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

namespace fieldsplit {

namespace {

using nlohmann::json;

Expr parse_field_expr(const std::string& text, const std::string& context) {
  try {
    return parse_expr(text);
  } catch (const ParseError& e) {
    throw SemanticError("in " + context + ": " + e.what());
  }
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void write_witness(std::string& out, const PredicateWitness& w) {
  out += "{\"function\":\"" + json_escape(w.function) + "\",\"point\":{";
  bool first = true;
  for (const auto& [name, val] : w.point) {
    if (!first) out += ",";
    first = false;
    out += "\"" + json_escape(name) + "\":" + format_double(val);
  }
  out += "},\"value\":" + format_double(w.value) + "}";
}

void format_point(std::string& out, const Bindings& b) {
  out += "{";
  bool first = true;
  for (const auto& [name, val] : b) {
    if (!first) out += ", ";
    first = false;
    out += name + "=" + format_double(val);
  }
  out += "}";
}

}  // namespace

LoadedSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SemanticError("cannot open spec file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SemanticError("spec file '" + path + "': " + e.what());
  }

  std::vector<Manifold> manifolds;
  std::set<std::string> manifold_names;
  if (!doc.contains("manifolds") || !doc["manifolds"].is_array())
    throw SemanticError("spec file missing 'manifolds' array");
  for (const auto& m : doc["manifolds"]) {
    std::string name = m.at("name").get<std::string>();
    if (!manifold_names.insert(name).second)
      throw SemanticError("duplicate manifold name '" + name + "'");
    std::vector<std::string> coords;
    for (const auto& c : m.at("coords")) coords.push_back(c.get<std::string>());
    manifolds.push_back(make_manifold(name, coords));
  }

  if (!doc.contains("product") || !doc["product"].is_array())
    throw SemanticError("spec file missing 'product' array");
  std::vector<Manifold> factors;
  for (const auto& f : doc["product"]) {
    std::string fname = f.get<std::string>();
    auto it = std::find_if(manifolds.begin(), manifolds.end(),
                           [&](const Manifold& m) { return m.name == fname; });
    if (it == manifolds.end())
      throw SemanticError("product references unknown manifold '" + fname + "'");
    factors.push_back(*it);
  }
  ProductManifold product = ProductManifold::make(factors);

  auto resolve_carrier = [&](const std::string& on) -> Carrier {
    if (on == product.name()) return carrier_of(product);
    for (const auto& m : manifolds)
      if (m.name == on) return carrier_of(m);
    throw SemanticError("unknown carrier '" + on + "'");
  };

  LoadedSpec spec;

  std::set<std::string> function_names;
  for (const auto& f : doc.value("functions", json::array())) {
    std::string name = f.at("name").get<std::string>();
    if (!function_names.insert(name).second)
      throw SemanticError("duplicate function name '" + name + "'");
    Carrier carrier = resolve_carrier(f.at("on").get<std::string>());
    Expr body = parse_field_expr(f.at("expr").get<std::string>(), "function '" + name + "'");
    spec.functions.push_back({name, make_function(carrier, body)});
  }

  std::set<std::string> field_names;
  for (const auto& f : doc.value("fields", json::array())) {
    std::string name = f.at("name").get<std::string>();
    if (!field_names.insert(name).second)
      throw SemanticError("duplicate field name '" + name + "'");
    Carrier carrier = resolve_carrier(f.at("on").get<std::string>());
    std::map<std::string, Expr> comps;
    for (const auto& [coord, text] : f.at("components").items())
      comps[coord] = parse_field_expr(text.get<std::string>(),
                                      "field '" + name + "' component '" + coord + "'");
    try {
      spec.fields.push_back({name, make_field(carrier, std::move(comps))});
    } catch (const SemanticError& e) {
      throw SemanticError("field '" + name + "': " + e.what());
    }
  }
  spec.manifolds = std::move(manifolds);
  spec.product = std::move(product);
  return spec;
}

std::string report_to_json(const CheckReport& report) {
  std::string out = "{\"suite\":\"" + json_escape(report.suite) + "\",";
  out += "\"seed\":" + std::to_string(report.seed) + ",\"checks\":[";
  bool first = true;
  for (const auto& c : report.checks) {
    if (!first) out += ",";
    first = false;
    out += "{\"name\":\"" + json_escape(c.name) + "\",";
    out += "\"points_tested\":" + std::to_string(c.points_tested) + ",";
    out += "\"max_abs_error\":" + format_double(c.max_abs_error) + ",";
    out += std::string("\"pass\":") + (c.pass ? "true" : "false");
    if (c.witness) {
      out += ",\"witness\":";
      write_witness(out, *c.witness);
    }
    out += "}";
  }
  out += std::string("],\"pass\":") + (report.pass ? "true" : "false") + "}\n";
  return out;
}

void print_report(const CheckReport& report, std::ostream& out) {
  out << "suite: " << report.suite << "  seed: " << report.seed << "\n";
  for (const auto& c : report.checks) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
        << "  points=" << c.points_tested
        << "  max_abs_error=" << format_double(c.max_abs_error) << "\n";
    if (c.witness) {
      std::string pt;
      format_point(pt, c.witness->point);
      out << "       witness: " << c.witness->function << " at " << pt
          << " value=" << format_double(c.witness->value) << "\n";
    }
  }
  out << "overall: " << (report.pass ? "PASS" : "FAIL") << "\n";
}

int cmd_decompose(const std::string& spec_path, const std::string& field_name,
                  const std::string& json_path, std::ostream& out, std::ostream& err) {
  try {
    LoadedSpec spec = load_spec(spec_path);
    const NamedField* target = nullptr;
    for (const auto& nf : spec.fields)
      if (nf.name == field_name) target = &nf;
    if (!target) {
      err << "error: unknown field '" << field_name << "'\n";
      return kExitUsage;
    }
    if (target->field.carrier != carrier_of(spec.product)) {
      err << "error: field '" << field_name << "' is not carried on the product\n";
      return kExitUsage;
    }

    struct Part {
      std::string label;
      std::string factor;
      VectorField field;
    };
    std::vector<Part> parts;
    if (spec.product.factors().size() == 2) {
      auto [h, v] = decompose(target->field, spec.product);
      parts.push_back({"horizontal", spec.product.factors()[0].name, std::move(h)});
      parts.push_back({"vertical", spec.product.factors()[1].name, std::move(v)});
    } else {
      auto comps = multi_decompose(target->field, spec.product);
      for (std::size_t k = 0; k < comps.size(); ++k)
        parts.push_back({"component", spec.product.factors()[k].name, std::move(comps[k])});
    }

    out << "field: " << field_name << "\n";
    for (const auto& p : parts) {
      out << p.label << " (" << p.factor << "):\n";
      for (const auto& c : spec.product.coords())
        out << "  d/d" << c << ": " << to_string(p.field.components.at(c)) << "\n";
    }

    if (!json_path.empty()) {
      std::string j = "{\"field\":\"" + json_escape(field_name) + "\",\"components\":[";
      bool first = true;
      for (const auto& p : parts) {
        if (!first) j += ",";
        first = false;
        j += "{\"label\":\"" + p.label + "\",\"factor\":\"" + json_escape(p.factor) +
             "\",\"components\":{";
        bool firstc = true;
        for (const auto& c : spec.product.coords()) {
          if (!firstc) j += ",";
          firstc = false;
          j += "\"" + json_escape(c) + "\":\"" +
               json_escape(to_string(p.field.components.at(c))) + "\"";
        }
        j += "}}";
      }
      j += "]}\n";
      std::ofstream jf(json_path);
      if (!jf) {
        err << "error: cannot write '" << json_path << "'\n";
        return kExitUsage;
      }
      jf << j;
    }
    return kExitPass;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_verify(const std::string& spec_path, const VerifyOptions& options,
               std::ostream& out, std::ostream& err) {
  try {
    LoadedSpec spec = load_spec(spec_path);
    std::vector<VectorField> fields;
    for (const auto& nf : spec.fields)
      if (nf.field.carrier == carrier_of(spec.product)) fields.push_back(nf.field);

    FieldOps ops = options.mutation ? mutated_ops(*options.mutation) : FieldOps::standard();
    CheckReport report =
        run_suite(spec.product, fields, options.suite, options.cfg, ops);

    print_report(report, out);
    if (!options.json_path.empty()) {
      std::ofstream jf(options.json_path);
      if (!jf) {
        err << "error: cannot write '" << options.json_path << "'\n";
        return kExitUsage;
      }
      jf << report_to_json(report);
    }
    return report.pass ? kExitPass : kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace fieldsplit
