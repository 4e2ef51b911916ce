#include "fieldsplit/sampling.hpp"

namespace fieldsplit {

void SampleConfig::validate() const {
  if (samples < 1) throw SemanticError("samples must be >= 1");
  if (!(tolerance > 0.0)) throw SemanticError("tolerance must be > 0");
  if (generated_functions < 0) throw SemanticError("generated function count must be >= 0");
  if (generated_fields < 1) throw SemanticError("generated field count must be >= 1");
}

std::uint64_t sub_seed(std::uint64_t seed, std::string_view tag) {
  // FNV-1a over the tag, mixed with the seed through splitmix64.
  std::uint64_t h = 1469598103934665603ull;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull + h;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0,1)
}

}  // namespace

PointStream::PointStream(std::vector<std::string> coords, std::uint64_t seed)
    : coords_(std::move(coords)), rng_(seed) {}

double PointStream::next_value() { return 2.0 * to_unit(rng_()) - 1.0; }

Bindings PointStream::next() {
  Bindings b;
  for (const auto& c : coords_) b[c] = next_value();
  return b;
}

std::vector<Bindings> sample_points(const std::vector<std::string>& coords,
                                    const SampleConfig& cfg) {
  cfg.validate();
  PointStream stream(coords, cfg.seed);
  std::vector<Bindings> out;
  out.reserve(static_cast<std::size_t>(cfg.samples));
  for (int i = 0; i < cfg.samples; ++i) out.push_back(stream.next());
  return out;
}

double FunctionGen::uniform() { return 2.0 * to_unit(rng_()) - 1.0; }

Expr FunctionGen::polynomial(const std::vector<std::string>& coords) {
  // Enumerate monomials of total degree <= 3 in product order.
  const int n = static_cast<int>(coords.size());
  Expr result = Expr::constant(uniform());
  std::vector<int> exps(static_cast<std::size_t>(n), 0);
  // Odometer over exponent vectors with entries 0..3, keeping total <= 3.
  for (;;) {
    int i = 0;
    while (i < n) {
      ++exps[static_cast<std::size_t>(i)];
      int total = 0;
      for (int e : exps) total += e;
      if (exps[static_cast<std::size_t>(i)] <= 3 && total <= 3) break;
      exps[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == n) break;
    Expr mono = Expr::constant(uniform());
    for (int k = 0; k < n; ++k) {
      int e = exps[static_cast<std::size_t>(k)];
      if (e == 1)
        mono = mono * Expr::variable(coords[static_cast<std::size_t>(k)]);
      else if (e > 1)
        mono = mono * pow(Expr::variable(coords[static_cast<std::size_t>(k)]),
                          Expr::constant(e));
    }
    result = result + mono;
  }
  return result;
}

Expr FunctionGen::smooth(const std::vector<std::string>& coords) {
  Expr p = polynomial(coords);
  std::uint64_t choice = rng_() % 3;
  if (choice == 1) return sin(p);
  if (choice == 2) return exp(p);
  return p;
}

}  // namespace fieldsplit
