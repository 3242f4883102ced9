#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace irh {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  int max_doublings = 12;
  int initial_order = 16;
};

/// Probability law of the single-site random energy: either a finite set of
/// atoms (value, weight) or the uniform distribution on [0, width]. The
/// minimum of the support is normalized to 0. Immutable after construction.
class DisorderSpec {
public:
  struct Atom {
    double value;
    double weight;
  };

  static DisorderSpec point_mass(double value = 0.0);
  static DisorderSpec discrete(std::vector<Atom> atoms);
  // atoms (eps, p) and (0, 1-p); colliding atoms merge
  static DisorderSpec bernoulli(double p, double eps);
  // m equal-weight atoms at k*eps/(m-1), k = 0..m-1
  static DisorderSpec multinomial_equidistant(int m, double eps);
  // uniform on [0, eps]; eps = 0 degenerates to the point mass at 0
  static DisorderSpec uniform(double eps);

  bool is_uniform() const { return uniform_; }
  double width() const { return width_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  // supremum of the support
  double max_value() const;
  bool is_point_mass_at_zero() const;

  // E[g(eps)]: exact weighted sum for discrete laws, Gauss-Legendre with
  // order doubling for the uniform law.
  double expect(const std::function<double(double)>& g,
                const QuadratureConfig& quad = {}) const;

  // i.i.d. draws, deterministic for a fixed seed
  std::vector<double> sample(std::uint64_t seed, std::size_t count) const;

  nlohmann::json to_json() const;
  static DisorderSpec from_json(const nlohmann::json& j);

private:
  DisorderSpec() = default;
  bool uniform_ = false;
  double width_ = 0.0;              // uniform only
  std::vector<Atom> atoms_;         // discrete only, sorted by value
};

}  // namespace irh
