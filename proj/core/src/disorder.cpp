#include "irh/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "irh/errors.hpp"
#include "irh/numeric.hpp"

namespace irh {

namespace {

std::vector<DisorderSpec::Atom> canonicalize(std::vector<DisorderSpec::Atom> atoms) {
  if (atoms.empty()) throw std::domain_error("DisorderSpec: no atoms");
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });
  // merge colliding atoms
  std::vector<DisorderSpec::Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && std::abs(a.value - merged.back().value) < 1e-12)
      merged.back().weight += a.weight;
    else
      merged.push_back(a);
  }
  double total = 0.0;
  for (const auto& a : merged) {
    if (a.value < 0.0) throw std::domain_error("DisorderSpec: atom value < 0");
    if (a.weight <= 0.0 || a.weight > 1.0 + 1e-12)
      throw std::domain_error("DisorderSpec: atom weight outside (0, 1]");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::domain_error("DisorderSpec: weights do not sum to 1");
  if (std::abs(merged.front().value) > 1e-12)
    throw std::domain_error("DisorderSpec: minimum value must be 0");
  merged.front().value = 0.0;
  return merged;
}

}  // namespace

DisorderSpec DisorderSpec::point_mass(double value) {
  return discrete({{value, 1.0}});
}

DisorderSpec DisorderSpec::discrete(std::vector<Atom> atoms) {
  DisorderSpec s;
  s.atoms_ = canonicalize(std::move(atoms));
  return s;
}

DisorderSpec DisorderSpec::bernoulli(double p, double eps) {
  if (p <= 0.0 || p >= 1.0) throw std::domain_error("bernoulli: p outside (0, 1)");
  if (eps < 0.0) throw std::domain_error("bernoulli: eps < 0");
  return discrete({{eps, p}, {0.0, 1.0 - p}});
}

DisorderSpec DisorderSpec::multinomial_equidistant(int m, double eps) {
  if (m < 2) throw std::domain_error("multinomial_equidistant: m < 2");
  if (eps < 0.0) throw std::domain_error("multinomial_equidistant: eps < 0");
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    atoms.push_back({k * eps / (m - 1), 1.0 / m});
  return discrete(std::move(atoms));
}

DisorderSpec DisorderSpec::uniform(double eps) {
  if (eps < 0.0) throw std::domain_error("uniform: eps < 0");
  if (eps == 0.0) return point_mass(0.0);
  DisorderSpec s;
  s.uniform_ = true;
  s.width_ = eps;
  return s;
}

double DisorderSpec::max_value() const {
  return uniform_ ? width_ : atoms_.back().value;
}

bool DisorderSpec::is_point_mass_at_zero() const {
  return !uniform_ && atoms_.size() == 1;
}

double DisorderSpec::expect(const std::function<double(double)>& g,
                            const QuadratureConfig& quad) const {
  if (!uniform_) {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight * g(a.value);
    return s;
  }
  auto integrate = [&](int order) {
    const auto rule = numeric::gauss_legendre(order, 0.0, width_);
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += rule.weights[i] * g(rule.nodes[i]);
    return s / width_;
  };
  int order = quad.initial_order;
  double prev = integrate(order);
  for (int k = 0; k < quad.max_doublings; ++k) {
    order *= 2;
    const double cur = integrate(order);
    if (std::abs(cur - prev) <= quad.rel_tol * std::max(1.0, std::abs(cur)))
      return cur;
    prev = cur;
  }
  std::ostringstream msg;
  msg << "uniform expectation did not converge after " << quad.max_doublings
      << " order doublings (last " << prev << ")";
  throw quadrature_error(msg.str(), prev, integrate(order / 2));
}

std::vector<double> DisorderSpec::sample(std::uint64_t seed,
                                         std::size_t count) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out;
  out.reserve(count);
  if (uniform_) {
    for (std::size_t i = 0; i < count; ++i) out.push_back(width_ * u(rng));
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double x = u(rng);
    double acc = 0.0;
    double v = atoms_.back().value;
    for (const auto& a : atoms_) {
      acc += a.weight;
      if (x <= acc) {
        v = a.value;
        break;
      }
    }
    out.push_back(v);
  }
  return out;
}

nlohmann::json DisorderSpec::to_json() const {
  nlohmann::json j;
  if (uniform_) {
    j["kind"] = "uniform";
    j["eps"] = width_;
    return j;
  }
  if (atoms_.size() == 1) {
    j["kind"] = "point";
    j["eps"] = atoms_[0].value;
    return j;
  }
  if (atoms_.size() == 2) {
    j["kind"] = "bernoulli";
    j["p"] = atoms_[1].weight;
    j["eps"] = atoms_[1].value;
    return j;
  }
  j["kind"] = "discrete";
  auto arr = nlohmann::json::array();
  for (const auto& a : atoms_) arr.push_back({{"value", a.value}, {"weight", a.weight}});
  j["atoms"] = arr;
  return j;
}

DisorderSpec DisorderSpec::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "bernoulli")
    return bernoulli(j.at("p").get<double>(), j.at("eps").get<double>());
  if (kind == "multinomial")
    return multinomial_equidistant(j.at("m").get<int>(), j.at("eps").get<double>());
  if (kind == "uniform") return uniform(j.at("eps").get<double>());
  if (kind == "point") return point_mass(j.value("eps", 0.0));
  if (kind == "discrete") {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.push_back({a.at("value").get<double>(), a.at("weight").get<double>()});
    return discrete(std::move(atoms));
  }
  throw std::domain_error("DisorderSpec: unknown kind '" + kind + "'");
}

}  // namespace irh
