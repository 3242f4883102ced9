#include "irh/phase.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "irh/errors.hpp"
#include "irh/numeric.hpp"
#include "irh/pressure.hpp"

namespace irh {

namespace {

constexpr double kBetaLo = 1e-3;
constexpr int kBetaScanPoints = 64;
constexpr double kBetaTol = 1e-9;

double lambda_of(const Interaction& in) {
  if (in.kind != InteractionKind::Finite)
    throw std::logic_error("lambda_of: not a finite interaction");
  return in.lambda;
}

// density with a cutoff blowup read as "occupation too large to resolve",
// which can only happen far above any desk-scale target density
double density_or_huge(double beta, double mu, const Interaction& in,
                       const DisorderSpec& spec) {
  try {
    return density_at(beta, mu, in, spec);
  } catch (const cutoff_error&) {
    return std::numeric_limits<double>::max();
  }
}

// closed-form mu for the hard-core uniform law, overflow-safe log-sinh
double solve_mu_uniform_hc(double beta, double rho, double eps) {
  auto log_sinh = [](double u) {
    return u + std::log1p(-std::exp(-2.0 * u)) - std::log(2.0);
  };
  const double a = 0.5 * beta * rho * eps;
  const double b = 0.5 * beta * (1.0 - rho) * eps;
  return 1.0 + 0.5 * eps + (log_sinh(a) - log_sinh(b)) / beta;
}

}  // namespace

std::string to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Converged: return "converged";
    case PointStatus::Divergent: return "divergent";
    case PointStatus::BelowBracket: return "below_bracket";
    case PointStatus::Failed: return "failed";
  }
  return "unknown";
}

double gap_function(double beta, double mu, const Interaction& interaction,
                    const DisorderSpec& spec) {
  switch (interaction.kind) {
    case InteractionKind::HardCore:
      return spec.expect([&](double eps) {
        return 2.0 * hc_gap_term(beta, mu - eps - 1.0);
      }) - 2.0;
    case InteractionKind::Finite:
      return spec.expect([&](double eps) {
        return ptilde_dd(beta, mu - eps, interaction.lambda);
      }) - 2.0;
    case InteractionKind::Perfect:
      throw std::domain_error(
          "gap_function: perfect bosons use perfect_critical_beta");
  }
  throw std::logic_error("unreachable");
}

double density_at(double beta, double mu, const Interaction& interaction,
                  const DisorderSpec& spec) {
  switch (interaction.kind) {
    case InteractionKind::HardCore:
      return spec.expect([&](double eps) {
        return hc_density_term(beta, mu - eps - 1.0);
      });
    case InteractionKind::Finite:
      return spec.expect([&](double eps) {
        return site_density(beta, mu - eps, interaction.lambda);
      });
    case InteractionKind::Perfect:
      return perfect_density(spec, beta, mu);
  }
  throw std::logic_error("unreachable");
}

double solve_mu(double beta, double rho, const Interaction& interaction,
                const DisorderSpec& spec) {
  if (interaction.kind == InteractionKind::HardCore) {
    if (rho <= 0.0 || rho >= 1.0)
      throw std::domain_error("solve_mu: hard-core density must be in (0,1)");
    if (spec.is_uniform())
      return solve_mu_uniform_hc(beta, rho, spec.width());
  } else if (rho <= 0.0) {
    throw std::domain_error("solve_mu: density must be positive");
  }

  const double lambda =
      interaction.kind == InteractionKind::Finite ? interaction.lambda : 0.0;
  double lo = -10.0;
  double hi = 1.0 + 2.0 * lambda * (std::ceil(rho) + 1.0) + spec.max_value() + 10.0;
  if (interaction.kind == InteractionKind::HardCore)
    hi = 1.0 + spec.max_value() + 10.0;
  // expand outward until the target density is bracketed
  int guard = 0;
  while (density_or_huge(beta, lo, interaction, spec) > rho) {
    lo = 2.0 * lo - 10.0;
    if (++guard > 60) throw solver_error("solve_mu: lower bracket expansion failed");
  }
  guard = 0;
  while (density_or_huge(beta, hi, interaction, spec) < rho) {
    hi = 2.0 * hi + 10.0;
    if (++guard > 60) throw solver_error("solve_mu: upper bracket expansion failed");
  }

  // The density can be numerically flat in mu across an incompressible
  // plateau at large beta, where any single bisection would drift to one
  // plateau edge. Locate both edges of the tie region and return the
  // midpoint, which is the correct large-beta limit of mu(beta, rho).
  // quadrature/round-off noise well below any physical density difference
  const double tie = 1e-12 * std::max(1.0, rho);
  auto edge = [&](bool tie_is_high) {
    double a = lo, b = hi;
    for (int i = 0; i < 200 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++i) {
      const double mid = 0.5 * (a + b);
      const double fm = density_or_huge(beta, mid, interaction, spec) - rho;
      const bool high = tie_is_high ? (fm >= -tie) : (fm > tie);
      (high ? b : a) = mid;
    }
    return 0.5 * (a + b);
  };
  return 0.5 * (edge(true) + edge(false));
}

double perfect_critical_beta(double rho, const DisorderSpec& spec) {
  if (rho <= 0.0) throw std::domain_error("perfect_critical_beta: rho <= 0");
  auto g = [&](double beta) {
    return perfect_critical_density(spec, beta) - rho;
  };
  double lo = 1.0, hi = 1.0;
  while (g(lo) < 0.0) lo *= 0.5;   // density grows as beta -> 0
  while (g(hi) > 0.0) hi *= 2.0;
  return numeric::bisect(g, lo, hi, 1e-12);
}

CriticalPoint critical_beta(double rho, const Interaction& interaction,
                            const DisorderSpec& spec, double beta_max) {
  CriticalPoint pt;
  pt.rho = rho;
  if (interaction.kind == InteractionKind::Perfect) {
    pt.beta_c = perfect_critical_beta(rho, spec);
    pt.mu_c = 0.0;
    pt.status = PointStatus::Converged;
    pt.n_roots = 1;
    return pt;
  }

  auto gap_at = [&](double beta) {
    return gap_function(beta, solve_mu(beta, rho, interaction, spec),
                        interaction, spec);
  };

  // Geometric beta scan; points that cannot be resolved at the current
  // cutoff cap (tiny beta, small lambda) are skipped, not fatal. Residuals
  // inside a small dead band carry no sign information: at a marginal
  // density the residual saturates to an exact numerical zero from below
  // without ever crossing, and must not count as a root.
  constexpr double kGapTol = 1e-12;
  const double ratio = std::pow(beta_max / kBetaLo, 1.0 / (kBetaScanPoints - 1));
  double prev_beta = 0.0;
  int prev_sign = 0;
  double root_lo = -1.0, root_hi = -1.0;
  for (int i = 0; i < kBetaScanPoints; ++i) {
    const double beta = kBetaLo * std::pow(ratio, i);
    double g;
    try {
      g = gap_at(beta);
    } catch (const cutoff_error&) {
      continue;
    }
    if (!std::isfinite(g)) continue;
    const int sign = g > kGapTol ? 1 : g < -kGapTol ? -1 : 0;
    if (prev_sign == 0 && sign > 0) {
      pt.status = PointStatus::BelowBracket;
      pt.beta_c = beta;
      pt.mu_c = solve_mu(beta, rho, interaction, spec);
      return pt;
    }
    if (sign == 0) continue;
    if (prev_sign != 0 && sign != prev_sign) {
      ++pt.n_roots;
      if (root_lo < 0.0) {
        root_lo = prev_beta;
        root_hi = beta;
      }
    }
    prev_beta = beta;
    prev_sign = sign;
  }
  const bool have_prev = prev_sign != 0;
  if (!have_prev) {
    pt.status = PointStatus::Failed;
    pt.error = "gap function not evaluable on the beta scan grid";
    return pt;
  }
  if (root_lo < 0.0) {
    pt.status = PointStatus::Divergent;
    pt.beta_c = std::numeric_limits<double>::infinity();
    return pt;
  }
  pt.beta_c = numeric::bisect(gap_at, root_lo, root_hi, kBetaTol);
  pt.mu_c = solve_mu(pt.beta_c, rho, interaction, spec);
  pt.status = PointStatus::Converged;
  return pt;
}

CriticalCurve curve_sweep(const std::vector<double>& rho_grid,
                          const Interaction& interaction,
                          const DisorderSpec& spec, double beta_max,
                          int jobs) {
  CriticalCurve curve;
  curve.interaction = interaction;
  curve.spec = spec;
  curve.beta_max = beta_max;
  curve.points.resize(rho_grid.size());

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < rho_grid.size(); i += stride) {
      try {
        curve.points[i] = critical_beta(rho_grid[i], interaction, spec, beta_max);
      } catch (const std::exception& e) {
        curve.points[i].rho = rho_grid[i];
        curve.points[i].status = PointStatus::Failed;
        curve.points[i].error = e.what();
      }
    }
  };

  if (jobs <= 1 || rho_grid.size() < 2) {
    work(0, 1);
    return curve;
  }
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), rho_grid.size());
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t)
    pool.emplace_back(work, t, n_threads);
  for (auto& th : pool) th.join();
  return curve;
}

std::optional<double> bernoulli_betac_upper_bound(double rho, double p,
                                                  double eps, double mu_c) {
  if (p <= 0.0 || p > 0.5) return std::nullopt;  // p > 1/2 by p <-> 1-p symmetry
  const double delta = 2.0 * std::abs(rho - (1.0 - p));
  if (delta <= 0.0) return std::nullopt;
  if (rho > 1.0 - p) {
    if (delta < 0.5 * p && eps > std::log(4.0 / p))
      return std::log(2.0 * p / delta) / (p - delta - 2.0 * std::exp(-eps));
    return std::nullopt;
  }
  // rho < 1 - p: branch on the critical chemical potential
  if (mu_c >= 1.0 + 0.5 * eps)
    return (2.0 / eps) * std::log(2.0 * (1.0 - p) / delta);
  if (mu_c > 1.0) {
    const double denom = 1.0 - p - delta - 2.0 * p * std::exp(-eps);
    if (denom > 0.0)
      return std::log(2.0 * (1.0 - p) / delta) / denom;
  }
  return std::nullopt;
}

namespace constants {

double eps_cr_bernoulli(double lambda, double p) {
  return 2.0 / (1.0 - (1.0 - p) / lambda);
}

double lambda_c1(double eps, double p) {
  return 0.5 * (3.0 + std::sqrt(9.0 + 2.0 * eps * (1.0 - 2.0 * p + 0.5 * eps)));
}

double lambda_ck_nonrandom(int k) { return 2.0 * k + 1.0; }

double lambda_c_1mp(double eps, double p) {
  if (eps <= 2.0) throw std::domain_error("lambda_c_1mp: requires eps > 2");
  return 0.25 * eps + eps * (1.0 - p) / (eps - 2.0);
}

std::pair<double, double> eps_cr2_pm(double lambda, double p) {
  const double b = 2.0 * lambda - 1.0 + 2.0 * p;
  const double disc = b * b - 16.0 * lambda;
  if (disc < 0.0)
    throw std::domain_error("eps_cr2_pm: no real roots for these parameters");
  const double s = std::sqrt(disc);
  return {b - s, b + s};
}

double lambda_c_2mp(double eps, double p) {
  if (eps <= 4.0 || p <= 0.5)
    throw std::domain_error("lambda_c_2mp: requires eps > 4 and p > 1/2");
  return 2.0 * (2.0 * p - 1.0) / (eps - 4.0);
}

double trinomial_eps_cr(double lambda) {
  if (lambda < 3.0) throw std::domain_error("trinomial_eps_cr: requires lambda >= 3");
  return 2.0 * lambda * std::sqrt((lambda - 3.0) / (lambda - 1.0));
}

double uniform_lambda_ck(double eps, int k) {
  if (eps == 0.0) return lambda_ck_nonrandom(k);
  const double u = eps / (2.0 * k + 1.0);
  return 0.5 * eps * (std::exp(u) + 1.0) / std::expm1(u);
}

double small_lambda_mu(double eps) {
  if (eps == 0.0) return 0.0;  // continuous limit of the ratio below
  return (std::exp(eps) - 1.0 - eps) / std::expm1(eps);
}

std::optional<std::pair<double, double>> mu_pm(double eps, double p) {
  const double disc = 0.25 * (eps - 1.0) * (eps - 1.0) - p * (1.0 - p);
  if (eps <= 1.0 + 2.0 * std::sqrt(p * (1.0 - p))) return std::nullopt;
  const double s = std::sqrt(disc);
  const double c = 0.5 * (eps + 3.0) - p;
  return std::make_pair(c - s, c + s);
}

double M_p(double mu, double eps, double p) {
  return p / std::abs(mu - eps - 1.0) + (1.0 - p) / std::abs(mu - 1.0);
}

}  // namespace constants

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::json interaction_to_json(const Interaction& in) {
  switch (in.kind) {
    case InteractionKind::Finite:
      return {{"interaction", "finite"}, {"lambda", in.lambda}};
    case InteractionKind::HardCore:
      return {{"interaction", "hardcore"}};
    case InteractionKind::Perfect:
      return {{"interaction", "perfect"}};
  }
  return {};
}

}  // namespace

std::string curve_to_csv(const CriticalCurve& curve) {
  std::string out = "rho,beta_c,mu_c,status,n_roots\n";
  for (const auto& p : curve.points) {
    out += fmt_double(p.rho);
    out += ',';
    out += p.status == PointStatus::Divergent ? "inf" : fmt_double(p.beta_c);
    out += ',';
    out += p.status == PointStatus::Converged ? fmt_double(p.mu_c) : "";
    out += ',';
    out += to_string(p.status);
    out += ',';
    out += std::to_string(p.n_roots);
    out += '\n';
  }
  return out;
}

nlohmann::json curve_to_json(const CriticalCurve& curve) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["model"] = interaction_to_json(curve.interaction);
  j["disorder"] = curve.spec.to_json();
  j["beta_max"] = curve.beta_max;
  auto pts = nlohmann::json::array();
  for (const auto& p : curve.points) {
    nlohmann::json q;
    q["rho"] = p.rho;
    if (p.status == PointStatus::Divergent)
      q["beta_c"] = nullptr;
    else
      q["beta_c"] = p.beta_c;
    if (p.status == PointStatus::Converged) q["mu_c"] = p.mu_c;
    q["status"] = to_string(p.status);
    q["n_roots"] = p.n_roots;
    if (!p.error.empty()) q["error"] = p.error;
    pts.push_back(q);
  }
  j["points"] = pts;
  return j;
}

}  // namespace irh
