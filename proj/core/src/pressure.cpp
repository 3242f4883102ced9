#include "irh/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "irh/errors.hpp"
#include "irh/numeric.hpp"

namespace irh {

namespace {

constexpr double kRTol = 1e-8;       // bec threshold in r
constexpr double kRefineTol = 1e-10; // golden-section / bisection tol in r
constexpr int kScanPoints = 64;
constexpr int kFixedPointGrid = 256;

void check_perfect_mu(const ModelParams& params) {
  if (params.interaction.kind == InteractionKind::Perfect && params.mu > 0.0)
    throw std::domain_error("perfect bosons require mu <= 0");
}

double site_pressure(double beta, double mu_eff, const Interaction& in,
                     double r) {
  switch (in.kind) {
    case InteractionKind::HardCore:
      return hc_pressure_term(beta, mu_eff, r);
    case InteractionKind::Perfect:
      return log_trace_auto(beta, mu_eff, 0.0, r) / beta;
    case InteractionKind::Finite:
      return log_trace_auto(beta, mu_eff, in.lambda, r) / beta;
  }
  throw std::logic_error("unreachable");
}

double site_source_expectation(double beta, double mu_eff,
                               const Interaction& in, double r) {
  if (r == 0.0) return 0.0;
  if (in.kind == InteractionKind::HardCore) {
    const double x = mu_eff - 1.0;
    const double d = std::sqrt(x * x + 4.0 * r * r);
    return 2.0 * r * std::tanh(0.5 * beta * d) / d;
  }
  const double lambda = in.kind == InteractionKind::Finite ? in.lambda : 0.0;
  const int n_max = choose_cutoff(beta, mu_eff, lambda, r) + 8;
  return source_expectation(beta, mu_eff, lambda, r, n_max);
}

// expand R_max by doubling until the objective drops below its r = 0 value
double expand_r_max(const ModelParams& params, const DisorderSpec& spec) {
  const double g0 = pressure_objective(0.0, params, spec);
  double r_max = 4.0;
  while (pressure_objective(r_max, params, spec) >= g0) {
    r_max *= 2.0;
    if (r_max > 1024.0)
      throw solver_error(
          "variational_pressure: objective does not decay (superstability "
          "violated numerically)");
  }
  return r_max;
}

}  // namespace

double pressure_objective(double r, const ModelParams& params,
                          const DisorderSpec& spec) {
  check_perfect_mu(params);
  return -r * r + spec.expect([&](double eps) {
    return site_pressure(params.beta, params.mu - eps, params.interaction, r);
  });
}

double selfconsistency_f(double r, const ModelParams& params,
                         const DisorderSpec& spec) {
  check_perfect_mu(params);
  if (r == 0.0) return 0.0;
  return 0.5 * spec.expect([&](double eps) {
    return site_source_expectation(params.beta, params.mu - eps,
                                   params.interaction, r);
  });
}

double solve_selfconsistency(const ModelParams& params,
                             const DisorderSpec& spec) {
  const double r_max = expand_r_max(params, spec);
  auto g = [&](double r) { return selfconsistency_f(r, params, spec) - r; };
  // largest sign-change bracket of f(r) - r away from the trivial root
  double lo = -1.0, hi = -1.0;
  double prev_r = r_max;
  double prev_g = g(r_max);
  for (int i = kFixedPointGrid - 1; i >= 1; --i) {
    const double r = r_max * i / kFixedPointGrid;
    const double cur = g(r);
    if ((cur < 0.0) != (prev_g < 0.0) || cur == 0.0) {
      lo = r;
      hi = prev_r;
      break;
    }
    prev_r = r;
    prev_g = cur;
  }
  if (lo < 0.0) return 0.0;
  return numeric::bisect(g, lo, hi, kRefineTol);
}

OrderParameterResult variational_pressure(const ModelParams& params,
                                          const DisorderSpec& spec) {
  const double r_max = expand_r_max(params, spec);
  auto g = [&](double r) { return pressure_objective(r, params, spec); };

  int best = 0;
  double best_val = g(0.0);
  std::vector<double> grid(kScanPoints + 1);
  for (int i = 0; i <= kScanPoints; ++i) {
    grid[i] = r_max * i / kScanPoints;
    if (i == 0) continue;
    const double v = g(grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = grid[std::max(0, best - 1)];
  const double hi = grid[std::min(kScanPoints, best + 1)];
  double r_star = numeric::golden_max(g, lo, hi, kRefineTol);

  OrderParameterResult out;
  out.r_fixed_point = solve_selfconsistency(params, spec);
  // In the normal phase the objective is flat near 0 at the round-off
  // noise floor and golden section can drift up to ~1e-8; the fixed point
  // resolves signs at scale r and is the reliable arbiter there.
  const double g0 = pressure_objective(0.0, params, spec);
  const double gain = g(r_star) - g0;
  if (r_star < kRTol ||
      (gain <= 1e-13 * std::max(1.0, std::abs(g0)) && out.r_fixed_point < kRTol))
    r_star = 0.0;
  out.r_star = r_star;
  out.pressure = g(r_star);
  out.bec = r_star > kRTol;
  out.f_residual = std::abs(selfconsistency_f(r_star, params, spec) - r_star);
  out.nonconcave_suspect = std::abs(out.r_fixed_point - r_star) > 1e-4;
  return out;
}

double perfect_pressure(const DisorderSpec& spec, double beta, double mu) {
  if (mu > 0.0) throw std::domain_error("perfect_pressure: mu > 0");
  return spec.expect([&](double eps) {
    return -std::log1p(-std::exp(beta * (mu - eps - 1.0))) / beta;
  });
}

double perfect_density(const DisorderSpec& spec, double beta, double mu) {
  if (mu > 0.0) throw std::domain_error("perfect_density: mu > 0");
  return spec.expect([&](double eps) {
    return 1.0 / std::expm1(beta * (1.0 + eps - mu));
  });
}

double perfect_critical_density(const DisorderSpec& spec, double beta) {
  return perfect_density(spec, beta, 0.0);
}

}  // namespace irh
