#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irh/disorder.hpp"
#include "irh/singlesite.hpp"

namespace irh {

enum class PointStatus { Converged, Divergent, BelowBracket, Failed };

std::string to_string(PointStatus s);

struct CriticalPoint {
  double rho = 0.0;
  double beta_c = 0.0;  // +inf when Divergent
  double mu_c = 0.0;    // meaningless unless Converged
  PointStatus status = PointStatus::Failed;
  int n_roots = 0;      // sign changes of the gap residual found in beta
  std::string error;    // Failed only
};

struct CriticalCurve {
  Interaction interaction;
  DisorderSpec spec = DisorderSpec::point_mass();
  double beta_max = 500.0;
  std::vector<CriticalPoint> points;  // rho strictly increasing
};

// E[p~''(beta, mu - eps, lambda; 0)] - 2 (finite lambda), or the hard-core
// tanh form on the same normalization; root in beta <=> criticality.
double gap_function(double beta, double mu, const Interaction& interaction,
                    const DisorderSpec& spec);

// disorder-averaged density at (beta, mu)
double density_at(double beta, double mu, const Interaction& interaction,
                  const DisorderSpec& spec);

// unique mu with density_at = rho; closed form for uniform hard-core,
// expanding-bracket bisection otherwise
double solve_mu(double beta, double rho, const Interaction& interaction,
                const DisorderSpec& spec);

// root of beta -> gap_function(beta, solve_mu(beta, rho)) on
// [1e-3, beta_max]; smallest root wins, multiplicity reported
CriticalPoint critical_beta(double rho, const Interaction& interaction,
                            const DisorderSpec& spec, double beta_max = 500.0);

// perfect-boson criticality rho = E[1/(e^{beta(1+eps)} - 1)]
double perfect_critical_beta(double rho, const DisorderSpec& spec);

// one critical_beta per grid point; per-point failures recorded in-point,
// never aborts; deterministic for any worker count
CriticalCurve curve_sweep(const std::vector<double>& rho_grid,
                          const Interaction& interaction,
                          const DisorderSpec& spec, double beta_max = 500.0,
                          int jobs = 1);

// analytic beta_c upper bound for the hard-core Bernoulli model near
// rho = 1 - p; nullopt when the validity side conditions fail
std::optional<double> bernoulli_betac_upper_bound(double rho, double p,
                                                  double eps, double mu_c);

// closed-form critical constants of the phase diagram
namespace constants {

// hard-core Bernoulli suppression threshold at rho = 1 - p
inline constexpr double bernoulli_hc_eps_cr = 2.0;
// first-order finite-lambda correction to the threshold above
double eps_cr_bernoulli(double lambda, double p);
// repulsion suppressing BEC at rho = 1 (Bernoulli disorder)
double lambda_c1(double eps, double p);
// nonrandom thresholds at integer densities
double lambda_ck_nonrandom(int k);
// repulsion suppressing BEC at rho = 1 - p for fixed eps > 2
double lambda_c_1mp(double eps, double p);
// the two roots of the rho = 2 - p threshold equation, (minus, plus)
std::pair<double, double> eps_cr2_pm(double lambda, double p);
// repulsion threshold at rho = 2 - p; requires eps > 4, p > 1/2
double lambda_c_2mp(double eps, double p);
// equiprobable trinomial, hard core
inline constexpr double trinomial_hc_eps_cr = 28.0 / 9.0;
// equiprobable trinomial at rho = 1, finite lambda >= 3
double trinomial_eps_cr(double lambda);
// uniform continuous disorder, thresholds at integer densities
double uniform_lambda_ck(double eps, int k);
// small-lambda limit of the critical chemical potential, uniform disorder
double small_lambda_mu(double eps);
// complementary roots (mu_minus, mu_plus) of M_p = 1; nullopt unless
// eps > 1 + 2 sqrt(p(1-p))
std::optional<std::pair<double, double>> mu_pm(double eps, double p);
// M_p(mu, eps) = p/|mu-eps-1| + (1-p)/|mu-1|
double M_p(double mu, double eps, double p);

}  // namespace constants

// "rho,beta_c,mu_c,status,n_roots" rows; divergent beta_c encoded as inf
std::string curve_to_csv(const CriticalCurve& curve);
nlohmann::json curve_to_json(const CriticalCurve& curve);

}  // namespace irh
