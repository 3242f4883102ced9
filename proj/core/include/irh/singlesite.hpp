#pragma once

#include <vector>

namespace irh {

enum class InteractionKind { Finite, HardCore, Perfect };

struct Interaction {
  InteractionKind kind = InteractionKind::Finite;
  double lambda = 0.0;  // Finite only

  static Interaction finite(double lambda);
  static Interaction hard_core() { return {InteractionKind::HardCore, 0.0}; }
  static Interaction perfect() { return {InteractionKind::Perfect, 0.0}; }
};

struct ModelParams {
  double beta;  // > 0
  double mu;
  Interaction interaction;
};

/// Truncated number-basis matrix of beta * [(mu_eff - 1) n - lambda n(n-1)
/// + r (a* + a)] / beta, i.e. the single-site operator before the beta
/// factor. Symmetric tridiagonal; r = 0 makes it diagonal.
struct SingleSiteOperator {
  int n_max;
  std::vector<double> diag;     // (mu_eff - 1) n - lambda n(n-1), n = 0..n_max
  std::vector<double> offdiag;  // r sqrt(n+1), n = 0..n_max-1
  double r;

  static SingleSiteOperator build(double mu_eff, double lambda, double r, int n_max);
};

// (1 - mu) n + lambda n (n - 1)
double h_n(int n, double mu, double lambda);

// Smallest safe occupancy cutoff (>= 8, capped at 512) for the given
// parameters; throws cutoff_error beyond the cap and std::domain_error for
// the gapless case lambda = 0, mu_eff >= 1.
int choose_cutoff(double beta, double mu_eff, double lambda, double r);

// ln Tr exp(beta [(mu_eff-1) n - lambda n(n-1) + r(a*+a)]) on the truncated
// Fock space, log-sum-exp over the tridiagonal spectrum.
double log_trace(double beta, double mu_eff, double lambda, double r, int n_max);

// log_trace with an automatic cutoff; throws cutoff_error if enlarging the
// cutoff by 8 still moves the result by more than rel. 1e-10.
double log_trace_auto(double beta, double mu_eff, double lambda, double r);

// beta^-1 log_trace_auto; the single-site pressure with source r
double ptilde(double beta, double mu, double lambda, double r);

// closed-form second r-derivative of ptilde at r = 0
double ptilde_dd(double beta, double mu, double lambda);

// per-site density sum_n n e^{-beta h_n} / Z_0
double site_density(double beta, double mu, double lambda);

// Gibbs expectation of a + a* in the truncated single-site ensemble
double source_expectation(double beta, double mu_eff, double lambda, double r,
                          int n_max);

// hard-core single-site pressure:
// (mu_eff-1)/2 + beta^-1 ln[2 cosh((beta/2) sqrt((mu_eff-1)^2 + 4 r^2))]
double hc_pressure_term(double beta, double mu_eff, double r);

// tanh(beta x / 2) / x, continuous at x = 0 (value beta/2)
double hc_gap_term(double beta, double x);

// 1/2 + (1/2) tanh(beta x / 2)
double hc_density_term(double beta, double x);

}  // namespace irh
