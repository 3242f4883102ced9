#pragma once

#include "irh/disorder.hpp"
#include "irh/singlesite.hpp"

namespace irh {

struct OrderParameterResult {
  double r_star = 0.0;        // maximizing source amplitude, >= 0
  double pressure = 0.0;      // value of the variational objective at r_star
  bool bec = false;           // r_star above the solver resolution 1e-8
  double f_residual = 0.0;    // |r_star - f(r_star)|
  // variational maximizer and self-consistency fixed point disagree beyond
  // 1e-4; both values are reported, nothing is silently dropped
  bool nonconcave_suspect = false;
  double r_fixed_point = 0.0;
};

// -r^2 + beta^-1 E[ln Tr e^{beta[...]}] at source amplitude r
double pressure_objective(double r, const ModelParams& params,
                          const DisorderSpec& spec);

// Global maximization of the variational pressure over r >= 0: coarse scan
// plus golden-section refinement, cross-checked against the self-consistency
// fixed point.
OrderParameterResult variational_pressure(const ModelParams& params,
                                          const DisorderSpec& spec);

// f(r) = (1/2) E[<a + a*>_r], the self-consistency map; f(0) = 0.
double selfconsistency_f(double r, const ModelParams& params,
                         const DisorderSpec& spec);

// largest fixed point of r = f(r) on [0, R_max]
double solve_selfconsistency(const ModelParams& params,
                             const DisorderSpec& spec);

// perfect bosons (lambda = 0), mu <= 0 with continuation at mu = 0
double perfect_pressure(const DisorderSpec& spec, double beta, double mu);
double perfect_density(const DisorderSpec& spec, double beta, double mu);
double perfect_critical_density(const DisorderSpec& spec, double beta);

}  // namespace irh
