#pragma once

#include <cstdint>
#include <vector>

#include "irh/disorder.hpp"

namespace irh {

/// One finite-volume disorder realization for brute-force diagonalization.
struct LatticeRealization {
  int V = 2;            // site count, >= 2 (V = 1 allowed for cross-checks)
  int n_max = 1;        // per-site occupancy cutoff, >= 1
  std::vector<double> eps;  // V sampled site energies, all >= 0
  double beta = 1.0;
  double mu = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;

  // eps drawn i.i.d. from spec with the given seed
  static LatticeRealization sample(int V, int n_max, double beta, double mu,
                                   double lambda, const DisorderSpec& spec,
                                   std::uint64_t seed);
  // total Fock dimension (n_max+1)^V; throws std::domain_error past 2^20
  std::size_t fock_dim() const;
};

// (1/(beta V)) ln Tr e^{-beta (H - mu N)} by dense diagonalization on the
// truncated occupancy basis (mixed-radix little-endian encoding)
double exact_pressure(const LatticeRealization& cfg);

struct ApproxPressure {
  double value;   // sup over the source amplitude
  double r_star;  // maximizer
};

// sup_{r >= 0} [ -r^2 + (1/(beta V)) sum_x ln Tr_x e^{beta [...]} ] with the
// same fixed n_max as the exact trace
ApproxPressure approx_pressure_sup(const LatticeRealization& cfg);

// exact_pressure - approx_pressure_sup; nonnegative up to a -1e-9 floor,
// violations throw solver_error
double bogoliubov_gap(const LatticeRealization& cfg);

struct IdsPoint {
  double E;
  double n_bar;    // mean of (1/V) #{eigenvalues <= E} over samples
  double stderr_;  // standard error of that mean
};

// Empirical integrated density of states of the one-particle operator
// I - J/V + diag(eps), J the all-ones matrix, averaged over realizations.
std::vector<IdsPoint> ids_empirical(int V, const DisorderSpec& spec,
                                    int samples,
                                    const std::vector<double>& E_grid,
                                    std::uint64_t seed = 0);

}  // namespace irh
