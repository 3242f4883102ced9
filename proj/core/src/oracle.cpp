#include "irh/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "irh/errors.hpp"
#include "irh/numeric.hpp"
#include "irh/singlesite.hpp"

namespace irh {

namespace {

constexpr std::size_t kDimGuard = std::size_t{1} << 20;

// little-endian occupancy decode: digit x of `state` in base n_max+1
inline int occ(std::size_t state, int x, int radix) {
  for (int i = 0; i < x; ++i) state /= radix;
  return static_cast<int>(state % radix);
}

}  // namespace

LatticeRealization LatticeRealization::sample(int V, int n_max, double beta,
                                              double mu, double lambda,
                                              const DisorderSpec& spec,
                                              std::uint64_t seed) {
  LatticeRealization cfg;
  cfg.V = V;
  cfg.n_max = n_max;
  cfg.beta = beta;
  cfg.mu = mu;
  cfg.lambda = lambda;
  cfg.seed = seed;
  cfg.eps = spec.sample(seed, static_cast<std::size_t>(V));
  return cfg;
}

std::size_t LatticeRealization::fock_dim() const {
  if (V < 1 || n_max < 1) throw std::domain_error("fock_dim: V >= 1, n_max >= 1");
  std::size_t dim = 1;
  const std::size_t radix = static_cast<std::size_t>(n_max) + 1;
  for (int x = 0; x < V; ++x) {
    dim *= radix;
    if (dim > kDimGuard)
      throw std::domain_error("fock_dim: (n_max+1)^V exceeds the 2^20 guard");
  }
  return dim;
}

double exact_pressure(const LatticeRealization& cfg) {
  if (static_cast<int>(cfg.eps.size()) != cfg.V)
    throw std::invalid_argument("exact_pressure: eps size != V");
  const std::size_t dim = cfg.fock_dim();
  const int radix = cfg.n_max + 1;
  const double hop = 1.0 / cfg.V;

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<std::size_t> stride(cfg.V);
  stride[0] = 1;
  for (int x = 1; x < cfg.V; ++x) stride[x] = stride[x - 1] * radix;

  for (std::size_t s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int x = 0; x < cfg.V; ++x) {
      const int n = occ(s, x, radix);
      diag += cfg.lambda * n * (n - 1.0) +
              (1.0 + cfg.eps[x] - cfg.mu) * n - hop * n;
    }
    H(s, s) = diag;
    // -(1/V) a*_x a_y for x != y; moves beyond n_max are projected out
    for (int y = 0; y < cfg.V; ++y) {
      const int ny = occ(s, y, radix);
      if (ny == 0) continue;
      for (int x = 0; x < cfg.V; ++x) {
        if (x == y) continue;
        const int nx = occ(s, x, radix);
        if (nx == cfg.n_max) continue;
        const std::size_t t = s + stride[x] - stride[y];
        H(t, s) += -hop * std::sqrt((nx + 1.0) * ny);
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw solver_error("exact_pressure: eigensolver failed");
  std::vector<double> exponents(dim);
  for (std::size_t k = 0; k < dim; ++k)
    exponents[k] = -cfg.beta * es.eigenvalues()[k];
  return numeric::log_sum_exp(exponents) / (cfg.beta * cfg.V);
}

ApproxPressure approx_pressure_sup(const LatticeRealization& cfg) {
  if (static_cast<int>(cfg.eps.size()) != cfg.V)
    throw std::invalid_argument("approx_pressure_sup: eps size != V");
  auto objective = [&](double r) {
    double acc = 0.0;
    for (double e : cfg.eps)
      acc += log_trace(cfg.beta, cfg.mu - e, cfg.lambda, r, cfg.n_max);
    return -r * r + acc / (cfg.beta * cfg.V);
  };

  // at fixed n_max the trace term grows linearly in r, so -r^2 wins
  double r_max = 4.0;
  while (objective(r_max) > objective(0.5 * r_max) && r_max < 1024.0)
    r_max *= 2.0;

  constexpr int kScan = 64;
  int best = 0;
  double best_val = objective(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double v = objective(r_max * i / kScan);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = r_max * std::max(0, best - 1) / kScan;
  const double hi = r_max * std::min(kScan, best + 1) / kScan;
  const double r_star = numeric::golden_max(objective, lo, hi, 1e-10);
  double value = objective(r_star);
  const double at_zero = objective(0.0);
  if (at_zero >= value) return {at_zero, 0.0};
  return {value, r_star};
}

double bogoliubov_gap(const LatticeRealization& cfg) {
  const double gap = exact_pressure(cfg) - approx_pressure_sup(cfg).value;
  if (gap < -1e-9)
    throw solver_error("bogoliubov_gap: exact pressure below the variational bound");
  return gap;
}

std::vector<IdsPoint> ids_empirical(int V, const DisorderSpec& spec,
                                    int samples,
                                    const std::vector<double>& E_grid,
                                    std::uint64_t seed) {
  if (V < 1 || V > 4096) throw std::domain_error("ids_empirical: V out of range");
  if (samples < 1) throw std::domain_error("ids_empirical: samples >= 1");

  std::vector<double> sum(E_grid.size(), 0.0), sumsq(E_grid.size(), 0.0);
  for (int s = 0; s < samples; ++s) {
    const auto eps = spec.sample(seed + static_cast<std::uint64_t>(s), V);
    Eigen::MatrixXd h =
        Eigen::MatrixXd::Constant(V, V, -1.0 / V);
    for (int x = 0; x < V; ++x) h(x, x) += 1.0 + eps[x];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw solver_error("ids_empirical: eigensolver failed");
    for (std::size_t i = 0; i < E_grid.size(); ++i) {
      int count = 0;
      for (int k = 0; k < V; ++k)
        if (es.eigenvalues()[k] <= E_grid[i]) ++count;
      const double frac = static_cast<double>(count) / V;
      sum[i] += frac;
      sumsq[i] += frac * frac;
    }
  }

  std::vector<IdsPoint> out(E_grid.size());
  for (std::size_t i = 0; i < E_grid.size(); ++i) {
    const double mean = sum[i] / samples;
    const double var =
        samples > 1 ? std::max(0.0, (sumsq[i] / samples - mean * mean) *
                                        samples / (samples - 1.0))
                    : 0.0;
    out[i] = {E_grid[i], mean, std::sqrt(var / samples)};
  }
  return out;
}

}  // namespace irh
