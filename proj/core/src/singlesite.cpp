#include "irh/singlesite.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "irh/errors.hpp"
#include "irh/numeric.hpp"

namespace irh {

namespace {

constexpr int kCutoffCap = 512;
constexpr double kDiagTailLog = 36.85;        // -ln(1e-16)
constexpr double kDegenerateThreshold = 1e-10;

void require_gapped(double mu_eff, double lambda) {
  if (lambda == 0.0 && mu_eff >= 1.0)
    throw std::domain_error(
        "gapless/ill-posed: lambda = 0 requires mu_eff < 1");
}

}  // namespace

Interaction Interaction::finite(double lambda) {
  if (lambda < 0.0) throw std::domain_error("Interaction: lambda < 0");
  return {InteractionKind::Finite, lambda};
}

double h_n(int n, double mu, double lambda) {
  return (1.0 - mu) * n + lambda * n * (n - 1.0);
}

SingleSiteOperator SingleSiteOperator::build(double mu_eff, double lambda,
                                             double r, int n_max) {
  if (n_max < 1) throw std::domain_error("SingleSiteOperator: n_max < 1");
  SingleSiteOperator op;
  op.n_max = n_max;
  op.r = std::abs(r);  // gauge symmetry r -> -r
  op.diag.resize(static_cast<std::size_t>(n_max) + 1);
  op.offdiag.resize(static_cast<std::size_t>(n_max));
  for (int n = 0; n <= n_max; ++n) op.diag[n] = -h_n(n, mu_eff, lambda);
  for (int n = 0; n < n_max; ++n) op.offdiag[n] = op.r * std::sqrt(n + 1.0);
  return op;
}

int choose_cutoff(double beta, double mu_eff, double lambda, double r) {
  if (beta <= 0.0) throw std::domain_error("choose_cutoff: beta <= 0");
  require_gapped(mu_eff, lambda);
  double hmin = 0.0;
  for (int n = 1; n <= kCutoffCap; ++n) {
    hmin = std::min(hmin, h_n(n, mu_eff, lambda));
    if (n < 8) continue;
    const double tail = beta * (h_n(n, mu_eff, lambda) - hmin);
    if (tail <= kDiagTailLog) continue;
    if (r != 0.0 &&
        std::abs(r) * std::sqrt(static_cast<double>(n)) * beta *
                std::exp(-tail) >= 1e-14)
      continue;
    return n;
  }
  throw cutoff_error("choose_cutoff: cap 512 exceeded");
}

double log_trace(double beta, double mu_eff, double lambda, double r,
                 int n_max) {
  const auto op = SingleSiteOperator::build(mu_eff, lambda, r, n_max);
  std::vector<double> scaled(op.diag.size());
  if (op.r == 0.0) {
    for (std::size_t i = 0; i < op.diag.size(); ++i)
      scaled[i] = beta * op.diag[i];
    return numeric::log_sum_exp(scaled);
  }
  Eigen::Map<const Eigen::VectorXd> diag(op.diag.data(),
                                         static_cast<long>(op.diag.size()));
  Eigen::Map<const Eigen::VectorXd> sub(op.offdiag.data(),
                                        static_cast<long>(op.offdiag.size()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    scaled[static_cast<std::size_t>(i)] = beta * es.eigenvalues()[i];
  return numeric::log_sum_exp(scaled);
}

double log_trace_auto(double beta, double mu_eff, double lambda, double r) {
  // The diagonal-based cutoff estimate is only perturbative in r; escalate
  // geometrically until two successive truncations agree.
  int n = choose_cutoff(beta, mu_eff, lambda, r);
  double v0 = log_trace(beta, mu_eff, lambda, r, n);
  for (;;) {
    const int n1 = std::min(n + std::max(8, n / 2), kCutoffCap);
    const double v1 = log_trace(beta, mu_eff, lambda, r, n1);
    if (std::abs(v1 - v0) <= 1e-10 * std::max(1.0, std::abs(v1))) return v1;
    if (n1 >= kCutoffCap)
      throw cutoff_error("log_trace: cutoff-insufficient");
    n = n1;
    v0 = v1;
  }
}

double ptilde(double beta, double mu, double lambda, double r) {
  return log_trace_auto(beta, mu, lambda, r) / beta;
}

double ptilde_dd(double beta, double mu, double lambda) {
  require_gapped(mu, lambda);
  const int n_max = choose_cutoff(beta, mu, lambda, 0.0) + 8;
  double hmin = 0.0;
  for (int n = 1; n <= n_max; ++n) hmin = std::min(hmin, h_n(n, mu, lambda));
  double z = 0.0, s = 0.0;
  double prev = std::exp(-beta * (h_n(0, mu, lambda) - hmin));
  z += prev;
  for (int n = 1; n <= n_max; ++n) {
    const double cur = std::exp(-beta * (h_n(n, mu, lambda) - hmin));
    z += cur;
    const double dh = (mu - 1.0) - 2.0 * lambda * (n - 1.0);  // h_{n-1} - h_n
    if (std::abs(dh) < kDegenerateThreshold)
      s += 2.0 * n * beta * cur;  // continuous extension of the quotient
    else
      s += 2.0 * n * (cur - prev) / dh;
    prev = cur;
  }
  return s / z;
}

double site_density(double beta, double mu, double lambda) {
  require_gapped(mu, lambda);
  const int n_max = choose_cutoff(beta, mu, lambda, 0.0) + 8;
  double hmin = 0.0;
  for (int n = 1; n <= n_max; ++n) hmin = std::min(hmin, h_n(n, mu, lambda));
  double z = 0.0, s = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double w = std::exp(-beta * (h_n(n, mu, lambda) - hmin));
    z += w;
    s += n * w;
  }
  return s / z;
}

double source_expectation(double beta, double mu_eff, double lambda, double r,
                          int n_max) {
  if (r == 0.0) return 0.0;  // gauge invariance at zero source
  const auto op = SingleSiteOperator::build(mu_eff, lambda, r, n_max);
  Eigen::Map<const Eigen::VectorXd> diag(op.diag.data(),
                                         static_cast<long>(op.diag.size()));
  Eigen::Map<const Eigen::VectorXd> sub(op.offdiag.data(),
                                        static_cast<long>(op.offdiag.size()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const auto& evals = es.eigenvalues();
  const auto& evecs = es.eigenvectors();
  const double emax = evals.maxCoeff();
  double zsum = 0.0, xsum = 0.0;
  for (long k = 0; k < evals.size(); ++k) {
    const double w = std::exp(beta * (evals[k] - emax));
    zsum += w;
    double amp = 0.0;  // <v_k| (a + a*) |v_k>
    for (int n = 0; n < op.n_max; ++n)
      amp += 2.0 * std::sqrt(n + 1.0) * evecs(n, k) * evecs(n + 1, k);
    xsum += w * amp;
  }
  return xsum / zsum;
}

double hc_pressure_term(double beta, double mu_eff, double r) {
  const double x = mu_eff - 1.0;
  const double d = std::sqrt(x * x + 4.0 * r * r);
  // ln(2 cosh u) = |u| + ln(1 + e^{-2|u|}), overflow-safe
  const double u = 0.5 * beta * d;
  return 0.5 * x + (u + std::log1p(std::exp(-2.0 * u))) / beta;
}

double hc_gap_term(double beta, double x) {
  if (std::abs(x) <= 1e-8)
    return 0.5 * beta - beta * beta * beta * x * x / 24.0;
  return std::tanh(0.5 * beta * x) / x;
}

double hc_density_term(double beta, double x) {
  return 0.5 + 0.5 * std::tanh(0.5 * beta * x);
}

}  // namespace irh
