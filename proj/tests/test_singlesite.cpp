#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "irh/errors.hpp"
#include "irh/singlesite.hpp"

using namespace irh;

namespace {

// independent oracle: assemble the dense symmetric matrix from scratch and
// take the exponential trace in logs
double dense_log_trace(double beta, double mu_eff, double lambda, double r,
                       int n_max) {
  const int dim = n_max + 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n <= n_max; ++n) {
    M(n, n) = (mu_eff - 1.0) * n - lambda * n * (n - 1.0);
    if (n < n_max) M(n, n + 1) = M(n + 1, n) = r * std::sqrt(n + 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  const double emax = es.eigenvalues().maxCoeff();
  double sum = 0.0;
  for (int k = 0; k < dim; ++k)
    sum += std::exp(beta * (es.eigenvalues()[k] - emax));
  return beta * emax + std::log(sum);
}

}  // namespace

TEST_CASE("h_n arithmetic") {
  CHECK(h_n(0, 0.7, 3.0) == 0.0);
  CHECK(h_n(1, 0.7, 3.0) == doctest::Approx(0.3));
  CHECK(h_n(2, 0.5, 3.0) == doctest::Approx(7.0));
}

TEST_CASE("log_trace vs dense oracle") {
  CHECK(log_trace(1.0, 0.0, 2.0, 0.7, 40) ==
        doctest::Approx(dense_log_trace(1.0, 0.0, 2.0, 0.7, 40)).epsilon(1e-10));
  // diagonal case against a brute-force Boltzmann sum
  double z = 0.0;
  for (int n = 0; n <= 30; ++n) z += std::exp(-(double)n - n * (n - 1.0));
  CHECK(log_trace(1.0, 0.0, 1.0, 0.0, 30) == doctest::Approx(std::log(z)));
  // free-boson geometric series
  CHECK(log_trace(2.0, 0.5, 0.0, 0.0, 200) ==
        doctest::Approx(-std::log(1.0 - std::exp(-1.0))).epsilon(1e-12));
}

TEST_CASE("log_trace is even and convex in r") {
  for (double r : {0.1, 0.5, 1.3})
    CHECK(log_trace(2.0, 0.3, 1.0, r, 32) == log_trace(2.0, 0.3, 1.0, -r, 32));

  double prev = log_trace(2.0, 0.3, 1.0, 0.0, 32);
  double prev_diff = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double cur = log_trace(2.0, 0.3, 1.0, 0.15 * i, 32);
    const double diff = cur - prev;
    CHECK(diff > 0.0);                      // increasing for r > 0
    if (i > 1) CHECK(diff > prev_diff);     // second differences positive
    prev = cur;
    prev_diff = diff;
  }
}

TEST_CASE("choose_cutoff guards the gapless case") {
  CHECK(choose_cutoff(1.0, 0.0, 1.0, 0.0) >= 8);
  CHECK(choose_cutoff(1.0, 0.0, 1.0, 0.0) < 64);
  CHECK_THROWS_AS(choose_cutoff(1.0, 1.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(choose_cutoff(1.0, 2.5, 0.0, 0.0), std::domain_error);
  // lambda = 0 below the gap edge: large but still under the cap
  CHECK_NOTHROW(choose_cutoff(1.0, 0.9, 0.0, 0.0));
  // shrinking the gap further pushes past the cap
  CHECK_THROWS_AS(choose_cutoff(1.0, 0.999, 0.0, 0.0), cutoff_error);
  // beta=200 with the Boltzmann minimum at n=2 keeps n=2 inside
  CHECK(choose_cutoff(200.0, 3.4, 1.0, 0.0) > 2);
}

TEST_CASE("ptilde_dd matches a finite-difference oracle") {
  auto fd = [](double beta, double mu, double lambda) {
    const double h = 1e-4;
    const double p0 = ptilde(beta, mu, lambda, 0.0);
    const double p1 = ptilde(beta, mu, lambda, h);
    const double pm = ptilde(beta, mu, lambda, -h);
    return (p1 - 2.0 * p0 + pm) / (h * h);
  };
  CHECK(ptilde_dd(2.0, 0.0, 1.0) == doctest::Approx(fd(2.0, 0.0, 1.0)).epsilon(1e-6));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ub(0.5, 5.0), um(-2.0, 3.0), ul(0.1, 10.0);
  for (int i = 0; i < 20; ++i) {
    const double beta = ub(rng), mu = um(rng), lambda = ul(rng);
    CHECK(ptilde_dd(beta, mu, lambda) ==
          doctest::Approx(fd(beta, mu, lambda)).epsilon(1e-6));
  }
}

TEST_CASE("ptilde_dd degenerate level crossing is the continuous limit") {
  // mu = 1 makes h_0 = h_1; the n=1 term must become 2 beta e^{-beta h_1}/Z0
  const double val = ptilde_dd(1.5, 1.0, 2.0);
  const double nearby = ptilde_dd(1.5, 1.0 + 1e-9, 2.0);
  CHECK(val == doctest::Approx(nearby).epsilon(1e-6));
}

TEST_CASE("site_density closed forms and plateaus") {
  CHECK(site_density(2.0, 0.5, 0.0) ==
        doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-12));
  CHECK(site_density(5.0, -40.0, 1.0) < 1e-10);
  // beta -> infinity Mott plateau: 1+2*lambda < mu < 1+4*lambda pins n = 2
  CHECK(site_density(200.0, 3.5, 1.0) == doctest::Approx(2.0).epsilon(1e-6));
  // strict monotonicity in mu
  double prev = site_density(2.0, -1.0, 1.0);
  for (double mu = -0.5; mu < 3.0; mu += 0.5) {
    const double cur = site_density(2.0, mu, 1.0);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("hard-core closed forms") {
  CHECK(hc_pressure_term(3.0, 1.0, 0.0) == doctest::Approx(std::log(2.0) / 3.0));
  CHECK(hc_pressure_term(1.0, 3.0, 0.0) ==
        doctest::Approx(1.0 + std::log(2.0 * std::cosh(1.0))));
  // n_max = 1 trace is the same 2x2 problem, exactly
  for (double r : {0.0, 0.4, 1.1})
    CHECK(hc_pressure_term(2.0, 0.7, r) ==
          doctest::Approx(log_trace(2.0, 0.7, 0.0, r, 1) / 2.0).epsilon(1e-13));

  CHECK(hc_gap_term(4.0, 0.0) == 2.0);
  CHECK(hc_gap_term(4.0, 1.0) == doctest::Approx(std::tanh(2.0)));
  // continuity across the Taylor switchover
  CHECK(hc_gap_term(4.0, 1e-8) == doctest::Approx(hc_gap_term(4.0, 2e-8)).epsilon(1e-10));
  // tanh u <= u: at beta = 2 the term never exceeds 1
  for (double x = -3.0; x <= 3.0; x += 0.1)
    CHECK(hc_gap_term(2.0, x) <= 1.0 + 1e-15);

  CHECK(hc_density_term(7.0, 0.0) == 0.5);
  CHECK(hc_density_term(2.0, 1.0) == doctest::Approx(0.5 + 0.5 * std::tanh(1.0)));
  CHECK(hc_density_term(200.0, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("large lambda collapses onto the hard-core forms") {
  const double lambda = 1e4;
  CHECK(ptilde(2.0, 0.5, lambda, 0.3) ==
        doctest::Approx(hc_pressure_term(2.0, 0.5, 0.3)).epsilon(1e-3));
  CHECK(ptilde_dd(2.0, 0.5, lambda) ==
        doctest::Approx(2.0 * hc_gap_term(2.0, 0.5 - 1.0)).epsilon(1e-3));
  CHECK(site_density(2.0, 0.5, lambda) ==
        doctest::Approx(hc_density_term(2.0, 0.5 - 1.0)).epsilon(1e-3));
}

TEST_CASE("log_trace_auto certifies its cutoff") {
  const double a = log_trace_auto(1.0, 0.0, 2.0, 0.7);
  const double b = log_trace(1.0, 0.0, 2.0, 0.7, 64);
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("source expectation is odd-free at r=0 and positive beyond") {
  CHECK(source_expectation(2.0, 0.3, 1.0, 0.0, 24) == doctest::Approx(0.0));
  double prev = 0.0;
  for (double r : {0.2, 0.5, 1.0}) {
    const double cur = source_expectation(2.0, 0.3, 1.0, r, 24);
    CHECK(cur > prev);  // increasing in r
    prev = cur;
  }
}
