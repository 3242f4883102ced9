#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "irh/phase.hpp"

using namespace irh;

TEST_CASE("closed-form constants") {
  namespace kc = constants;
  CHECK(kc::bernoulli_hc_eps_cr == 2.0);
  CHECK(kc::lambda_c1(2.0, 0.5) ==
        doctest::Approx((3.0 + std::sqrt(13.0)) / 2.0).epsilon(1e-12));
  CHECK(kc::lambda_c1(0.0, 0.3) == doctest::Approx(3.0));
  CHECK(kc::lambda_ck_nonrandom(1) == 3.0);
  CHECK(kc::lambda_ck_nonrandom(2) == 5.0);
  CHECK(kc::trinomial_hc_eps_cr == doctest::Approx(28.0 / 9.0));
  CHECK(kc::trinomial_eps_cr(8.0) == doctest::Approx(13.52).epsilon(5e-3));
  CHECK(kc::trinomial_eps_cr(6.0) ==
        doctest::Approx(12.0 * std::sqrt(3.0 / 5.0)));
  CHECK_THROWS(kc::trinomial_eps_cr(2.0));

  CHECK(kc::eps_cr_bernoulli(10.0, 0.5) ==
        doctest::Approx(2.0 / (1.0 - 0.05)));
  CHECK(kc::lambda_c_1mp(6.0, 0.5) == doctest::Approx(6.0 / 4.0 + 3.0 / 4.0));
  CHECK_THROWS(kc::lambda_c_1mp(1.5, 0.5));

  // the eps_cr2 pair are the roots of eps^2/2 - (2l-1+2p) eps + 8l = 0
  const auto [lo, hi] = kc::eps_cr2_pm(10.0, 0.7);
  for (double e : {lo, hi})
    CHECK(0.5 * e * e - (2.0 * 10.0 - 1.0 + 2.0 * 0.7) * e + 8.0 * 10.0 ==
          doctest::Approx(0.0).epsilon(1e-9));
  CHECK(kc::lambda_c_2mp(6.0, 0.8) == doctest::Approx(2.0 * 0.6 / 2.0));
  CHECK_THROWS(kc::lambda_c_2mp(3.0, 0.8));

  const double e = std::exp(1.0);
  CHECK(kc::uniform_lambda_ck(3.0, 1) ==
        doctest::Approx(1.5 * (e + 1.0) / (e - 1.0)).epsilon(1e-12));
  CHECK(kc::uniform_lambda_ck(1e-9, 2) == doctest::Approx(5.0));
  CHECK(kc::uniform_lambda_ck(0.0, 3) == 7.0);

  CHECK(kc::small_lambda_mu(2.0) ==
        doctest::Approx((std::exp(2.0) - 3.0) / (std::exp(2.0) - 1.0)));
  CHECK(kc::small_lambda_mu(0.0) == 0.0);
}

TEST_CASE("mu window roots satisfy M_p = 1") {
  namespace kc = constants;
  const double eps = 6.0, p = 0.3;
  const auto win = kc::mu_pm(eps, p);
  REQUIRE(win.has_value());
  CHECK(kc::M_p(win->first, eps, p) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kc::M_p(win->second, eps, p) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(win->first > 1.0);
  CHECK(win->second < 1.0 + eps);
  // below the threshold width the window closes
  CHECK_FALSE(kc::mu_pm(1.0, 0.3).has_value());
}

TEST_CASE("gap function hard-core reductions") {
  auto pm = DisorderSpec::point_mass();
  // point mass at mu=1: gap = beta - 2, root at beta = 2
  CHECK(gap_function(1.5, 1.0, Interaction::hard_core(), pm) ==
        doctest::Approx(1.5 - 2.0));
  CHECK(gap_function(2.0, 1.0, Interaction::hard_core(), pm) ==
        doctest::Approx(0.0));
  // beta below 2: negative for every mu (tanh u <= u)
  for (double mu = -2.0; mu <= 4.0; mu += 0.5)
    CHECK(gap_function(1.9, mu, Interaction::hard_core(), pm) < 0.0);
}

TEST_CASE("solve_mu: symmetric points and the closed form") {
  auto b = DisorderSpec::bernoulli(0.5, 2.0);
  for (double beta : {1.0, 5.0, 50.0})
    CHECK(solve_mu(beta, 0.5, Interaction::hard_core(), b) ==
          doctest::Approx(2.0).epsilon(1e-9));

  auto u = DisorderSpec::uniform(2.0);
  CHECK(solve_mu(3.0, 0.5, Interaction::hard_core(), u) == doctest::Approx(2.0));
  // closed form vs the generic bisection through the density
  for (double rho : {0.2, 0.35, 0.7}) {
    const double mu = solve_mu(3.0, rho, Interaction::hard_core(), u);
    CHECK(density_at(3.0, mu, Interaction::hard_core(), u) ==
          doctest::Approx(rho).epsilon(1e-9));
  }

  // large-beta asymptote at the plateau density rho = 1-p
  auto b37 = DisorderSpec::bernoulli(0.3, 2.0);
  const double mu100 = solve_mu(100.0, 0.7, Interaction::hard_core(), b37);
  const double asym = 1.0 + 1.0 - std::log(0.3 / 0.7) / 200.0;
  CHECK(mu100 == doctest::Approx(asym).epsilon(5e-3));

  CHECK_THROWS_AS(solve_mu(1.0, 1.2, Interaction::hard_core(), b),
                  std::domain_error);
  CHECK_THROWS_AS(solve_mu(1.0, -0.1, Interaction::finite(1.0), b),
                  std::domain_error);
}

TEST_CASE("perfect critical beta") {
  auto pm = DisorderSpec::point_mass();
  CHECK(perfect_critical_beta(1.0, pm) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-10));
  for (double rho : {0.1, 0.5, 1.5, 2.0})
    CHECK(perfect_critical_beta(rho, pm) ==
          doctest::Approx(std::log(1.0 + 1.0 / rho)).epsilon(1e-9));

  // disorder enhancement: any nondegenerate law condenses at higher T
  auto b = DisorderSpec::bernoulli(0.5, 2.0);
  auto u = DisorderSpec::uniform(2.0);
  for (double rho = 0.1; rho <= 2.0; rho += 0.1) {
    const double nonrandom = std::log(1.0 + 1.0 / rho);
    CHECK(perfect_critical_beta(rho, b) < nonrandom);
    CHECK(perfect_critical_beta(rho, u) < nonrandom);
  }

  // narrow uniform disorder approaches the nonrandom value
  auto thin = DisorderSpec::uniform(1e-4);
  CHECK(perfect_critical_beta(1.0, thin) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("critical_beta: convergent, divergent, and marginal cases") {
  auto pm = DisorderSpec::point_mass();
  auto b = DisorderSpec::bernoulli(0.5, 1.9);

  auto cp = critical_beta(0.5, Interaction::hard_core(), b);
  REQUIRE(cp.status == PointStatus::Converged);
  CHECK(cp.beta_c ==
        doctest::Approx((4.0 / 1.9) * std::atanh(0.95)).epsilon(1e-6));
  CHECK(cp.mu_c == doctest::Approx(1.95).epsilon(1e-8));
  // converged points satisfy both equations
  CHECK(std::abs(gap_function(cp.beta_c, cp.mu_c, Interaction::hard_core(), b)) <
        1e-6);
  CHECK(density_at(cp.beta_c, cp.mu_c, Interaction::hard_core(), b) ==
        doctest::Approx(0.5).epsilon(1e-8));

  // the marginal width: no root at any finite beta
  auto b2 = DisorderSpec::bernoulli(0.5, 2.0);
  CHECK(critical_beta(0.5, Interaction::hard_core(), b2).status ==
        PointStatus::Divergent);
  auto b3 = DisorderSpec::bernoulli(0.5, 2.1);
  CHECK(critical_beta(0.5, Interaction::hard_core(), b3).status ==
        PointStatus::Divergent);

  // perfect-limit sanity for vanishing repulsion
  auto tiny = critical_beta(1.0, Interaction::finite(1e-6), pm);
  REQUIRE(tiny.status == PointStatus::Converged);
  CHECK(tiny.beta_c == doctest::Approx(std::log(2.0)).epsilon(2e-3));

  // nonrandom repulsion thresholds at rho = 1 (lambda_c1 = 3)
  CHECK(critical_beta(1.0, Interaction::finite(2.8), pm).status ==
        PointStatus::Converged);
  CHECK(critical_beta(1.0, Interaction::finite(3.2), pm).status ==
        PointStatus::Divergent);
}

TEST_CASE("multinomial divergence pattern above unit density") {
  // ten-level disorder: fractional densities below 1 are suppressed for
  // wide disorder, their images above 1 are not
  auto m10 = DisorderSpec::multinomial_equidistant(10, 10.0);
  CHECK(critical_beta(0.3, Interaction::finite(8.0), m10).status ==
        PointStatus::Divergent);
  CHECK(critical_beta(1.3, Interaction::finite(8.0), m10).status ==
        PointStatus::Converged);
}

TEST_CASE("upper-bound validator for the bernoulli hard-core model") {
  const double p = 0.4, eps = 6.0;
  SUBCASE("rho above 1-p: bound (ln 8 form) holds against the solver") {
    const double rho = 0.65;  // delta = 0.1 < p/2, eps > ln(4/p)
    auto cp = critical_beta(rho, Interaction::hard_core(),
                            DisorderSpec::bernoulli(p, eps));
    REQUIRE(cp.status == PointStatus::Converged);
    auto bound = bernoulli_betac_upper_bound(rho, p, eps, cp.mu_c);
    REQUIRE(bound.has_value());
    CHECK(*bound == doctest::Approx(std::log(8.0) /
                                    (0.4 - 0.1 - 2.0 * std::exp(-6.0)))
                        .epsilon(1e-12));
    CHECK(cp.beta_c <= *bound);
  }
  SUBCASE("rho below 1-p") {
    const double rho = 0.55;
    auto cp = critical_beta(rho, Interaction::hard_core(),
                            DisorderSpec::bernoulli(p, eps));
    REQUIRE(cp.status == PointStatus::Converged);
    auto bound = bernoulli_betac_upper_bound(rho, p, eps, cp.mu_c);
    if (bound) CHECK(cp.beta_c <= *bound);
  }
  SUBCASE("side conditions can rule everything out") {
    CHECK_FALSE(bernoulli_betac_upper_bound(0.65, 0.4, 1.0, 1.2).has_value());
    CHECK_FALSE(bernoulli_betac_upper_bound(0.6, 0.4, 6.0, 1.2).has_value());
  }
}

TEST_CASE("curve sweep records per-point failures without aborting") {
  auto b = DisorderSpec::bernoulli(0.5, 2.0);
  // rho = 1.5 is outside the hard-core band and must fail in-point
  auto curve = curve_sweep({0.3, 1.5}, Interaction::hard_core(), b);
  REQUIRE(curve.points.size() == 2);
  CHECK(curve.points[0].status == PointStatus::Converged);
  CHECK(curve.points[1].status == PointStatus::Failed);
  CHECK_FALSE(curve.points[1].error.empty());
}

TEST_CASE("curve sweep is deterministic across worker counts") {
  auto b = DisorderSpec::bernoulli(0.5, 2.0);
  std::vector<double> grid;
  for (double r = 0.1; r < 0.95; r += 0.1) grid.push_back(r);
  auto serial = curve_sweep(grid, Interaction::hard_core(), b, 500.0, 1);
  auto parallel = curve_sweep(grid, Interaction::hard_core(), b, 500.0, 4);
  CHECK(curve_to_csv(serial) == curve_to_csv(parallel));
}

TEST_CASE("hard-core uniform curve: beta_c >= 2 and minimum at one half") {
  auto u = DisorderSpec::uniform(2.0);
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
  auto curve = curve_sweep(grid, Interaction::hard_core(), u);
  std::size_t best = 0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    REQUIRE(curve.points[i].status == PointStatus::Converged);
    CHECK(curve.points[i].beta_c >= 2.0);
    if (curve.points[i].beta_c < curve.points[best].beta_c) best = i;
  }
  CHECK(grid[best] == doctest::Approx(0.5).epsilon(1e-12));
  // decreasing left of the minimum, increasing right of it
  for (std::size_t i = 1; i <= best; ++i)
    CHECK(curve.points[i].beta_c <= curve.points[i - 1].beta_c);
  for (std::size_t i = best + 1; i < curve.points.size(); ++i)
    CHECK(curve.points[i].beta_c >= curve.points[i - 1].beta_c);
}

TEST_CASE("csv and json emission") {
  auto pm = DisorderSpec::point_mass();
  auto curve = curve_sweep({1.0}, Interaction::finite(3.2), pm);
  const std::string csv = curve_to_csv(curve);
  CHECK(csv.find("rho,beta_c,mu_c,status,n_roots") == 0);
  CHECK(csv.find("1,inf,,divergent,0") != std::string::npos);

  const auto j = curve_to_json(curve);
  CHECK(j.at("format_version") == 1);
  CHECK(j.at("points").at(0).at("beta_c").is_null());
  CHECK(j.at("points").at(0).at("status") == "divergent");
}
