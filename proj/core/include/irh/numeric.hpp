#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace irh::numeric {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [a, b]
  std::vector<double> weights;
};

// Gauss-Legendre nodes and weights on [a, b], Newton iteration on the
// Legendre recurrence.
GaussLegendreRule gauss_legendre(int order, double a, double b);

// Bisection for f(lo) and f(hi) of opposite sign. Returns the midpoint once
// the bracket width drops below xtol. Throws solver_error on a bad bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter = 200);

// Golden-section maximizer of f on [a, b], refined until the bracket width
// drops below xtol. Assumes a single interior maximum in the bracket.
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double xtol);

// log(sum_i exp(v_i)) with max shift.
double log_sum_exp(const std::vector<double>& v);

}  // namespace irh::numeric
