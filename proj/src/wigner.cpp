#include "jacobi/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double jacobi_polynomial(int n, int a, int b, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 0.5 * (a - b + (a + b + 2.0) * x);
  for (int k = 2; k <= n; ++k) {
    const double ab = a + b;
    const double c0 = 2.0 * k * (k + ab) * (2.0 * k + ab - 2.0);
    const double c1 = (2.0 * k + ab - 1.0) * ((2.0 * k + ab) * (2.0 * k + ab - 2.0) * x + a * a - b * b);
    const double c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + ab);
    const double next = (c1 * cur - c2 * prev) / c0;
    prev = cur;
    cur = next;
  }
  return cur;
}

double wigner_d(int two_j, int two_m1, int two_m2, double beta) {
  if (two_j < 0 || std::abs(two_m1) > two_j || std::abs(two_m2) > two_j ||
      (two_j - two_m1) % 2 != 0 || (two_j - two_m2) % 2 != 0) {
    return 0.0;
  }
  // Integer bookkeeping in units of one: jm = j + m etc.
  const int j_plus_m = (two_j + two_m2) / 2;
  const int j_minus_m = (two_j - two_m2) / 2;
  const int j_plus_mp = (two_j + two_m1) / 2;
  const int j_minus_mp = (two_j - two_m1) / 2;
  const int k = std::min({j_plus_m, j_minus_m, j_plus_mp, j_minus_mp});
  int a = 0;
  int lambda = 0;
  if (k == j_plus_m) {
    a = (two_m1 - two_m2) / 2;
    lambda = a;
  } else if (k == j_minus_m) {
    a = (two_m2 - two_m1) / 2;
  } else if (k == j_plus_mp) {
    a = (two_m2 - two_m1) / 2;
  } else {
    a = (two_m1 - two_m2) / 2;
    lambda = a;
  }
  const int b = two_j - 2 * k - a;
  const double log_norm = 0.5 * (log_binomial(two_j - k, k + a) - log_binomial(k + b, b));
  const double s = std::sin(0.5 * beta);
  const double c = std::cos(0.5 * beta);
  double value = std::exp(log_norm) * std::pow(s, a) * std::pow(c, b) *
                 jacobi_polynomial(k, a, b, std::cos(beta));
  if (lambda % 2 != 0) value = -value;
  return value;
}

double spin_harmonic_profile(int two_s, int two_l, int two_m, double theta) {
  const double l = 0.5 * two_l;
  return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi)) * wigner_d(two_l, two_m, -two_s, theta);
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw JacobiError(ErrorCode::InvalidArgument, "Gauss-Legendre rule needs n >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace jacobi
