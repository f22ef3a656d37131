#pragma once

#include <vector>

namespace jacobi {

// Angular momenta are passed doubled so half-integer values stay exact.

/// Wigner small-d matrix element d^j_{m1,m2}(beta).
double wigner_d(int two_j, int two_m1, int two_m2, double beta);

/// Jacobi polynomial P_n^{(a,b)}(x) by the three-term recurrence.
double jacobi_polynomial(int n, int a, int b, double x);

/// Polar profile of the spin-weighted harmonic of spin s, degree l, order m:
///   sqrt((2l+1)/4pi) d^l_{m,-s}(theta).
/// The full harmonic in the stereographic chart gauge is this profile times
/// exp(i (s + m) phi).
double spin_harmonic_profile(int two_s, int two_l, int two_m, double theta);

struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending in [-1, 1]
  std::vector<double> weights;  // sum to 2
};

GaussLegendreRule gauss_legendre(int n);

}  // namespace jacobi
