#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "jacobi/geometry.hpp"

namespace jacobi {

/// Chart-trivialized section of weight (p, q): p couples to the tangent
/// connection, q to the normal connection. The normal vector field itself
/// has weight (0, 1).
struct WeightedSection {
  Eigen::VectorXcd values;
  int weight_p = 0;
  int weight_q = 1;
  const CurveGeometry* geometry = nullptr;
};

/// Doubled chart spin 2k = p*chi + q*deg of a weight-(p, q) section.
int doubled_spin(const CurveGeometry& geometry, int p, int q);

/// Columnwise covariant derivatives of weight-(p, q) fields: the dzbar part
/// (weight p+1) and dz part (weight p-1), as chart coefficients.
Eigen::MatrixXcd d1bar(const CurveGeometry& geometry, const Eigen::MatrixXcd& fields, int p, int q);
Eigen::MatrixXcd d1(const CurveGeometry& geometry, const Eigen::MatrixXcd& fields, int p, int q);

WeightedSection d1bar(const WeightedSection& s);
WeightedSection d1(const WeightedSection& s);

/// Positive area Jacobi operator J nu = -4 nu_{1bar 1}.
Eigen::MatrixXcd jacobi_apply(const CurveGeometry& geometry, const Eigen::MatrixXcd& nu);
WeightedSection jacobi_apply(const WeightedSection& nu);

/// Integral of conj(a) b against the induced area.
cplx inner(const CurveGeometry& geometry, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);
double norm(const CurveGeometry& geometry, const Eigen::VectorXcd& a);

struct QuadraticFormValue {
  double value = 0.0;
  Eigen::VectorXd integrand_samples;
};

/// 4 * integral |nu_1bar|^2.
QuadraticFormValue second_variation_area(const WeightedSection& nu);
/// 8 * integral |nu_1bar1bar|^2.
QuadraticFormValue second_variation_wplus(const WeightedSection& nu);

struct RicciIdentity {
  double residual = 0.0;  // max over nodes of |nu_{1bar 1bar 1} - nu_{1bar 1 1bar} - Ric(e1, e1bar) nu_1bar|
  double scale = 0.0;     // max over nodes of the third-derivative terms
};

RicciIdentity ricci_identity(const WeightedSection& nu);
double ricci_identity_residual(const WeightedSection& nu);

struct WplusIdentity {
  double lhs = 0.0;
  double rhs1 = 0.0;
  std::optional<double> rhs2;
  /// Largest of the three values, for relative comparisons.
  double scale() const;
};

/// Three expressions of the W+ second variation. rhs2 needs an Einstein
/// ambient; requesting it elsewhere throws NotEinstein.
WplusIdentity wplus_identity_check(const WeightedSection& nu, bool with_rhs2 = true);

/// |<f, d1bar g> + <d1 f, g>| / (|f| |g|) for f of weight (p+1, q), g of weight (p, q).
double integration_by_parts_residual(const WeightedSection& f, const WeightedSection& g);

/// Random section of weight (p, q) with reference harmonic degree (sphere)
/// or Fourier index (torus) at most `band`. Deterministic in `seed`.
WeightedSection random_section(const CurveGeometry& geometry, int p, int q, int band, std::uint64_t seed);

}  // namespace jacobi
