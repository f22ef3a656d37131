#include "jacobi/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

constexpr cplx kI(0.0, 1.0);

void require_section(const WeightedSection& s) {
  if (s.geometry == nullptr) throw JacobiError(ErrorCode::InvalidArgument, "section has no geometry");
  if (s.values.size() != s.geometry->size()) throw JacobiError(ErrorCode::InvalidArgument, "section size does not match grid");
}

void require_normal_field(const WeightedSection& nu) {
  require_section(nu);
  if (nu.weight_p != 0 || nu.weight_q != 1) throw JacobiError(ErrorCode::WeightMismatch, "expected a weight (0, 1) section");
}

WeightedSection derived(const WeightedSection& s, Eigen::VectorXcd values, int dp) {
  return WeightedSection{std::move(values), s.weight_p + dp, s.weight_q, s.geometry};
}

}  // namespace

int doubled_spin(const CurveGeometry& geometry, int p, int q) { return p * geometry.euler_char + q * geometry.deg_normal; }

Eigen::MatrixXcd d1bar(const CurveGeometry& geometry, const Eigen::MatrixXcd& fields, int p, int q) {
  const SpectralGrid& grid = *geometry.spectral_grid;
  const int two_k = doubled_spin(geometry, p, q);
  // exp(-u) (d/dzbar + i (p conj tau + q conj alpha)) written against the reference ladder.
  const Eigen::VectorXcd coupling =
      (0.5 * two_k) * grid.ref_conn_bar() +
      (kI * grid.ref_scale().cast<cplx>().array() * (double(p) * geometry.tau.conjugate() + double(q) * geometry.alpha.conjugate()).array())
          .matrix();
  Eigen::MatrixXcd out = grid.dbar(fields, two_k);
  out += coupling.asDiagonal() * fields;
  return (-geometry.sigma).array().exp().matrix().cast<cplx>().asDiagonal() * out;
}

Eigen::MatrixXcd d1(const CurveGeometry& geometry, const Eigen::MatrixXcd& fields, int p, int q) {
  const SpectralGrid& grid = *geometry.spectral_grid;
  const int two_k = doubled_spin(geometry, p, q);
  const Eigen::VectorXcd coupling =
      (-0.5 * two_k) * grid.ref_conn_bar().conjugate() +
      (kI * grid.ref_scale().cast<cplx>().array() * (double(p) * geometry.tau + double(q) * geometry.alpha).array()).matrix();
  Eigen::MatrixXcd out = grid.d(fields, two_k);
  out += coupling.asDiagonal() * fields;
  return (-geometry.sigma).array().exp().matrix().cast<cplx>().asDiagonal() * out;
}

WeightedSection d1bar(const WeightedSection& s) {
  require_section(s);
  return derived(s, d1bar(*s.geometry, s.values, s.weight_p, s.weight_q), +1);
}

WeightedSection d1(const WeightedSection& s) {
  require_section(s);
  return derived(s, d1(*s.geometry, s.values, s.weight_p, s.weight_q), -1);
}

Eigen::MatrixXcd jacobi_apply(const CurveGeometry& geometry, const Eigen::MatrixXcd& nu) {
  return -4.0 * d1(geometry, d1bar(geometry, nu, 0, 1), 1, 1);
}

WeightedSection jacobi_apply(const WeightedSection& nu) {
  require_normal_field(nu);
  return WeightedSection{jacobi_apply(*nu.geometry, nu.values), 0, 1, nu.geometry};
}

cplx inner(const CurveGeometry& geometry, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return geometry.integrate(Eigen::VectorXcd(a.conjugate().cwiseProduct(b)));
}

double norm(const CurveGeometry& geometry, const Eigen::VectorXcd& a) {
  return std::sqrt(geometry.integrate(Eigen::VectorXd(a.cwiseAbs2())));
}

QuadraticFormValue second_variation_area(const WeightedSection& nu) {
  require_normal_field(nu);
  QuadraticFormValue q;
  q.integrand_samples = 4.0 * d1bar(nu).values.cwiseAbs2();
  q.value = nu.geometry->integrate(q.integrand_samples);
  return q;
}

QuadraticFormValue second_variation_wplus(const WeightedSection& nu) {
  require_normal_field(nu);
  QuadraticFormValue q;
  q.integrand_samples = 8.0 * d1bar(d1bar(nu)).values.cwiseAbs2();
  q.value = nu.geometry->integrate(q.integrand_samples);
  return q;
}

RicciIdentity ricci_identity(const WeightedSection& nu) {
  require_normal_field(nu);
  const WeightedSection g = d1bar(nu);
  const Eigen::VectorXcd a = d1(d1bar(g)).values;
  const Eigen::VectorXcd b = d1bar(d1(g)).values;
  RicciIdentity out;
  out.residual = (a - b - nu.geometry->ric_ee.cast<cplx>().cwiseProduct(g.values)).cwiseAbs().maxCoeff();
  out.scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return out;
}

double ricci_identity_residual(const WeightedSection& nu) { return ricci_identity(nu).residual; }

double WplusIdentity::scale() const { return std::max({std::abs(lhs), std::abs(rhs1), rhs2 ? std::abs(*rhs2) : 0.0}); }

WplusIdentity wplus_identity_check(const WeightedSection& nu, bool with_rhs2) {
  require_normal_field(nu);
  const CurveGeometry& g = *nu.geometry;
  if (with_rhs2 && !g.spec.ambient.einstein_constant) {
    throw JacobiError(ErrorCode::NotEinstein, "rhs2 needs an Einstein ambient, got " + g.spec.ambient.label());
  }
  WplusIdentity out;
  out.lhs = second_variation_wplus(nu).value;
  const WeightedSection first = d1bar(nu);
  const WeightedSection mixed = d1(first);
  out.rhs1 = 8.0 * g.integrate(Eigen::VectorXd(mixed.values.cwiseAbs2() - g.ric_ee.cwiseProduct(first.values.cwiseAbs2())));
  if (with_rhs2) {
    const double c = *g.spec.ambient.einstein_constant;
    const Eigen::VectorXcd jnu = jacobi_apply(nu).values;
    const Eigen::VectorXd integrand = jnu.cwiseAbs2() - 2.0 * c * nu.values.conjugate().cwiseProduct(jnu).real();
    out.rhs2 = 0.5 * g.integrate(integrand);
  }
  return out;
}

double integration_by_parts_residual(const WeightedSection& f, const WeightedSection& g) {
  require_section(f);
  require_section(g);
  if (f.geometry != g.geometry || f.weight_p != g.weight_p + 1 || f.weight_q != g.weight_q) {
    throw JacobiError(ErrorCode::WeightMismatch, "integration by parts needs weights (p+1, q) and (p, q)");
  }
  const CurveGeometry& geo = *f.geometry;
  const cplx total = inner(geo, f.values, d1bar(g).values) + inner(geo, d1(f).values, g.values);
  return std::abs(total) / (norm(geo, f.values) * norm(geo, g.values));
}

WeightedSection random_section(const CurveGeometry& geometry, int p, int q, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto draw = [&] { return cplx(gauss(rng), gauss(rng)); };
  const QuadratureGrid& grid = geometry.grid();
  WeightedSection s{Eigen::VectorXcd::Zero(geometry.size()), p, q, &geometry};
  if (const auto* sphere = dynamic_cast<const SphereGrid*>(geometry.spectral_grid.get())) {
    const int two_k = doubled_spin(geometry, p, q);
    const SpinLayout layout = sphere->layout(two_k);
    Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(layout.size());
    const int two_l_top = std::min(layout.two_l_max, 2 * band + (layout.two_l_min % 2));
    for (int two_l = layout.two_l_min; two_l <= two_l_top; two_l += 2) {
      for (int two_m = -two_l; two_m <= two_l; two_m += 2) coeffs[layout.index(two_l, two_m)] = draw();
    }
    s.values = sphere->backward(coeffs, two_k).col(0);
    return s;
  }
  const auto& lat = geometry.spec.ambient.parameters.curve_lattice;
  Eigen::Matrix2d frame;
  frame << lat[0].real(), lat[1].real(), lat[0].imag(), lat[1].imag();
  const Eigen::Matrix2d inv = frame.inverse();
  for (int m = -band; m <= band; ++m) {
    for (int n = -band; n <= band; ++n) {
      const cplx c = draw();
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const Eigen::Vector2d xy = inv * Eigen::Vector2d(grid.nodes[j].real(), grid.nodes[j].imag());
        s.values[static_cast<Eigen::Index>(j)] += c * std::polar(1.0, 2.0 * std::numbers::pi * (m * xy[0] + n * xy[1]));
      }
    }
  }
  return s;
}

}  // namespace jacobi
