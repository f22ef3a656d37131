#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "jacobi/calculus.hpp"
#include "jacobi/errors.hpp"
#include "jacobi/spectral.hpp"

namespace jacobi {

namespace {

constexpr cplx kI(0.0, 1.0);

// Connection coefficient c of weight (p, q) relative to the reference ladder:
// d1bar = exp(-sigma) (ladder + c).
Eigen::VectorXcd connection_offset(const CurveGeometry& g, int p, int q) {
  const SpectralGrid& grid = *g.spectral_grid;
  const int two_k = doubled_spin(g, p, q);
  return (0.5 * two_k) * grid.ref_conn_bar() +
         (kI * grid.ref_scale().cast<cplx>().array() * (double(p) * g.tau.conjugate() + double(q) * g.alpha.conjugate()).array())
             .matrix();
}

// Phi with ladder(Phi) = -c on spin 0, so exp(Phi) absorbs the connection offset.
Eigen::VectorXcd sphere_potential(const CurveGeometry& g, const SphereGrid& sphere, int p, int q) {
  const Eigen::VectorXcd c = connection_offset(g, p, q);
  const Eigen::VectorXcd c_hat = sphere.forward(c, 2).col(0);
  const SpinLayout src = sphere.layout(0);
  const SpinLayout dst = sphere.layout(2);
  Eigen::VectorXcd phi_hat = Eigen::VectorXcd::Zero(src.size());
  for (int two_l = 2; two_l <= src.two_l_max; two_l += 2) {
    const double l = 0.5 * two_l;
    const double factor = 0.5 * std::sqrt(l * (l + 1.0));
    for (int two_m = -two_l; two_m <= two_l; two_m += 2) {
      phi_hat[src.index(two_l, two_m)] = -c_hat[dst.index(two_l, two_m)] / factor;
    }
  }
  return sphere.backward(phi_hat, 0).col(0);
}

Eigen::Matrix2d torus_inverse_frame(const CurveGeometry& g) {
  const auto& lat = g.spec.ambient.parameters.curve_lattice;
  Eigen::Matrix2d frame;
  frame << lat[0].real(), lat[1].real(), lat[0].imag(), lat[1].imag();
  return frame.inverse();
}

Eigen::MatrixXcd torus_modes(const CurveGeometry& g, const std::vector<std::array<int, 2>>& modes) {
  const QuadratureGrid& grid = g.grid();
  const Eigen::Matrix2d inv = torus_inverse_frame(g);
  Eigen::MatrixXcd out(g.size(), static_cast<Eigen::Index>(modes.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Eigen::Vector2d xy = inv * Eigen::Vector2d(grid.nodes[j].real(), grid.nodes[j].imag());
    for (std::size_t k = 0; k < modes.size(); ++k) {
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          std::polar(1.0, 2.0 * std::numbers::pi * (modes[k][0] * xy[0] + modes[k][1] * xy[1]));
    }
  }
  return out;
}

Eigen::VectorXcd torus_potential(const CurveGeometry& g, const TorusGrid& torus, int p, int q) {
  const Eigen::VectorXcd c = connection_offset(g, p, q);
  if (c.cwiseAbs().maxCoeff() == 0.0) return Eigen::VectorXcd::Zero(g.size());
  const int half = torus.n() / 2 - 1;
  std::vector<std::array<int, 2>> modes;
  for (int m = -half; m <= half; ++m) {
    for (int n = -half; n <= half; ++n) modes.push_back({m, n});
  }
  const Eigen::MatrixXcd e = torus_modes(g, modes);
  const Eigen::VectorXcd c_hat = e.adjoint() * c / static_cast<double>(g.size());
  Eigen::VectorXcd phi_hat = Eigen::VectorXcd::Zero(c_hat.size());
  for (std::size_t k = 0; k < modes.size(); ++k) {
    if (modes[k][0] == 0 && modes[k][1] == 0) continue;
    phi_hat[static_cast<Eigen::Index>(k)] = -c_hat[static_cast<Eigen::Index>(k)] / torus.dbar_symbol(modes[k][0], modes[k][1]);
  }
  return e * phi_hat;
}

double condition_number(const Eigen::MatrixXcd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev.size() == 0) return 1.0;
  if (ev[0] <= 0.0) return std::numeric_limits<double>::infinity();
  return ev[ev.size() - 1] / ev[0];
}

}  // namespace

std::string_view to_string(Backend backend) {
  return backend == Backend::TorusFourier ? "TorusFourier" : "SphereHarmonicGalerkin";
}

SectionBasis build_basis(const CurveGeometry& geometry, int p, int q, int cutoff) {
  if (cutoff < 1) throw JacobiError(ErrorCode::CutoffTooSmall, "cutoff must be at least 1");
  SectionBasis basis;
  basis.geometry = &geometry;
  basis.cutoff = cutoff;
  basis.weight_p = p;
  basis.weight_q = q;
  basis.two_spin = doubled_spin(geometry, p, q);

  if (const auto* sphere = dynamic_cast<const SphereGrid*>(geometry.spectral_grid.get())) {
    basis.backend = Backend::SphereHarmonicGalerkin;
    if (q != 0 && geometry.chart_winding != geometry.deg_normal) {
      throw JacobiError(ErrorCode::IncompatibleSpin, "normal frame winding " + std::to_string(geometry.chart_winding) +
                                                         " disagrees with the bundle degree " + std::to_string(geometry.deg_normal));
    }
    if (cutoff > sphere->bandwidth()) {
      throw JacobiError(ErrorCode::InvalidArgument, "cutoff exceeds the grid bandwidth; raise the resolution");
    }
    const SpinLayout layout = sphere->layout(basis.two_spin);
    const int two_l_cut = 2 * cutoff + (layout.two_l_min % 2);
    if (two_l_cut < layout.two_l_min) {
      throw JacobiError(ErrorCode::CutoffTooSmall, "cutoff " + std::to_string(cutoff) + " is below the lowest degree |k| = " +
                                                       std::to_string(0.5 * layout.two_l_min));
    }
    const int n = SpinLayout(basis.two_spin, cutoff).size();
    const int expected_kernel = std::max(basis.two_spin + 1, 0);
    if (n < expected_kernel) throw JacobiError(ErrorCode::CutoffTooSmall, "basis smaller than the holomorphic kernel");
    Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Identity(layout.size(), n);
    basis.values = sphere->backward(coeffs, basis.two_spin);
    basis.potential = sphere_potential(geometry, *sphere, p, q);
    for (int two_l = layout.two_l_min; two_l <= two_l_cut; two_l += 2) {
      basis.two_degree.insert(basis.two_degree.end(), static_cast<std::size_t>(two_l + 1), two_l);
    }
  } else {
    const auto& torus = dynamic_cast<const TorusGrid&>(*geometry.spectral_grid);
    basis.backend = Backend::TorusFourier;
    if (2 * cutoff + 1 >= torus.n()) {
      throw JacobiError(ErrorCode::InvalidArgument, "cutoff needs 2*cutoff+1 < grid points per side");
    }
    std::vector<std::array<int, 2>> modes;
    for (int m = -cutoff; m <= cutoff; ++m) {
      for (int n = -cutoff; n <= cutoff; ++n) modes.push_back({m, n});
    }
    std::stable_sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) {
      return std::max(std::abs(a[0]), std::abs(a[1])) < std::max(std::abs(b[0]), std::abs(b[1]));
    });
    basis.values = torus_modes(geometry, modes);
    basis.potential = torus_potential(geometry, torus, p, q);
    for (const auto& md : modes) basis.two_degree.push_back(std::max(std::abs(md[0]), std::abs(md[1])));
  }

  if (basis.potential.cwiseAbs().maxCoeff() > 0.0) {
    basis.values = basis.potential.array().exp().matrix().asDiagonal() * basis.values;
  }
  const Eigen::VectorXd w = geometry.area_weights();
  basis.gram = basis.values.adjoint() * w.cast<cplx>().asDiagonal() * basis.values;
  basis.gram = 0.5 * (basis.gram + basis.gram.adjoint()).eval();
  basis.gram_condition = condition_number(basis.gram);
  return basis;
}

}  // namespace jacobi
