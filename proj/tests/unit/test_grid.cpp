#include <cmath>
#include <numbers>

#include "doctest.h"
#include "jacobi/errors.hpp"
#include "jacobi/grid.hpp"
#include "jacobi/wigner.hpp"

using namespace jacobi;

namespace {

// Chart-gauge spin-weighted harmonic at a point of the stereographic chart.
cplx chart_harmonic(int two_s, int two_l, int two_m, cplx z) {
  const double theta = 2.0 * std::atan(std::abs(z));
  const double phi = std::arg(z);
  return spin_harmonic_profile(two_s, two_l, two_m, theta) * std::polar(1.0, 0.5 * (two_s + two_m) * phi);
}

cplx fd_dz(auto&& f, cplx z, double h) {
  const cplx i(0.0, 1.0);
  return 0.5 * ((f(z + h) - f(z - h)) / (2.0 * h) - i * (f(z + i * h) - f(z - i * h)) / (2.0 * h));
}

cplx fd_dzbar(auto&& f, cplx z, double h) {
  const cplx i(0.0, 1.0);
  return 0.5 * ((f(z + h) - f(z - h)) / (2.0 * h) + i * (f(z + i * h) - f(z - i * h)) / (2.0 * h));
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto rule = gauss_legendre(8);
  double sum = 0.0, x6 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i];
    x6 += rule.weights[i] * std::pow(rule.nodes[i], 6);
  }
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x6 == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("Wigner d satisfies unitarity") {
  const double beta = 0.73;
  for (int two_j : {2, 3, 6}) {
    for (int a = -two_j; a <= two_j; a += 2) {
      double norm = 0.0;
      for (int b = -two_j; b <= two_j; b += 2) norm += std::pow(wigner_d(two_j, a, b, beta), 2);
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(wigner_d(2, 0, 0, beta) == doctest::Approx(std::cos(beta)));
}

TEST_CASE("sphere transform round trip and orthonormality") {
  SphereGrid grid(10);
  const auto& q = grid.grid();
  for (int two_s : {0, 1, -2, 3}) {
    const SpinLayout layout = grid.layout(two_s);
    Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Random(layout.size(), 2);
    const Eigen::MatrixXcd values = grid.backward(coeffs, two_s);
    CHECK((grid.forward(values, two_s) - coeffs).norm() < 1e-11 * coeffs.norm());
    // Parseval on the unit sphere.
    double lhs = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) lhs += q.weights[k] * std::norm(values(static_cast<Eigen::Index>(k), 0));
    CHECK(lhs == doctest::Approx(coeffs.col(0).squaredNorm()).epsilon(1e-11));
  }
}

TEST_CASE("ladder operators match chart derivatives") {
  SphereGrid grid(8);
  const auto& q = grid.grid();
  const double h = 1e-5;
  struct Mode {
    int two_s, two_l, two_m;
  };
  for (const Mode md : {Mode{0, 2, 2}, Mode{0, 3, -2}, Mode{1, 3, 1}, Mode{-1, 5, -3}, Mode{2, 4, 0}, Mode{-2, 2, 2}}) {
    CAPTURE(md.two_s);
    CAPTURE(md.two_l);
    CAPTURE(md.two_m);
    const double k = 0.5 * md.two_s;
    Eigen::VectorXcd field(static_cast<Eigen::Index>(q.size()));
    for (std::size_t j = 0; j < q.size(); ++j) field[static_cast<Eigen::Index>(j)] = chart_harmonic(md.two_s, md.two_l, md.two_m, q.nodes[j]);
    const Eigen::MatrixXcd bar = grid.dbar(field, md.two_s);
    const Eigen::MatrixXcd hol = grid.d(field, md.two_s);
    auto f = [&](cplx z) { return chart_harmonic(md.two_s, md.two_l, md.two_m, z); };
    double err_bar = 0.0, err_hol = 0.0;
    for (std::size_t j = 0; j < q.size(); j += 7) {
      const cplx z = q.nodes[j];
      if (std::abs(z) < 0.05 || std::abs(z) > 20.0) continue;
      const double r = std::norm(z);
      const double scale = 0.5 * (1.0 + r);  // exp(-u0)
      const cplx u0_zbar = -z / (1.0 + r);
      const cplx u0_z = -std::conj(z) / (1.0 + r);
      const cplx expect_bar = scale * (fd_dzbar(f, z, h) - k * u0_zbar * f(z));
      const cplx expect_hol = scale * (fd_dz(f, z, h) + k * u0_z * f(z));
      err_bar = std::max(err_bar, std::abs(bar(static_cast<Eigen::Index>(j), 0) - expect_bar));
      err_hol = std::max(err_hol, std::abs(hol(static_cast<Eigen::Index>(j), 0) - expect_hol));
    }
    CHECK(err_bar < 1e-6);
    CHECK(err_hol < 1e-6);
  }
}

TEST_CASE("spin beyond the table bound is rejected") {
  SphereGrid grid(4, 2);
  Eigen::MatrixXcd field = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(grid.grid().size()), 1);
  CHECK_THROWS_AS(grid.dbar(field, 6), JacobiError);
}

TEST_CASE("torus derivatives of Fourier modes") {
  const cplx w1(1.0, 0.0), w2(0.3, 1.1);
  TorusGrid grid(16, w1, w2);
  const auto& q = grid.grid();
  Eigen::Matrix2d frame;
  frame << w1.real(), w2.real(), w1.imag(), w2.imag();
  const Eigen::Matrix2d inv = frame.inverse();
  const int m = 2, n = -3;
  Eigen::VectorXcd field(static_cast<Eigen::Index>(q.size()));
  for (std::size_t j = 0; j < q.size(); ++j) {
    const Eigen::Vector2d xy = inv * Eigen::Vector2d(q.nodes[j].real(), q.nodes[j].imag());
    field[static_cast<Eigen::Index>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * (m * xy[0] + n * xy[1]));
  }
  const Eigen::MatrixXcd bar = grid.dbar(field, 0);
  const Eigen::MatrixXcd hol = grid.d(field, 0);
  // d/dwbar of exp(i k.x) with x = inv (Re w, Im w).
  const Eigen::Vector2d c = inv.transpose() * Eigen::Vector2d(m, n);
  const cplx sym_bar = std::numbers::pi * cplx(0.0, 1.0) * cplx(c[0], c[1]);
  const cplx sym_hol = std::numbers::pi * cplx(0.0, 1.0) * cplx(c[0], -c[1]);
  CHECK((bar.col(0) - sym_bar * field).norm() < 1e-10 * field.norm() * std::abs(sym_bar));
  CHECK((hol.col(0) - sym_hol * field).norm() < 1e-10 * field.norm() * std::abs(sym_hol));
  CHECK_THROWS_AS(TorusGrid(16, w1, 2.0 * w1), JacobiError);
}
