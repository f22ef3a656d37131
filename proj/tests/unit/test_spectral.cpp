#include <cmath>
#include <numbers>

#include "doctest.h"
#include "jacobi/errors.hpp"
#include "jacobi/spectral.hpp"

using namespace jacobi;

namespace {

const double kPi = std::numbers::pi;

CurveGeometry geometry(const char* label, int cutoff, GeometryOptions opts = {}) {
  const CurveSpec spec = curve_from_label(label);
  opts.resolution = default_resolution(spec, cutoff);
  return build_geometry(spec, opts);
}

}  // namespace

TEST_CASE("FactorSphere spectrum is l(l+1)") {
  const CurveGeometry g = geometry("FactorSphere", 5);
  const SectionBasis b = build_basis(g, 0, 1, 5);
  CHECK(b.size() == 36);
  const SpectrumReport r = eigensolve(assemble(g, b, OperatorKind::Jacobi));
  CHECK(r.kernel_dim == 1);
  REQUIRE(r.clusters.size() >= 2);
  CHECK(std::abs(r.clusters[0].value - 2.0) < 1e-8);
  CHECK(r.clusters[0].multiplicity == 3);
  CHECK(std::abs(r.clusters[1].value - 6.0) < 1e-8);
  CHECK(r.clusters[1].multiplicity == 5);
  CHECK(r.max_imaginary < 1e-10);
  CHECK(r.hermiticity_residual < 1e-10);
}

TEST_CASE("FactorSphere basis size at cutoff 10") {
  const CurveGeometry g = geometry("FactorSphere", 10);
  CHECK(build_basis(g, 0, 1, 10).size() == 121);
}

TEST_CASE("flat torus Fourier backend") {
  const CurveGeometry g = geometry("FlatSubtorus", 8);
  const SectionBasis b = build_basis(g, 0, 1, 8);
  CHECK(b.size() == 17 * 17);
  CHECK((b.gram - Eigen::MatrixXcd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff() < 1e-12);
  const OperatorMatrix j = assemble(g, b, OperatorKind::Jacobi);
  Eigen::MatrixXcd off = j.matrix;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-8);
  const SpectrumReport r = eigensolve(j);
  CHECK(r.kernel_dim == 1);
  const double unit = 4.0 * kPi * kPi;
  CHECK(std::abs(r.clusters[0].value - unit) < 1e-10 * unit);
  CHECK(r.clusters[0].multiplicity == 4);
  CHECK(std::abs(r.clusters[1].value - 2.0 * unit) < 1e-10 * unit);
  CHECK(r.clusters[1].multiplicity == 4);
  CHECK(std::abs(r.clusters[2].value - 4.0 * unit) < 1e-10 * unit);
  CHECK(r.clusters[2].multiplicity == 4);
  CHECK(std::abs(r.clusters[3].value - 5.0 * unit) < 1e-10 * unit);
  CHECK(r.clusters[3].multiplicity == 8);
}

TEST_CASE("line bundle basis starts at l = 1/2 and Dbar has a 2-dimensional kernel") {
  const CurveGeometry g = geometry("Line_CP2", 6);
  const SectionBasis b = build_basis(g, 0, 1, 6);
  CHECK(b.two_spin == 1);
  CHECK(b.two_degree.front() == 1);
  CHECK(std::count(b.two_degree.begin(), b.two_degree.end(), 1) == 2);
  const RankReport rank = dbar_rank(assemble(g, b, OperatorKind::Dbar));
  CHECK(rank.kernel == 2);
  CHECK(rank.cokernel == 0);
}

TEST_CASE("AreaForm agrees with the Jacobi matrix") {
  for (const char* label : {"Line_CP2", "Conic_CP2", "Diagonal_Product", "FlatSubtorus"}) {
    CAPTURE(label);
    const CurveGeometry g = geometry(label, 6);
    const SectionBasis b = build_basis(g, 0, 1, 6);
    const OperatorMatrix j = assemble(g, b, OperatorKind::Jacobi);
    const OperatorMatrix a = assemble(g, b, OperatorKind::AreaForm);
    CHECK((j.matrix - a.matrix).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, j.matrix.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("spectrum is gauge independent and matches the finite-difference connection") {
  for (const char* label : {"Line_CP2", "Conic_CP2", "FlatSubtorus"}) {
    CAPTURE(label);
    const int cutoff = 6;
    const CurveGeometry plain = geometry(label, cutoff);
    const CurveGeometry twisted = geometry(label, cutoff, {.gauge_amplitude = 0.4});
    const SectionBasis bp = build_basis(plain, 0, 1, cutoff);
    const SectionBasis bt = build_basis(twisted, 0, 1, cutoff);
    const SpectrumReport rp = eigensolve(assemble(plain, bp, OperatorKind::Jacobi));
    const SpectrumReport rt = eigensolve(assemble(twisted, bt, OperatorKind::Jacobi));
    REQUIRE(rp.eigenvalues.size() == rt.eigenvalues.size());
    double diff = 0.0;
    for (std::size_t i = 0; i < 20; ++i) diff = std::max(diff, std::abs(rp.eigenvalues[i] - rt.eigenvalues[i]));
    CHECK(diff < 1e-8);
    CHECK(rt.kernel_dim == rp.kernel_dim);
  }
  const CurveGeometry fd = geometry("Line_CP2", 6, {.connection = ConnectionMethod::FiniteDifference});
  const SectionBasis b = build_basis(fd, 0, 1, 6);
  const SpectrumReport r = eigensolve(assemble(fd, b, OperatorKind::Jacobi));
  CHECK(r.kernel_dim == 2);
  CHECK(std::abs(r.lambda1 - 12.0) < 1e-6);
}

TEST_CASE("Rayleigh-Ritz monotonicity on nested bases") {
  const CurveGeometry g = geometry("Conic_CP2", 8);
  const ConvergenceTable t = convergence_study(g, OperatorKind::Jacobi, {4, 6, 8});
  for (std::size_t i = 1; i < t.reports.size(); ++i) {
    const auto& small = t.reports[i - 1].eigenvalues;
    const auto& big = t.reports[i].eigenvalues;
    for (std::size_t k = 0; k < small.size(); ++k) CHECK(big[k] <= small[k] + 1e-9 * std::max(1.0, small[k]));
  }
  CHECK(t.rows.back().kernel_dim == 5);
  CHECK(std::abs(t.extrapolated - 12.0) < 1e-4);
}

TEST_CASE("zero operator has a full kernel") {
  const CurveGeometry g = geometry("FactorSphere", 3);
  const SectionBasis b = build_basis(g, 0, 1, 3);
  OperatorMatrix op = assemble(g, b, OperatorKind::Jacobi);
  op.matrix.setZero();
  const SpectrumReport r = eigensolve(op);
  CHECK(r.kernel_dim == b.size());
  CHECK(r.clusters.empty());
  CHECK(std::isnan(r.lambda1));
}

TEST_CASE("spectral errors") {
  const CurveGeometry g = geometry("Conic_CP2", 8);
  CHECK_THROWS_AS(build_basis(g, 0, 1, 0), JacobiError);
  try {
    build_basis(g, 0, 1, 1);
    FAIL("expected CutoffTooSmall");
  } catch (const JacobiError& e) {
    CHECK(e.code() == ErrorCode::CutoffTooSmall);
  }
  const SectionBasis wrong = build_basis(g, 1, 1, 4);
  try {
    assemble(g, wrong, OperatorKind::Jacobi);
    FAIL("expected WeightMismatch");
  } catch (const JacobiError& e) {
    CHECK(e.code() == ErrorCode::WeightMismatch);
  }
  const SectionBasis b = build_basis(g, 0, 1, 4);
  SpectralOptions strict;
  strict.gram_condition_limit = 1.0;
  CHECK_THROWS_AS(eigensolve(assemble(g, b, OperatorKind::Jacobi), strict), JacobiError);
  try {
    convergence_study(g, OperatorKind::WplusForm, {5, 6, 8});
    FAIL("expected UnstableKernel");
  } catch (const JacobiError& e) {
    CHECK(e.code() == ErrorCode::UnstableKernel);
  }
  CurveGeometry broken = g;
  broken.chart_winding = 3;
  try {
    build_basis(broken, 0, 1, 4);
    FAIL("expected IncompatibleSpin");
  } catch (const JacobiError& e) {
    CHECK(e.code() == ErrorCode::IncompatibleSpin);
  }
}
