#pragma once

#include <Eigen/Dense>
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "jacobi/geometry.hpp"

namespace jacobi {

enum class Backend { TorusFourier, SphereHarmonicGalerkin };
std::string_view to_string(Backend backend);

/// Galerkin basis for sections of weight (p, q). On the sphere the elements
/// are exp(Phi) times spin-k harmonics of the round reference, where Phi
/// solves d1bar-compatibility with the actual connection; on the torus they
/// are exp(Phi) times Fourier modes.
struct SectionBasis {
  Backend backend = Backend::SphereHarmonicGalerkin;
  const CurveGeometry* geometry = nullptr;
  int cutoff = 0;
  int weight_p = 0;
  int weight_q = 1;
  int two_spin = 0;
  Eigen::MatrixXcd values;     // nodes x size
  Eigen::MatrixXcd gram;       // integral conj(b_i) b_j dA
  Eigen::VectorXcd potential;  // Phi at the nodes
  std::vector<int> two_degree; // sphere: doubled l; torus: max(|m|, |n|)
  double gram_condition = 1.0;

  Eigen::Index size() const { return values.cols(); }
};

/// cutoff bounds the harmonic degree (sphere, l <= cutoff, +1/2 for half-integer
/// spin) or the Fourier index (torus, |m|, |n| <= cutoff).
SectionBasis build_basis(const CurveGeometry& geometry, int p, int q, int cutoff);

enum class OperatorKind { Jacobi, AreaForm, WplusForm, Dbar };
std::string_view to_string(OperatorKind kind);

struct OperatorMatrix {
  OperatorKind kind = OperatorKind::Jacobi;
  Eigen::MatrixXcd matrix;
  const SectionBasis* basis = nullptr;
  /// Dbar only: the weight (1, 1) basis the rows refer to.
  std::shared_ptr<const SectionBasis> target;
  /// |A - A^H| / |A| before symmetrization (square kinds).
  double hermiticity_residual = 0.0;
};

OperatorMatrix assemble(const CurveGeometry& geometry, const SectionBasis& basis, OperatorKind kind);

struct SpectralOptions {
  double kernel_threshold = 1e-6;     // relative to the largest eigenvalue magnitude
  double cluster_gap = 1e-4;          // relative gap between consecutive eigenvalues
  double gram_condition_limit = 1e12;
};

struct EigenCluster {
  double value = 0.0;
  int multiplicity = 0;
  double spread = 0.0;
};

struct SpectrumReport {
  std::string curve;
  Backend backend = Backend::SphereHarmonicGalerkin;
  OperatorKind kind = OperatorKind::Jacobi;
  int cutoff = 0;
  int resolution = 0;
  std::vector<double> eigenvalues;   // ascending
  std::vector<EigenCluster> clusters;  // above the kernel threshold
  int kernel_dim = 0;
  double kernel_threshold = 0.0;
  double lambda1 = 0.0;  // NaN when every eigenvalue is in the kernel
  std::vector<double> residuals;     // per-cluster spread
  double max_imaginary = 0.0;
  double hermiticity_residual = 0.0;
  double gram_condition = 1.0;
  Eigen::MatrixXcd eigenvectors;     // basis coordinates, columns match eigenvalues

  int lambda1_multiplicity() const { return clusters.empty() ? 0 : clusters.front().multiplicity; }
};

SpectrumReport eigensolve(const OperatorMatrix& op, const SpectralOptions& options = {});

nlohmann::json to_json(const SpectrumReport& report);
std::string to_csv(const SpectrumReport& report);

struct RankReport {
  int rows = 0;
  int cols = 0;
  int rank = 0;
  int kernel = 0;
  int cokernel = 0;
  std::vector<double> singular_values;
};

/// Numerical rank of a Dbar matrix in Gram-orthonormal coordinates.
RankReport dbar_rank(const OperatorMatrix& dbar, double relative_threshold = 1e-8);

struct ConvergenceRow {
  int cutoff = 0;
  double lambda1 = 0.0;
  int kernel_dim = 0;
  int multiplicity = 0;
  double observed_order = 0.0;  // NaN until two differences exist or when exact
};

struct ConvergenceTable {
  std::string curve;
  OperatorKind kind = OperatorKind::Jacobi;
  std::vector<ConvergenceRow> rows;
  double extrapolated = 0.0;
  double error_bar = 0.0;
  std::vector<SpectrumReport> reports;
};

/// Grid resolution used when none is given: enough quadrature headroom over the basis degree.
int default_resolution(const CurveSpec& spec, int max_cutoff);

/// Eigensolves at each cutoff on one geometry; Aitken extrapolation of lambda1
/// over the last three cutoffs. Throws UnstableKernel if the kernel dimension
/// differs at the two highest cutoffs.
ConvergenceTable convergence_study(const CurveGeometry& geometry, OperatorKind kind, const std::vector<int>& cutoffs,
                                   const SpectralOptions& options = {});

nlohmann::json to_json(const ConvergenceTable& table);
std::string to_csv(const ConvergenceTable& table);

}  // namespace jacobi
