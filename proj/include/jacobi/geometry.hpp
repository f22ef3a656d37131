#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jacobi/grid.hpp"

namespace jacobi {

// ---------------------------------------------------------------------------
// Model ambient spaces

enum class AmbientKind { CP2_FubiniStudy, ProductOfSpheres, FlatTorus4 };

struct AmbientParameters {
  double holomorphic_curvature = 4.0;  // CP2: c0
  double k1 = 1.0;                     // sphere factors
  double k2 = 1.0;
  std::array<cplx, 2> curve_lattice{cplx(1.0, 0.0), cplx(0.0, 1.0)};
  std::array<cplx, 2> fiber_lattice{cplx(1.0, 0.0), cplx(0.0, 1.0)};
};

struct AmbientSpace {
  AmbientKind kind = AmbientKind::CP2_FubiniStudy;
  AmbientParameters parameters;
  std::optional<double> einstein_constant;
  double ricci_infimum = 0.0;

  std::string label() const;
};

AmbientSpace build_ambient(AmbientKind kind, const AmbientParameters& parameters = {});

// ---------------------------------------------------------------------------
// Curve catalog

enum class CurveName { Line_CP2, Conic_CP2, FactorSphere, Diagonal_Product, FlatSubtorus };

std::string_view to_string(CurveName name);
std::optional<CurveName> parse_curve_name(std::string_view text);

struct CurveSpec {
  CurveName name = CurveName::Line_CP2;
  AmbientSpace ambient;
  int genus = 0;
  ChartKind chart = ChartKind::SphereStereographic;
  cplx base_point{0.0, 0.0};  // second-factor point of FactorSphere

  /// Catalog name, with ambient parameters in brackets when they differ from
  /// the defaults, e.g. "FactorSphere[K1=2,K2=1]".
  std::string label() const;
};

CurveSpec make_curve(CurveName name, const AmbientSpace& ambient);
CurveSpec make_curve(CurveName name);

/// Parses "Name" or "Name[key=value,...]" with keys c0, K1, K2.
CurveSpec curve_from_label(std::string_view label);

/// Every catalog case, including the non-Einstein product FactorSphere[K1=2,K2=1].
std::vector<CurveSpec> catalog();

// ---------------------------------------------------------------------------
// Pointwise chart data

enum class ChartSide { North, South };

struct ChartPoint {
  cplx z;
  ChartSide side = ChartSide::North;
};

/// Beyond this radius the stereographic chart loses precision; use the other chart.
inline constexpr double kSafeChartRadius = 1e6;

/// Closed-form chart data: the induced metric exp(2u)|dz|^2 and the
/// log-norm phi of a holomorphic normal frame, with derivatives.
struct ChartSample {
  double u = 0.0;
  cplx u_z;
  double u_zzbar = 0.0;
  double phi = 0.0;
  cplx phi_z;
  double phi_zzbar = 0.0;
};

ChartSample sample_chart(const CurveSpec& spec, ChartPoint point);

/// Conformal factor u with exp(2u)|dz|^2 the pulled-back metric.
double pullback_metric(const CurveSpec& spec, ChartPoint point);

/// Unit (1,0) tangent and normal vectors in ambient holomorphic coordinates.
/// For CP2 the vectors are horizontal lifts in C^3 at the homogeneous point.
struct AdaptedFrame {
  Eigen::VectorXcd e1;
  Eigen::VectorXcd e0;
  Eigen::MatrixXcd metric;  // <a, b> = b^H metric a
  Eigen::MatrixXcd ricci;   // Hermitian Ricci form in the same coordinates

  cplx inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const;
};

AdaptedFrame adapted_frame(const CurveSpec& spec, ChartPoint point);

/// Ric(e1, conj e1) for the unit (1,0) tangent e1 = (X - iJX)/2.
double ricci_contraction(const AdaptedFrame& frame);

// ---------------------------------------------------------------------------
// Discrete curve geometry

enum class ConnectionMethod { Analytic, FiniteDifference };

struct GeometryOptions {
  /// Sphere: transform bandwidth. Torus: grid points per side (even).
  int resolution = 48;
  ConnectionMethod connection = ConnectionMethod::Analytic;
  double fd_step = 1e-4;
  /// Amplitude of an optional smooth rotation of the normal frame phase.
  double gauge_amplitude = 0.0;
};

struct CurveGeometry {
  CurveSpec spec;
  std::shared_ptr<const SpectralGrid> spectral_grid;

  Eigen::VectorXd u;        // induced metric exp(2u)|dz|^2
  Eigen::VectorXd sigma;    // u minus the reference factor
  Eigen::VectorXd density;  // exp(2 sigma): induced area per reference area
  Eigen::VectorXcd tau;     // dz-coefficient of theta_12
  Eigen::VectorXcd alpha;   // dz-coefficient of theta_34
  Eigen::VectorXd R1212;
  Eigen::VectorXd R1234;
  Eigen::VectorXd ric_ee;

  double area = 0.0;
  int deg_normal = 0;
  int euler_char = 0;
  double euler_residual = 0.0;
  double degree_residual = 0.0;
  int chart_winding = 0;
  double gauge_amplitude = 0.0;

  const QuadratureGrid& grid() const { return spectral_grid->grid(); }
  Eigen::Index size() const { return u.size(); }
  /// Integral over the curve against the induced area.
  double integrate(const Eigen::VectorXd& f) const;
  cplx integrate(const Eigen::VectorXcd& f) const;
  Eigen::VectorXd area_weights() const;
  /// max |R1212 + R1234 - 2 ric_ee| over nodes.
  double gauss_ricci_residual() const;
};

/// Chart coefficient alpha of the normal connection form at every node.
Eigen::VectorXcd normal_connection(const CurveSpec& spec, const QuadratureGrid& grid, ConnectionMethod method,
                                   double fd_step = 1e-4, double gauge_amplitude = 0.0);

struct CurvatureFields {
  Eigen::VectorXd R1212;
  Eigen::VectorXd R1234;
  Eigen::VectorXd ric_ee;
};

CurvatureFields curvatures(const CurveSpec& spec, const QuadratureGrid& grid);

struct TopologicalInvariants {
  int euler_char = 0;
  int deg_normal = 0;
  double area = 0.0;
  double euler_residual = 0.0;
  double degree_residual = 0.0;
};

inline constexpr double kChernTolerance = 1e-3;

/// Rounds the Chern integrals; throws NonIntegralChernNumber beyond kChernTolerance.
TopologicalInvariants topological_invariants(const CurveGeometry& geometry);

CurveGeometry build_geometry(const CurveSpec& spec, const GeometryOptions& options = {});

nlohmann::json geometry_to_json(const CurveGeometry& geometry);

}  // namespace jacobi
