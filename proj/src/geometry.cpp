#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

#include "jacobi/errors.hpp"
#include "jacobi/geometry.hpp"

namespace jacobi {

namespace {

constexpr cplx kI(0.0, 1.0);

// Smooth real phase chi used to rotate the normal frame, e0 -> exp(i chi) e0.
double gauge_phase(const CurveSpec& spec, cplx z, double amplitude) {
  if (amplitude == 0.0) return 0.0;
  if (spec.chart == ChartKind::SphereStereographic) return amplitude * z.real() / (1.0 + std::norm(z));
  const auto& lat = spec.ambient.parameters.curve_lattice;
  Eigen::Matrix2d frame;
  frame << lat[0].real(), lat[1].real(), lat[0].imag(), lat[1].imag();
  const Eigen::Vector2d xy = frame.inverse() * Eigen::Vector2d(z.real(), z.imag());
  return amplitude * std::sin(2.0 * std::numbers::pi * xy[0]);
}

cplx gauge_phase_z(const CurveSpec& spec, cplx z, double amplitude) {
  if (amplitude == 0.0) return 0.0;
  if (spec.chart == ChartKind::SphereStereographic) {
    const double q = 1.0 + std::norm(z);
    return amplitude * (1.0 - std::conj(z) * std::conj(z)) / (2.0 * q * q);
  }
  const auto& lat = spec.ambient.parameters.curve_lattice;
  Eigen::Matrix2d frame;
  frame << lat[0].real(), lat[1].real(), lat[0].imag(), lat[1].imag();
  const Eigen::Matrix2d inv = frame.inverse();
  const Eigen::Vector2d xy = inv * Eigen::Vector2d(z.real(), z.imag());
  const cplx dx_dz = 0.5 * cplx(inv(0, 0), -inv(0, 1));
  return amplitude * 2.0 * std::numbers::pi * std::cos(2.0 * std::numbers::pi * xy[0]) * dx_dz;
}

// <nabla_{d/dz} e0, e0> by centered differences of the unit normal frame.
cplx frame_derivative_pairing(const CurveSpec& spec, cplx z, double h, double amplitude) {
  auto frame_at = [&](cplx w) {
    AdaptedFrame f = adapted_frame(spec, {w, ChartSide::North});
    f.e0 *= std::polar(1.0, gauge_phase(spec, w, amplitude));
    return f;
  };
  const AdaptedFrame c = frame_at(z);
  const AdaptedFrame xp = frame_at(z + h);
  const AdaptedFrame xm = frame_at(z - h);
  const AdaptedFrame yp = frame_at(z + kI * h);
  const AdaptedFrame ym = frame_at(z - kI * h);
  for (const AdaptedFrame* n : {&xp, &xm, &yp, &ym}) {
    const cplx overlap = c.e0.dot(n->e0);
    if (std::abs(std::arg(overlap)) > 0.5) {
      throw JacobiError(ErrorCode::FrameDiscontinuity, "normal frame phase jumps between neighbouring samples");
    }
  }
  const Eigen::VectorXcd dv = ((xp.e0 - xm.e0) - kI * (yp.e0 - ym.e0)) / (4.0 * h);

  switch (spec.ambient.kind) {
    case AmbientKind::CP2_FubiniStudy: {
      // Hom(L, L^perp) picture: horizontal lift v of e0 over the lift f.
      const bool conic = spec.name == CurveName::Conic_CP2;
      const Eigen::Vector3cd f(1.0, z, conic ? z * z : cplx(0.0));
      const Eigen::Vector3cd df(0.0, 1.0, conic ? 2.0 * z : cplx(0.0));
      return c.e0.dot(dv) / c.e0.squaredNorm() - f.dot(df) / f.squaredNorm();
    }
    case AmbientKind::ProductOfSpheres: {
      const bool diagonal = spec.name == CurveName::Diagonal_Product;
      const double q = 1.0 + std::norm(z);
      const cplx log_a_z = -2.0 * std::conj(z) / q;
      Eigen::Vector2cd nabla = dv;
      nabla[0] += c.e0[0] * log_a_z;
      if (diagonal) nabla[1] += c.e0[1] * log_a_z;
      return c.inner(nabla, c.e0);
    }
    case AmbientKind::FlatTorus4: return c.inner(dv, c.e0);
  }
  return 0.0;
}

}  // namespace

double CurveGeometry::integrate(const Eigen::VectorXd& f) const { return area_weights().dot(f); }

cplx CurveGeometry::integrate(const Eigen::VectorXcd& f) const {
  return (area_weights().cast<cplx>().array() * f.array()).sum();
}

Eigen::VectorXd CurveGeometry::area_weights() const {
  const auto& w = grid().weights;
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())).cwiseProduct(density);
}

double CurveGeometry::gauss_ricci_residual() const {
  return (R1212 + R1234 - 2.0 * ric_ee).cwiseAbs().maxCoeff();
}

Eigen::VectorXcd normal_connection(const CurveSpec& spec, const QuadratureGrid& grid, ConnectionMethod method,
                                   double fd_step, double gauge_amplitude) {
  Eigen::VectorXcd alpha(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const cplx z = grid.nodes[k];
    if (method == ConnectionMethod::Analytic) {
      // theta_34 = -i <nabla e0, e0>; for e0 = xi/|xi| with xi holomorphic
      // this is the dz-part -i d(phi)/dz.
      alpha[static_cast<Eigen::Index>(k)] = -kI * sample_chart(spec, {z}).phi_z + gauge_phase_z(spec, z, gauge_amplitude);
    } else {
      alpha[static_cast<Eigen::Index>(k)] = -kI * frame_derivative_pairing(spec, z, fd_step, gauge_amplitude);
    }
  }
  return alpha;
}

CurvatureFields curvatures(const CurveSpec& spec, const QuadratureGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  CurvatureFields out{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  if (spec.ambient.kind == AmbientKind::FlatTorus4) return out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const ChartPoint p{grid.nodes[static_cast<std::size_t>(k)]};
    const ChartSample s = sample_chart(spec, p);
    const double inv_metric = std::exp(-2.0 * s.u);
    // d theta_12 = R1212/(2i) theta ^ thetabar with theta = e^u dz.
    out.R1212[k] = -4.0 * inv_metric * s.u_zzbar;
    out.R1234[k] = -4.0 * inv_metric * s.phi_zzbar;
    out.ric_ee[k] = ricci_contraction(adapted_frame(spec, p));
  }
  return out;
}

TopologicalInvariants topological_invariants(const CurveGeometry& geometry) {
  TopologicalInvariants t;
  const double two_pi = 2.0 * std::numbers::pi;
  t.area = geometry.area_weights().sum();
  const double chi = geometry.integrate(geometry.R1212) / two_pi;
  const double deg = geometry.integrate(geometry.R1234) / two_pi;
  t.euler_char = static_cast<int>(std::lround(chi));
  t.deg_normal = static_cast<int>(std::lround(deg));
  t.euler_residual = std::abs(chi - t.euler_char);
  t.degree_residual = std::abs(deg - t.deg_normal);
  if (t.euler_residual > kChernTolerance || t.degree_residual > kChernTolerance) {
    throw JacobiError(ErrorCode::NonIntegralChernNumber,
                      "Chern integrals " + std::to_string(chi) + ", " + std::to_string(deg) + " are not integral");
  }
  return t;
}

CurveGeometry build_geometry(const CurveSpec& spec, const GeometryOptions& options) {
  CurveGeometry g;
  g.spec = spec;
  g.gauge_amplitude = options.gauge_amplitude;
  if (spec.chart == ChartKind::SphereStereographic) {
    g.spectral_grid = std::make_shared<SphereGrid>(options.resolution);
  } else {
    const auto& lat = spec.ambient.parameters.curve_lattice;
    g.spectral_grid = std::make_shared<TorusGrid>(options.resolution, lat[0], lat[1]);
  }
  const QuadratureGrid& grid = g.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());

  g.u.resize(n);
  g.tau.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const ChartSample s = sample_chart(spec, {grid.nodes[static_cast<std::size_t>(k)]});
    g.u[k] = s.u;
    g.tau[k] = -kI * s.u_z;
  }
  g.sigma = g.u - g.spectral_grid->ref_log_factor();
  g.density = (2.0 * g.sigma.array()).exp().matrix();
  g.alpha = normal_connection(spec, grid, options.connection, options.fd_step, options.gauge_amplitude);
  CurvatureFields curv = curvatures(spec, grid);
  g.R1212 = std::move(curv.R1212);
  g.R1234 = std::move(curv.R1234);
  g.ric_ee = std::move(curv.ric_ee);

  const TopologicalInvariants t = topological_invariants(g);
  g.area = t.area;
  g.euler_char = t.euler_char;
  g.deg_normal = t.deg_normal;
  g.euler_residual = t.euler_residual;
  g.degree_residual = t.degree_residual;

  if (spec.chart == ChartKind::SphereStereographic) {
    // Winding of the north-chart normal gauge around z = infinity.
    constexpr int kSamples = 512;
    constexpr double kRadius = 1e3;
    double circulation = 0.0;
    for (int j = 0; j < kSamples; ++j) {
      const cplx z = std::polar(kRadius, 2.0 * std::numbers::pi * j / kSamples);
      const cplx a = -kI * sample_chart(spec, {z}).phi_z + gauge_phase_z(spec, z, options.gauge_amplitude);
      circulation += 2.0 * (a * kI * z).real() * (2.0 * std::numbers::pi / kSamples);
    }
    g.chart_winding = static_cast<int>(std::lround(-circulation / (2.0 * std::numbers::pi)));
  }
  return g;
}

nlohmann::json geometry_to_json(const CurveGeometry& g) {
  using nlohmann::json;
  const QuadratureGrid& grid = g.grid();
  auto real_array = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  auto re = [](const Eigen::VectorXcd& v) {
    std::vector<double> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i].real();
    return out;
  };
  auto im = [](const Eigen::VectorXcd& v) {
    std::vector<double> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i].imag();
    return out;
  };
  Eigen::VectorXcd nodes(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) nodes[static_cast<Eigen::Index>(i)] = grid.nodes[i];

  json residuals = {
      {"gauss_ricci_max", g.gauss_ricci_residual()},
      {"euler_residual", g.euler_residual},
      {"degree_residual", g.degree_residual},
  };
  if (g.spec.ambient.einstein_constant) {
    residuals["ric_einstein_max"] = (g.ric_ee.array() - 0.5 * *g.spec.ambient.einstein_constant).abs().maxCoeff();
  }
  return json{
      {"curve", g.spec.label()},
      {"ambient", g.spec.ambient.label()},
      {"chart", grid.chart == ChartKind::SphereStereographic ? "SphereStereographic" : "TorusFundamentalDomain"},
      {"resolution", {grid.resolution[0], grid.resolution[1]}},
      {"genus", g.spec.genus},
      {"area", g.area},
      {"euler_char", g.euler_char},
      {"deg_normal", g.deg_normal},
      {"chart_winding", g.chart_winding},
      {"nodes_re", re(nodes)},
      {"nodes_im", im(nodes)},
      {"weights", grid.weights},
      {"fields",
       {{"u", real_array(g.u)},
        {"density", real_array(g.density)},
        {"tau_re", re(g.tau)},
        {"tau_im", im(g.tau)},
        {"alpha_re", re(g.alpha)},
        {"alpha_im", im(g.alpha)},
        {"R1212", real_array(g.R1212)},
        {"R1234", real_array(g.R1234)},
        {"ric_ee", real_array(g.ric_ee)}}},
      {"residuals", residuals},
  };
}

}  // namespace jacobi
