#include <cmath>

#include "jacobi/errors.hpp"
#include "jacobi/geometry.hpp"

namespace jacobi {

namespace {

using Vec3 = Eigen::Vector3cd;

// Holomorphic curve z -> [f(z)] in CP2 with polynomial components of degree <= 2.
struct ProjectiveCurve {
  std::array<std::array<cplx, 3>, 3> coef{};  // coef[component][power]
  int degree = 1;

  Vec3 eval(cplx z, int derivative) const {
    Vec3 out;
    for (int c = 0; c < 3; ++c) {
      cplx v = 0.0;
      for (int p = derivative; p <= 2; ++p) {
        double falling = 1.0;
        for (int q = 0; q < derivative; ++q) falling *= p - q;
        v += coef[c][p] * falling * std::pow(z, p - derivative);
      }
      out[c] = v;
    }
    return out;
  }
};

ProjectiveCurve projective_curve(CurveName name, ChartSide side) {
  ProjectiveCurve curve;
  curve.coef[0][0] = 1.0;
  curve.coef[1][1] = 1.0;
  curve.degree = 1;
  if (name == CurveName::Conic_CP2) {
    curve.coef[2][2] = 1.0;
    curve.degree = 2;
  }
  if (side == ChartSide::South) {
    // w^d f(1/w): reverse the powers.
    ProjectiveCurve reversed;
    reversed.degree = curve.degree;
    for (int c = 0; c < 3; ++c) {
      for (int p = 0; p <= curve.degree; ++p) reversed.coef[c][curve.degree - p] = curve.coef[c][p];
    }
    return reversed;
  }
  return curve;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return Vec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

// d/dz log|G|^2 and d^2/dz dzbar log|G|^2 for a holomorphic vector G.
cplx log_norm_z(const Vec3& g, const Vec3& dg) { return g.dot(dg) / g.squaredNorm(); }

double log_norm_zzbar(const Vec3& g, const Vec3& dg) {
  const double n2 = g.squaredNorm();
  return (dg.squaredNorm() * n2 - std::norm(g.dot(dg))) / (n2 * n2);
}

// Index of the coordinate vector used as holomorphic normal frame in a chart.
int normal_frame_index(const ProjectiveCurve& curve) {
  const Vec3 f0 = curve.eval(0.0, 0);
  const Vec3 f1 = curve.eval(0.0, 1);
  const Vec3 w = cross(f0, f1);
  int best = 0;
  for (int j = 1; j < 3; ++j) {
    if (std::abs(w[j]) > std::abs(w[best])) best = j;
  }
  return best;
}

ChartSample sample_cp2(const CurveSpec& spec, ChartPoint point) {
  const ProjectiveCurve curve = projective_curve(spec.name, point.side);
  const double c0 = spec.ambient.parameters.holomorphic_curvature;
  const cplx z = point.z;
  const Vec3 f = curve.eval(z, 0);
  const Vec3 df = curve.eval(z, 1);
  const Vec3 ddf = curve.eval(z, 2);
  const Vec3 big_f = cross(f, df);
  const Vec3 dbig_f = cross(f, ddf);
  const int j = normal_frame_index(curve);
  const cplx det = big_f[j];
  const cplx ddet = dbig_f[j];
  if (std::abs(det) < 1e-300) throw JacobiError(ErrorCode::FrameDiscontinuity, "holomorphic normal frame degenerates");

  // Eigen's dot() conjugates its first argument: g.dot(dg) = sum conj(g_i) dg_i.
  const cplx lf = log_norm_z(f, df);
  const cplx lF = log_norm_z(big_f, dbig_f);
  const double llf = log_norm_zzbar(f, df);
  const double llF = log_norm_zzbar(big_f, dbig_f);
  const double scale = std::log(4.0 / c0);

  ChartSample s;
  s.u = 0.5 * scale + 0.5 * std::log(big_f.squaredNorm()) - std::log(f.squaredNorm());
  s.u_z = 0.5 * lF - lf;
  s.u_zzbar = 0.5 * llF - llf;
  s.phi = 0.5 * scale + std::log(std::abs(det)) - 0.5 * std::log(big_f.squaredNorm()) - 0.5 * std::log(f.squaredNorm());
  s.phi_z = 0.5 * ddet / det - 0.5 * lF - 0.5 * lf;
  s.phi_zzbar = -0.5 * llF - 0.5 * llf;
  return s;
}

// Round-sphere factor 4/(K (1+|z|^2)^2) and derivatives.
struct SphereFactor {
  double a, log_a;
  cplx a_z, log_a_z;
  double a_zzbar, log_a_zzbar;
};

SphereFactor sphere_factor(double curvature, cplx z) {
  const double r = std::norm(z);
  const double q = 1.0 + r;
  SphereFactor s;
  s.a = 4.0 / (curvature * q * q);
  s.log_a = std::log(s.a);
  s.a_z = -8.0 * std::conj(z) / (curvature * q * q * q);
  s.a_zzbar = -8.0 * (1.0 - 2.0 * r) / (curvature * q * q * q * q);
  s.log_a_z = -2.0 * std::conj(z) / q;
  s.log_a_zzbar = -2.0 / (q * q);
  return s;
}

ChartSample sample_product(const CurveSpec& spec, ChartPoint point) {
  const auto& p = spec.ambient.parameters;
  const cplx z = point.z;
  const SphereFactor f1 = sphere_factor(p.k1, z);
  const bool diagonal = spec.name == CurveName::Diagonal_Product;
  const SphereFactor f2 = sphere_factor(p.k2, diagonal ? z : spec.base_point);

  // Induced metric S = a1(z) + a2(g) |g'|^2 with g = z (diagonal) or constant.
  double big_s = f1.a;
  cplx s_z = f1.a_z;
  double s_zzbar = f1.a_zzbar;
  if (diagonal) {
    big_s += f2.a;
    s_z += f2.a_z;
    s_zzbar += f2.a_zzbar;
  }
  ChartSample s;
  s.u = 0.5 * std::log(big_s);
  s.u_z = s_z / (2.0 * big_s);
  s.u_zzbar = 0.5 * (s_zzbar / big_s - std::norm(s_z) / (big_s * big_s));
  // Normal frame d/dz2 with quotient norm a1 a2 / S.
  s.phi = 0.5 * (f1.log_a + f2.log_a - std::log(big_s));
  s.phi_z = 0.5 * (f1.log_a_z + (diagonal ? f2.log_a_z : cplx(0.0)) - s_z / big_s);
  s.phi_zzbar = 0.5 * (f1.log_a_zzbar + (diagonal ? f2.log_a_zzbar : 0.0) - 2.0 * s.u_zzbar);
  return s;
}

}  // namespace

ChartSample sample_chart(const CurveSpec& spec, ChartPoint point) {
  if (spec.chart == ChartKind::SphereStereographic && std::abs(point.z) > kSafeChartRadius) {
    throw JacobiError(ErrorCode::ChartOverflow, "|z| beyond the safe stereographic radius; use the other chart");
  }
  switch (spec.ambient.kind) {
    case AmbientKind::CP2_FubiniStudy: return sample_cp2(spec, point);
    case AmbientKind::ProductOfSpheres: return sample_product(spec, point);
    case AmbientKind::FlatTorus4: return ChartSample{};
  }
  return ChartSample{};
}

double pullback_metric(const CurveSpec& spec, ChartPoint point) { return sample_chart(spec, point).u; }

cplx AdaptedFrame::inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const {
  return b.adjoint() * metric * a;
}

AdaptedFrame adapted_frame(const CurveSpec& spec, ChartPoint point) {
  if (spec.chart == ChartKind::SphereStereographic && std::abs(point.z) > kSafeChartRadius) {
    throw JacobiError(ErrorCode::ChartOverflow, "|z| beyond the safe stereographic radius; use the other chart");
  }
  AdaptedFrame frame;
  const cplx z = point.z;
  switch (spec.ambient.kind) {
    case AmbientKind::CP2_FubiniStudy: {
      const ProjectiveCurve curve = projective_curve(spec.name, point.side);
      const double c0 = spec.ambient.parameters.holomorphic_curvature;
      const Vec3 f = curve.eval(z, 0);
      const Vec3 df = curve.eval(z, 1);
      const double fn2 = f.squaredNorm();
      // Fubini-Study metric on horizontal lifts at f.
      const Eigen::Matrix3cd proj = Eigen::Matrix3cd::Identity() - f * f.adjoint() / fn2;
      frame.metric = (4.0 / c0) / fn2 * proj;
      frame.ricci = 1.5 * c0 * frame.metric;
      const Vec3 q1 = f / std::sqrt(fn2);
      Vec3 t = df - q1 * q1.dot(df);
      const Vec3 q2 = t / t.norm();
      Vec3 n = Vec3::Unit(normal_frame_index(curve));
      n = n - q1 * q1.dot(n) - q2 * q2.dot(n);
      frame.e1 = t / std::sqrt(frame.inner(t, t).real());
      frame.e0 = n / std::sqrt(frame.inner(n, n).real());
      break;
    }
    case AmbientKind::ProductOfSpheres: {
      const auto& p = spec.ambient.parameters;
      const bool diagonal = spec.name == CurveName::Diagonal_Product;
      const SphereFactor f1 = sphere_factor(p.k1, z);
      const SphereFactor f2 = sphere_factor(p.k2, diagonal ? z : spec.base_point);
      frame.metric = Eigen::Matrix2cd::Zero();
      frame.metric(0, 0) = f1.a;
      frame.metric(1, 1) = f2.a;
      frame.ricci = Eigen::Matrix2cd::Zero();
      frame.ricci(0, 0) = p.k1 * f1.a;
      frame.ricci(1, 1) = p.k2 * f2.a;
      const Eigen::Vector2cd t(1.0, diagonal ? 1.0 : 0.0);
      Eigen::Vector2cd n(0.0, 1.0);
      n = n - t * (frame.inner(n, t) / frame.inner(t, t));
      frame.e1 = t / std::sqrt(frame.inner(t, t).real());
      frame.e0 = n / std::sqrt(frame.inner(n, n).real());
      break;
    }
    case AmbientKind::FlatTorus4: {
      frame.metric = Eigen::Matrix2cd::Identity();
      frame.ricci = Eigen::Matrix2cd::Zero();
      frame.e1 = Eigen::Vector2cd(1.0, 0.0);
      frame.e0 = Eigen::Vector2cd(0.0, 1.0);
      break;
    }
  }
  return frame;
}

double ricci_contraction(const AdaptedFrame& frame) {
  return 0.5 * (frame.e1.adjoint() * frame.ricci * frame.e1)(0, 0).real();
}

}  // namespace jacobi
