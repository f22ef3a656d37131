#include <algorithm>
#include <cmath>
#include <sstream>

#include "jacobi/errors.hpp"
#include "jacobi/geometry.hpp"

namespace jacobi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveCurvature: return "NonPositiveCurvature";
    case ErrorCode::DegenerateLattice: return "DegenerateLattice";
    case ErrorCode::UnknownCurve: return "UnknownCurve";
    case ErrorCode::ChartOverflow: return "ChartOverflow";
    case ErrorCode::FrameDiscontinuity: return "FrameDiscontinuity";
    case ErrorCode::NonIntegralChernNumber: return "NonIntegralChernNumber";
    case ErrorCode::WeightOverflow: return "WeightOverflow";
    case ErrorCode::NotEinstein: return "NotEinstein";
    case ErrorCode::IncompatibleSpin: return "IncompatibleSpin";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::WeightMismatch: return "WeightMismatch";
    case ErrorCode::GramIllConditioned: return "GramIllConditioned";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::UnstableKernel: return "UnstableKernel";
    case ErrorCode::UnsupportedGenus: return "UnsupportedGenus";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string format_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::string AmbientSpace::label() const {
  switch (kind) {
    case AmbientKind::CP2_FubiniStudy:
      return "CP2 c0=" + format_number(parameters.holomorphic_curvature);
    case AmbientKind::ProductOfSpheres:
      if (parameters.k1 == parameters.k2) return "S2xS2 K=" + format_number(parameters.k1);
      return "S2xS2 K1=" + format_number(parameters.k1) + ",K2=" + format_number(parameters.k2);
    case AmbientKind::FlatTorus4:
      return "T4";
  }
  return "?";
}

AmbientSpace build_ambient(AmbientKind kind, const AmbientParameters& parameters) {
  AmbientSpace ambient;
  ambient.kind = kind;
  ambient.parameters = parameters;
  switch (kind) {
    case AmbientKind::CP2_FubiniStudy: {
      const double c0 = parameters.holomorphic_curvature;
      if (!(c0 > 0.0)) throw JacobiError(ErrorCode::NonPositiveCurvature, "CP2 holomorphic sectional curvature must be positive");
      // Ric = (n + 1) c0 / 2 g with n = 2.
      ambient.einstein_constant = 1.5 * c0;
      ambient.ricci_infimum = 1.5 * c0;
      break;
    }
    case AmbientKind::ProductOfSpheres: {
      if (!(parameters.k1 > 0.0) || !(parameters.k2 > 0.0)) {
        throw JacobiError(ErrorCode::NonPositiveCurvature, "sphere factor curvatures must be positive");
      }
      if (parameters.k1 == parameters.k2) ambient.einstein_constant = parameters.k1;
      ambient.ricci_infimum = std::min(parameters.k1, parameters.k2);
      break;
    }
    case AmbientKind::FlatTorus4: {
      for (const auto& lattice : {parameters.curve_lattice, parameters.fiber_lattice}) {
        const double det = lattice[0].real() * lattice[1].imag() - lattice[0].imag() * lattice[1].real();
        if (std::abs(det) < 1e-12) throw JacobiError(ErrorCode::DegenerateLattice, "lattice basis is rank deficient");
      }
      ambient.einstein_constant = 0.0;
      ambient.ricci_infimum = 0.0;
      break;
    }
  }
  return ambient;
}

std::string_view to_string(CurveName name) {
  switch (name) {
    case CurveName::Line_CP2: return "Line_CP2";
    case CurveName::Conic_CP2: return "Conic_CP2";
    case CurveName::FactorSphere: return "FactorSphere";
    case CurveName::Diagonal_Product: return "Diagonal_Product";
    case CurveName::FlatSubtorus: return "FlatSubtorus";
  }
  return "?";
}

std::optional<CurveName> parse_curve_name(std::string_view text) {
  for (CurveName n : {CurveName::Line_CP2, CurveName::Conic_CP2, CurveName::FactorSphere, CurveName::Diagonal_Product,
                      CurveName::FlatSubtorus}) {
    if (to_string(n) == text) return n;
  }
  return std::nullopt;
}

std::string CurveSpec::label() const {
  std::string out(to_string(name));
  const AmbientParameters defaults;
  const AmbientParameters& p = ambient.parameters;
  if (ambient.kind == AmbientKind::CP2_FubiniStudy && p.holomorphic_curvature != defaults.holomorphic_curvature) {
    out += "[c0=" + format_number(p.holomorphic_curvature) + "]";
  } else if (ambient.kind == AmbientKind::ProductOfSpheres && (p.k1 != defaults.k1 || p.k2 != defaults.k2)) {
    out += "[K1=" + format_number(p.k1) + ",K2=" + format_number(p.k2) + "]";
  }
  return out;
}

namespace {

AmbientKind ambient_for(CurveName name) {
  switch (name) {
    case CurveName::Line_CP2:
    case CurveName::Conic_CP2: return AmbientKind::CP2_FubiniStudy;
    case CurveName::FactorSphere:
    case CurveName::Diagonal_Product: return AmbientKind::ProductOfSpheres;
    case CurveName::FlatSubtorus: return AmbientKind::FlatTorus4;
  }
  return AmbientKind::CP2_FubiniStudy;
}

}  // namespace

CurveSpec make_curve(CurveName name, const AmbientSpace& ambient) {
  if (ambient.kind != ambient_for(name)) {
    throw JacobiError(ErrorCode::InvalidArgument, std::string(to_string(name)) + " does not live in " + ambient.label());
  }
  CurveSpec spec;
  spec.name = name;
  spec.ambient = ambient;
  if (name == CurveName::FlatSubtorus) {
    spec.genus = 1;
    spec.chart = ChartKind::TorusFundamentalDomain;
  }
  return spec;
}

CurveSpec make_curve(CurveName name) { return make_curve(name, build_ambient(ambient_for(name))); }

CurveSpec curve_from_label(std::string_view label) {
  const auto bracket = label.find('[');
  const auto name = parse_curve_name(label.substr(0, bracket));
  if (!name) throw JacobiError(ErrorCode::UnknownCurve, "unknown curve '" + std::string(label) + "'");
  AmbientParameters params;
  if (bracket != std::string_view::npos) {
    if (label.back() != ']') throw JacobiError(ErrorCode::UnknownCurve, "malformed curve label '" + std::string(label) + "'");
    std::string body(label.substr(bracket + 1, label.size() - bracket - 2));
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw JacobiError(ErrorCode::UnknownCurve, "expected key=value in '" + item + "'");
      const std::string key = item.substr(0, eq);
      double value = 0.0;
      try {
        value = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw JacobiError(ErrorCode::UnknownCurve, "bad number in '" + item + "'");
      }
      if (key == "c0") params.holomorphic_curvature = value;
      else if (key == "K1") params.k1 = value;
      else if (key == "K2") params.k2 = value;
      else throw JacobiError(ErrorCode::UnknownCurve, "unknown curve parameter '" + key + "'");
    }
  }
  return make_curve(*name, build_ambient(ambient_for(*name), params));
}

std::vector<CurveSpec> catalog() {
  std::vector<CurveSpec> out;
  out.push_back(make_curve(CurveName::Line_CP2));
  out.push_back(make_curve(CurveName::Conic_CP2));
  out.push_back(make_curve(CurveName::FactorSphere));
  AmbientParameters skew;
  skew.k1 = 2.0;
  skew.k2 = 1.0;
  out.push_back(make_curve(CurveName::FactorSphere, build_ambient(AmbientKind::ProductOfSpheres, skew)));
  out.push_back(make_curve(CurveName::Diagonal_Product));
  out.push_back(make_curve(CurveName::FlatSubtorus));
  return out;
}

}  // namespace jacobi
