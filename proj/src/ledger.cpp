#include <cmath>
#include <numbers>

#include "jacobi/errors.hpp"
#include "jacobi/theorems.hpp"

namespace jacobi {

int h0_line_bundle(int degree, int genus, bool is_trivial) {
  if (genus < 0) throw JacobiError(ErrorCode::InvalidArgument, "negative genus");
  if (genus >= 2) {
    throw JacobiError(ErrorCode::UnsupportedGenus, "h0 depends on more than the degree for genus " + std::to_string(genus));
  }
  if (genus == 0) return std::max(degree + 1, 0);
  if (degree > 0) return degree;
  return degree == 0 && is_trivial ? 1 : 0;
}

RiemannRochLedger build_ledger(const CurveGeometry& g, LedgerMode mode) {
  if (g.spec.genus >= 2) throw JacobiError(ErrorCode::HypothesisViolation, "genus >= 2 is outside the dimension formula");
  const auto& c = g.spec.ambient.einstein_constant;
  if (mode == LedgerMode::Theorem2 && (!c || *c <= 0.0)) {
    throw JacobiError(ErrorCode::HypothesisViolation, g.spec.label() + " is not Einstein with positive constant");
  }
  if (mode == LedgerMode::Remark2 && (!c || *c != 0.0)) {
    throw JacobiError(ErrorCode::HypothesisViolation, g.spec.label() + " is not Ricci-flat Einstein");
  }
  RiemannRochLedger l;
  l.mode = mode;
  l.genus = g.spec.genus;
  l.area = g.area;
  l.einstein_constant = *c;
  l.deg_normal = g.deg_normal;
  l.deg_K = 2 * l.genus - 2;
  l.deg_N_dual_K2 = -l.deg_normal + 2 * l.deg_K;
  l.deg_NKbar = l.deg_normal - l.deg_K;
  l.deg_NKbar_from_area = static_cast<int>(std::lround(l.einstein_constant * l.area / (2.0 * std::numbers::pi)));
  // On the torus K is trivial, so every twist of a flat trivial N is trivial.
  const bool flat_trivial = l.genus == 1 && l.deg_normal == 0 && g.R1234.cwiseAbs().maxCoeff() < kChernTolerance;
  l.h0_N = h0_line_bundle(l.deg_normal, l.genus, flat_trivial);
  l.h0_NKbar = h0_line_bundle(l.deg_NKbar, l.genus, flat_trivial);
  l.h0_NdualK2 = h0_line_bundle(l.deg_N_dual_K2, l.genus, flat_trivial);
  l.h0_NdualK = h0_line_bundle(-l.deg_normal + l.deg_K, l.genus, flat_trivial);
  if (mode == LedgerMode::Theorem2) {
    l.predicted_first_eigenspace_dim = l.deg_NKbar_from_area + 1 - l.genus + l.h0_NdualK2;
    l.predicted_wplus_excess = l.h0_NKbar;
  } else {
    l.predicted_first_eigenspace_dim = 0;
    l.predicted_wplus_excess = 0;
  }
  return l;
}

nlohmann::json to_json(const RiemannRochLedger& l) {
  return {{"mode", l.mode == LedgerMode::Theorem2 ? "Theorem2" : "Remark2"},
          {"genus", l.genus},
          {"area", l.area},
          {"einstein_constant", l.einstein_constant},
          {"deg_normal", l.deg_normal},
          {"deg_K", l.deg_K},
          {"deg_N_dual_K2", l.deg_N_dual_K2},
          {"deg_NKbar", l.deg_NKbar},
          {"deg_NKbar_from_area", l.deg_NKbar_from_area},
          {"h0_N", l.h0_N},
          {"h0_NKbar", l.h0_NKbar},
          {"h0_NdualK2", l.h0_NdualK2},
          {"h0_NdualK", l.h0_NdualK},
          {"predicted_first_eigenspace_dim", l.predicted_first_eigenspace_dim},
          {"predicted_wplus_excess", l.predicted_wplus_excess}};
}

}  // namespace jacobi
