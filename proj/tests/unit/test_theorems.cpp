#include "doctest.h"
#include "jacobi/errors.hpp"
#include "jacobi/theorems.hpp"

using namespace jacobi;

TEST_CASE("h0 of line bundles") {
  CHECK(h0_line_bundle(1, 0, false) == 2);
  CHECK(h0_line_bundle(-5, 0, false) == 0);
  CHECK(h0_line_bundle(0, 1, true) == 1);
  CHECK(h0_line_bundle(0, 1, false) == 0);
  CHECK(h0_line_bundle(3, 1, false) == 3);
  CHECK_THROWS_AS(h0_line_bundle(2, 2, false), JacobiError);
}

TEST_CASE("Riemann-Roch ledger for the positive Einstein curves") {
  struct Expect {
    const char* label;
    int predicted, h0_n, h0_nkbar;
  };
  for (const Expect e : {Expect{"Line_CP2", 4, 2, 4}, Expect{"Conic_CP2", 7, 5, 7}, Expect{"Diagonal_Product", 5, 3, 5},
                         Expect{"FactorSphere", 3, 1, 3}}) {
    CAPTURE(e.label);
    const RiemannRochLedger l = build_ledger(build_geometry(curve_from_label(e.label), {.resolution = 16}));
    CHECK(l.predicted_first_eigenspace_dim == e.predicted);
    CHECK(l.h0_N == e.h0_n);
    CHECK(l.h0_NKbar == e.h0_nkbar);
    CHECK(l.deg_NKbar == l.deg_NKbar_from_area);
    CHECK(l.h0_NdualK == 0);
  }
}

TEST_CASE("ledger hypotheses") {
  const CurveGeometry product = build_geometry(curve_from_label("FactorSphere[K1=2,K2=1]"), {.resolution = 8});
  CHECK_THROWS_AS(build_ledger(product), JacobiError);
  const CurveGeometry torus = build_geometry(curve_from_label("FlatSubtorus"), {.resolution = 8});
  CHECK_THROWS_AS(build_ledger(torus, LedgerMode::Theorem2), JacobiError);
  const RiemannRochLedger r2 = build_ledger(torus, LedgerMode::Remark2);
  CHECK(r2.h0_N == 1);
  CHECK(r2.h0_NdualK == 1);
  CHECK(r2.predicted_wplus_excess == 0);
}

TEST_CASE("lower bound check on a synthetic report") {
  SpectrumReport r;
  r.lambda1 = 3.9;
  const AmbientSpace product = build_ambient(AmbientKind::ProductOfSpheres, {.k1 = 2.0, .k2 = 1.0});
  CHECK(verify_theorem1(r, product, 1e-6).pass);
  r.lambda1 = 1.5;
  CHECK_FALSE(verify_theorem1(r, product, 1e-6).pass);
}

TEST_CASE("verification of the factor sphere") {
  VerifyOptions opts;
  opts.identities.samples = 3;
  const VerificationReport r = verify_curve(curve_from_label("FactorSphere"), opts);
  CHECK(r.overall());
  const auto j = to_json(r);
  CHECK(j.at("overall") == true);
  for (const auto& c : j.at("checks")) {
    CHECK(c.contains("check"));
    CHECK(c.contains("predicted"));
    CHECK(c.contains("measured"));
    CHECK(c.contains("tol"));
    CHECK(c.contains("pass"));
  }
}

TEST_CASE("check groups parse") {
  CHECK(parse_check_group("claim2") == CheckGroup::Claim2);
  CHECK_FALSE(parse_check_group("bogus").has_value());
}
