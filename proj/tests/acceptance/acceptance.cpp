// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "jacobi/cli.hpp"
#include "jacobi/spectral.hpp"
#include "jacobi/theorems.hpp"

using namespace jacobi;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const Check* find_check(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void require_check(Outcome& o, const VerificationReport& r, const std::string& name) {
  const Check* c = find_check(r, name);
  o.require(c != nullptr, r.curve + " has no " + name);
  if (c) o.require(c->pass && !c->skipped, r.curve + " " + name);
}

// Full verification of every catalog curve, shared by criteria 6 to 10.
std::map<std::string, VerificationReport>& sweep() {
  static std::map<std::string, VerificationReport> reports = [] {
    std::map<std::string, VerificationReport> out;
    for (const CurveSpec& spec : catalog()) {
      VerifyOptions opts;
      opts.identities.samples = 20;
      opts.identities.seed = 1;
      out[spec.label()] = verify_curve(spec, opts);
    }
    return out;
  }();
  return reports;
}

struct CriterionResult {
  ConvergenceTable table;
  double seconds = 0.0;
};

CriterionResult converge(const std::string& label, const std::vector<int>& cutoffs) {
  const auto t0 = Clock::now();
  const CurveSpec spec = curve_from_label(label);
  const CurveGeometry geometry = build_geometry(spec, {.resolution = default_resolution(spec, cutoffs.back())});
  CriterionResult r{convergence_study(geometry, OperatorKind::Jacobi, cutoffs), 0.0};
  r.seconds = elapsed(t0);
  return r;
}

// ---------------------------------------------------------------------------

void criterion1(Outcome& o) {
  const auto t0 = Clock::now();
  const CurveSpec spec = make_curve(CurveName::FactorSphere);
  const int cutoff = 5;
  const CurveGeometry geometry = build_geometry(spec, {.resolution = default_resolution(spec, cutoff)});
  const SectionBasis basis = build_basis(geometry, 0, 1, cutoff);
  const SpectrumReport r = eigensolve(assemble(geometry, basis, OperatorKind::Jacobi));
  const double expected[3][2] = {{0.0, 1}, {2.0, 3}, {6.0, 5}};
  std::size_t k = 0;
  double worst = 0.0;
  for (const auto& level : expected) {
    for (int m = 0; m < static_cast<int>(level[1]); ++m, ++k) {
      o.require(k < r.eigenvalues.size(), "too few eigenvalues");
      if (k < r.eigenvalues.size()) worst = std::max(worst, std::abs(r.eigenvalues[k] - level[0]));
    }
  }
  o.require(worst <= 1e-8, "eigenvalue error");
  o.require(k < r.eigenvalues.size() && r.eigenvalues[k] > 6.0 + 1e-8, "extra eigenvalues at or below 6");
  o.require(r.kernel_dim == 1, "kernel dimension");
  VerifyOptions opts;
  opts.groups = {CheckGroup::Thm2};
  const VerificationReport v = verify_curve(spec, opts);
  for (const char* name : {"thm2.lambda1", "thm2.multiplicity", "thm2.kernel"}) require_check(o, v, name);
  const double seconds = elapsed(t0);
  o.require(seconds < 5.0, "runtime");
  o.detail << "max |lambda - {0,2,6}| = " << worst << ", " << seconds << " s";
}

void cp2_or_product(Outcome& o, const std::string& label, const std::vector<int>& cutoffs, int kernel, double lambda,
                    int multiplicity, double rel_tol, double time_limit) {
  const CriterionResult r = converge(label, cutoffs);
  const SpectrumReport& top = r.table.reports.back();
  const double rel = std::abs(r.table.extrapolated - lambda) / lambda;
  o.require(top.kernel_dim == kernel, "kernel dimension " + std::to_string(top.kernel_dim));
  o.require(rel <= rel_tol, "lambda1");
  o.require(top.lambda1_multiplicity() == multiplicity, "multiplicity " + std::to_string(top.lambda1_multiplicity()));
  if (time_limit > 0.0) o.require(r.seconds < time_limit, "runtime");
  o.detail << "kernel " << top.kernel_dim << ", lambda1 " << std::setprecision(12) << r.table.extrapolated << " x"
           << top.lambda1_multiplicity() << ", rel err " << std::setprecision(3) << rel << ", " << r.seconds << " s";
}

void criterion5(Outcome& o) {
  const CurveSpec spec = make_curve(CurveName::FlatSubtorus);
  const int cutoff = 6;
  const CurveGeometry geometry = build_geometry(spec, {.resolution = default_resolution(spec, cutoff)});
  const SectionBasis basis = build_basis(geometry, 0, 1, cutoff);
  const SpectrumReport r = eigensolve(assemble(geometry, basis, OperatorKind::Jacobi));
  std::vector<double> exact;
  for (int m = -cutoff; m <= cutoff; ++m) {
    for (int n = -cutoff; n <= cutoff; ++n) exact.push_back(4.0 * std::numbers::pi * std::numbers::pi * (m * m + n * n));
  }
  std::sort(exact.begin(), exact.end());
  o.require(exact.size() == r.eigenvalues.size(), "basis size");
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(exact.size(), r.eigenvalues.size()); ++i) {
    worst = std::max(worst, std::abs(r.eigenvalues[i] - exact[i]) / std::max(1.0, exact[i]));
  }
  o.require(worst <= 1e-10, "eigenvalues");
  // Multiplicities from the exact lattice count.
  std::map<long, int> counts;
  for (double e : exact) {
    if (e > 0.0) ++counts[std::lround(e / (4.0 * std::numbers::pi * std::numbers::pi))];
  }
  std::size_t idx = 0;
  for (const auto& [norm, mult] : counts) {
    if (idx >= r.clusters.size()) break;
    o.require(r.clusters[idx].multiplicity == mult, "multiplicity at m^2+n^2=" + std::to_string(norm));
    ++idx;
  }
  o.require(idx == counts.size() && r.clusters.size() == counts.size(), "cluster count");
  o.require(r.kernel_dim == 1, "kernel");

  VerifyOptions opts;
  opts.groups = {CheckGroup::Claim1};
  const VerificationReport v = verify_curve(spec, opts);
  require_check(o, v, "remark2.wplus_null_dim");
  require_check(o, v, "remark2.excess");
  const Check* c = find_check(v, "remark2.wplus_null_dim");
  o.require(c && c->measured == 1, "dim null(W+) = 1");
  o.detail << "max rel err " << worst << ", " << r.clusters.size() << " clusters, dim null(W+) = dim null(A) = 1";
}

void criterion6(Outcome& o) {
  int curves = 0;
  for (const auto& [label, r] : sweep()) {
    require_check(o, r, "thm1.lambda1_bound");
    ++curves;
  }
  const CurveSpec spec = curve_from_label("FactorSphere[K1=2,K2=1]");
  const CriterionResult r = converge(spec.label(), default_cutoffs(spec));
  const double margin = r.table.extrapolated - 2.0 * spec.ambient.ricci_infimum;
  o.require(std::abs(margin - 2.0) <= 1e-6, "non-Einstein margin");
  o.detail << curves << " curves, non-Einstein margin " << std::setprecision(12) << margin;
}

void criterion7(Outcome& o) {
  for (const auto& [label, r] : sweep()) {
    for (const char* name : {"identities.integration_by_parts", "identities.ricci", "identities.ricci_decay", "identities.wplus_rhs1"}) {
      require_check(o, r, name);
    }
    const CurveSpec spec = curve_from_label(label);
    if (spec.ambient.einstein_constant) require_check(o, r, "identities.wplus_rhs2");
  }
  o.detail << "20 seeded sections per curve";
}

void criterion8(Outcome& o) {
  double worst_gr = 0.0, worst_chern = 0.0;
  for (const CurveSpec& spec : catalog()) {
    const CurveGeometry g = build_geometry(spec, {.resolution = default_resolution(spec, default_cutoffs(spec).back())});
    worst_gr = std::max(worst_gr, g.gauss_ricci_residual());
    worst_chern = std::max({worst_chern, g.euler_residual, g.degree_residual});
    const VerificationReport& r = sweep().at(spec.label());
    for (const char* name : {"topology.gauss_ricci", "topology.euler_char", "topology.deg_normal"}) require_check(o, r, name);
  }
  o.require(worst_gr <= 1e-6, "Gauss-Ricci");
  o.require(worst_chern <= 1e-3, "Chern integrals");
  o.detail << "Gauss-Ricci " << worst_gr << ", Chern " << worst_chern;
}

void criterion9(Outcome& o) {
  int positive = 0;
  for (const auto& [label, r] : sweep()) {
    const CurveSpec spec = curve_from_label(label);
    const auto mode = ledger_mode(spec.ambient, spec.genus);
    if (mode == LedgerMode::Theorem2) {
      require_check(o, r, "claim1.excess");
      require_check(o, r, "claim2.cokernel");
      const Check* c = find_check(r, "claim2.cokernel");
      o.require(c && c->measured == 0, label + " cokernel 0");
      ++positive;
    } else if (mode == LedgerMode::Remark2) {
      require_check(o, r, "claim2.cokernel");
      const Check* c = find_check(r, "claim2.cokernel");
      o.require(c && c->measured == 1, label + " cokernel 1");
    }
  }
  o.detail << positive << " curves with c > 0, torus cokernel 1";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jacobi-spectra");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream sink;
  auto* old = std::cout.rdbuf(sink.rdbuf());
  const int code = cli::run(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old);
  return code;
}

void criterion10(Outcome& o) {
  for (const auto& [label, r] : sweep()) require_check(o, r, "thm1.ritz_monotonicity");
  const fs::path root = fs::temp_directory_path() / ("jacobi_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  int identical = 0;
  for (const char* run : {"a", "b"}) {
    const std::string out = (root / run).string();
    o.require(run_cli({"spectrum", "--curve", "Conic_CP2", "--cutoff", "8", "--out", out + "/spectrum"}) == 0, "spectrum run");
    o.require(run_cli({"verify", "--curve", "Line_CP2", "--seed", "11", "--checks", "identities,claim2", "--out", out + "/verify"}) == 0,
              "verify run");
  }
  for (const char* file : {"spectrum/spectrum.json", "verify/verify.json"}) {
    const std::string a = slurp(root / "a" / file), b = slurp(root / "b" / file);
    o.require(!a.empty() && a == b, std::string("byte-identical ") + file);
    identical += !a.empty() && a == b;
  }
  fs::remove_all(root);
  o.detail << "Ritz monotone on all curves, " << identical << "/2 JSON outputs byte-identical";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"FactorSphere spectrum", criterion1},
      {"Line_CP2", [](Outcome& o) { cp2_or_product(o, "Line_CP2", {6, 8, 10}, 2, 12.0, 4, 1e-4, 60.0); }},
      {"Conic_CP2", [](Outcome& o) { cp2_or_product(o, "Conic_CP2", {8, 10, 12}, 5, 12.0, 7, 1e-3, 120.0); }},
      {"Diagonal_Product", [](Outcome& o) { cp2_or_product(o, "Diagonal_Product", {6, 8, 10}, 3, 2.0, 5, 1e-4, 0.0); }},
      {"FlatSubtorus spectrum and W+ null space", criterion5},
      {"lower bound sweep", criterion6},
      {"identity suite", criterion7},
      {"topology", criterion8},
      {"null space excess and Dbar cokernel", criterion9},
      {"Ritz monotonicity and determinism", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << "  " << criteria[i].first << ": " << o.detail.str()
              << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
