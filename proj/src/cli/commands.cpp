#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "jacobi/cli.hpp"
#include "jacobi/svg.hpp"

namespace jacobi::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string pretty(double x) {
  if (std::abs(x - std::round(x)) < 1e-9) return std::to_string(static_cast<long long>(std::llround(x)));
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::string ambient_display(const AmbientSpace& a) {
  const AmbientParameters& p = a.parameters;
  switch (a.kind) {
    case AmbientKind::CP2_FubiniStudy: return "CP2 c₀=" + pretty(p.holomorphic_curvature);
    case AmbientKind::ProductOfSpheres:
      if (p.k1 == p.k2) return "S²×S² K=" + pretty(p.k1);
      return "S²×S² K1=" + pretty(p.k1) + ",K2=" + pretty(p.k2);
    case AmbientKind::FlatTorus4: return "T⁴";
  }
  return "?";
}

std::string directory_name(const std::string& label) {
  std::string out;
  for (char ch : label) {
    if (ch == '[' || ch == ',') out += '_';
    else if (ch != ']') out += ch;
  }
  return out;
}

int thread_budget() {
  if (const char* env = std::getenv("JACOBI_SPECTRA_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw JacobiError(ErrorCode::InvalidArgument, "JACOBI_SPECTRA_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<CurveSpec> selected_curves(const RunConfig& c) {
  if (c.all) return catalog();
  if (c.curve.empty()) throw JacobiError(ErrorCode::InvalidArgument, "--curve NAME or --all is required");
  return {curve_from_label(c.curve)};
}

CurveSpec single_curve(const RunConfig& c) {
  if (c.all) throw JacobiError(ErrorCode::InvalidArgument, "this command takes a single --curve");
  return selected_curves(c).front();
}

std::vector<int> cutoff_ladder(const RunConfig& c, const CurveSpec& spec) {
  if (!c.cutoffs.empty()) return c.cutoffs;
  if (c.cutoff > 0) return {c.cutoff - 2, c.cutoff - 1, c.cutoff};
  return default_cutoffs(spec);
}

SpectralOptions spectral_options(const Tolerances& t) { return {t.kernel_threshold, t.cluster_gap}; }

nlohmann::json prediction_json(const CurveGeometry& geometry) {
  const CurveSpec& spec = geometry.spec;
  const auto mode = ledger_mode(spec.ambient, spec.genus);
  nlohmann::json j = {{"ricci_infimum", spec.ambient.ricci_infimum}, {"lambda1_lower_bound", 2.0 * spec.ambient.ricci_infimum}};
  if (mode) {
    const RiemannRochLedger ledger = build_ledger(geometry, *mode);
    j["ledger"] = to_json(ledger);
    if (*mode == LedgerMode::Theorem2) {
      j["lambda1"] = 2.0 * *spec.ambient.einstein_constant;
      j["multiplicity"] = ledger.predicted_first_eigenspace_dim;
      j["kernel_dim"] = ledger.h0_N;
    }
  }
  return j;
}

// ---------------------------------------------------------------------------

int cmd_list_curves() {
  for (const CurveSpec& spec : catalog()) {
    const CurveGeometry geometry = build_geometry(spec, {.resolution = default_resolution(spec, 2)});
    const auto mode = ledger_mode(spec.ambient, spec.genus);
    std::string constant, lambda;
    int kernel = h0_line_bundle(geometry.deg_normal, spec.genus, geometry.deg_normal == 0);
    if (mode == LedgerMode::Theorem2) {
      const RiemannRochLedger ledger = build_ledger(geometry, *mode);
      const double c = *spec.ambient.einstein_constant;
      constant = "\U0001D520=" + pretty(c);
      lambda = "Λ₁=" + pretty(2.0 * c) + " ×" + std::to_string(ledger.predicted_first_eigenspace_dim);
      kernel = ledger.h0_N;
    } else if (mode == LedgerMode::Remark2) {
      constant = "\U0001D520=0";
      lambda = "Λ₁=4π²";
    } else {
      constant = "\U0001D52F=" + pretty(spec.ambient.ricci_infimum);
      lambda = "Λ₁≥" + pretty(2.0 * spec.ambient.ricci_infimum);
    }
    std::cout << spec.label() << " | " << ambient_display(spec.ambient) << " | " << constant << " | g=" << spec.genus << " | "
              << lambda << " | ker " << kernel << '\n';
  }
  return kExitPass;
}

std::string ladder_svg(const SpectrumReport& r, const CurveSpec& spec) {
  svg::Plot plot;
  plot.title = r.curve + " Jacobi spectrum, cutoff " + std::to_string(r.cutoff);
  plot.x_label = "index";
  plot.y_label = "eigenvalue";
  const std::size_t shown = std::min<std::size_t>(r.eigenvalues.size(), 48);
  svg::Series s;
  s.line = false;
  for (std::size_t i = 0; i < shown; ++i) s.points.push_back({static_cast<double>(i), r.eigenvalues[i]});
  plot.series.push_back(std::move(s));
  const double top = r.eigenvalues.empty() ? 1.0 : std::max(1.0, r.eigenvalues[shown - 1]);
  plot.bands.push_back({-0.02 * top, 0.02 * top, "kernel, dim " + std::to_string(r.kernel_dim)});
  if (spec.ambient.einstein_constant && *spec.ambient.einstein_constant > 0.0) {
    plot.lines.push_back({2.0 * *spec.ambient.einstein_constant, "2c = " + pretty(2.0 * *spec.ambient.einstein_constant)});
  } else {
    plot.lines.push_back({2.0 * spec.ambient.ricci_infimum, "2r = " + pretty(2.0 * spec.ambient.ricci_infimum)});
  }
  return plot.render();
}

int cmd_spectrum(const RunConfig& c) {
  RunManifest manifest("spectrum", c);
  const std::vector<CurveSpec> curves = selected_curves(c);
  for (const CurveSpec& spec : curves) {
    const std::filesystem::path dir = c.all ? c.out / directory_name(spec.label()) : c.out;
    const int cutoff = c.cutoff > 0 ? c.cutoff : default_cutoffs(spec).back();
    const int resolution = c.resolution > 0 ? c.resolution : default_resolution(spec, cutoff);
    auto t0 = Clock::now();
    const CurveGeometry geometry = build_geometry(spec, {.resolution = resolution});
    manifest.time_phase("geometry", seconds_since(t0));
    t0 = Clock::now();
    const SectionBasis basis = build_basis(geometry, 0, 1, cutoff);
    const OperatorMatrix op = assemble(geometry, basis, OperatorKind::Jacobi);
    manifest.time_phase("assemble", seconds_since(t0));
    t0 = Clock::now();
    const SpectrumReport report = eigensolve(op, spectral_options(c.tol));
    manifest.time_phase("eigensolve", seconds_since(t0));

    nlohmann::json j = to_json(report);
    j["prediction"] = prediction_json(geometry);
    if (c.emit.count("json")) manifest.write_file(dir, "spectrum.json", j.dump(2) + "\n");
    if (c.emit.count("csv")) manifest.write_file(dir, "ladder.csv", to_csv(report));
    if (c.emit.count("svg")) manifest.write_file(dir, "ladder.svg", ladder_svg(report, spec));

    std::cout << report.curve << ": cutoff " << cutoff << ", kernel " << report.kernel_dim << ", lambda1 "
              << std::setprecision(12) << report.lambda1 << " x" << report.lambda1_multiplicity() << '\n';
  }
  manifest.save(c.out);
  return kExitPass;
}

int cmd_verify(const RunConfig& c) {
  RunManifest manifest("verify", c);
  const std::vector<CurveSpec> curves = selected_curves(c);
  std::vector<VerificationReport> reports(curves.size());
  std::vector<std::exception_ptr> errors(curves.size());
  std::vector<double> timings(curves.size(), 0.0);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < curves.size(); i = next++) {
      const auto t0 = Clock::now();
      try {
        VerifyOptions opts;
        opts.groups = c.checks;
        opts.cutoffs = cutoff_ladder(c, curves[i]);
        opts.resolution = c.resolution;
        opts.identities = {.samples = c.samples, .seed = c.seed};
        opts.tol = c.tol;
        reports[i] = verify_curve(curves[i], opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      timings[i] = seconds_since(t0);
    }
  };
  const int n_threads = std::min<int>(thread_budget(), static_cast<int>(curves.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  bool ok = true;
  nlohmann::json aggregate = {{"curves", nlohmann::json::array()}};
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const VerificationReport& r = reports[i];
    manifest.time_phase("verify:" + r.curve, timings[i]);
    ok = ok && r.overall();
    const nlohmann::json j = to_json(r);
    if (c.all) {
      manifest.write_file(c.out, directory_name(r.curve) + "/verify.json", j.dump(2) + "\n");
      aggregate["curves"].push_back({{"curve", r.curve}, {"overall", r.overall()}, {"path", directory_name(r.curve) + "/verify.json"}});
    } else {
      manifest.write_file(c.out, "verify.json", j.dump(2) + "\n");
    }
    for (const Check& ch : r.checks) {
      std::cout << (ch.skipped ? "SKIP" : ch.pass ? "PASS" : "FAIL") << "  " << r.curve << "  " << ch.name << '\n';
    }
  }
  if (c.all) {
    aggregate["overall"] = ok;
    manifest.write_file(c.out, "verify.json", aggregate.dump(2) + "\n");
  }
  manifest.save(c.out);
  std::cout << (ok ? "overall: PASS" : "overall: FAIL") << '\n';
  return ok ? kExitPass : kExitCheckFailed;
}

std::string convergence_svg(const ConvergenceTable& t) {
  svg::Plot plot;
  plot.title = t.curve + " lambda1 convergence";
  plot.x_label = "cutoff";
  plot.y_label = "|lambda1(c) - lambda1(max)|";
  plot.log_y = true;
  svg::Series s;
  const double last = t.rows.back().lambda1;
  for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
    const double d = std::abs(t.rows[i].lambda1 - last);
    if (d > 0.0 && std::isfinite(d)) s.points.push_back({static_cast<double>(t.rows[i].cutoff), d});
  }
  plot.series.push_back(std::move(s));
  if (t.error_bar > 0.0) plot.lines.push_back({t.error_bar, "error bar"});
  return plot.render();
}

int cmd_converge(const RunConfig& c) {
  RunManifest manifest("converge", c);
  const CurveSpec spec = single_curve(c);
  const std::vector<int> cutoffs = cutoff_ladder(c, spec);
  if (cutoffs.size() < 3) throw JacobiError(ErrorCode::InvalidArgument, "convergence needs at least three cutoffs");
  const int resolution = c.resolution > 0 ? c.resolution : default_resolution(spec, *std::max_element(cutoffs.begin(), cutoffs.end()));
  auto t0 = Clock::now();
  const CurveGeometry geometry = build_geometry(spec, {.resolution = resolution});
  manifest.time_phase("geometry", seconds_since(t0));
  t0 = Clock::now();
  const ConvergenceTable table = convergence_study(geometry, OperatorKind::Jacobi, cutoffs, spectral_options(c.tol));
  manifest.time_phase("convergence", seconds_since(t0));

  if (c.emit.count("csv")) manifest.write_file(c.out, "convergence.csv", to_csv(table));
  if (c.emit.count("json")) manifest.write_file(c.out, "convergence.json", to_json(table).dump(2) + "\n");
  manifest.write_file(c.out, "convergence.svg", convergence_svg(table));
  manifest.save(c.out);
  std::cout << table.curve << ": lambda1 -> " << std::setprecision(12) << table.extrapolated << " +- " << std::setprecision(3)
            << table.error_bar << '\n';
  return kExitPass;
}

int cmd_dump_geometry(const RunConfig& c) {
  RunManifest manifest("dump-geometry", c);
  const CurveSpec spec = single_curve(c);
  const int cutoff = c.cutoff > 0 ? c.cutoff : default_cutoffs(spec).back();
  const int resolution = c.resolution > 0 ? c.resolution : default_resolution(spec, cutoff);
  const auto t0 = Clock::now();
  const CurveGeometry geometry = build_geometry(spec, {.resolution = resolution});
  manifest.time_phase("geometry", seconds_since(t0));
  manifest.write_file(c.out, "geometry.json", geometry_to_json(geometry).dump(2) + "\n");
  manifest.save(c.out);
  return kExitPass;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Spectra of Jacobi operators on catalog surfaces", "jacobi-spectra"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string curve, cutoffs, checks, out, emit, config_path;
  int cutoff = 0, samples = 0, resolution = 0;
  std::uint64_t seed = 1;
  bool all = false;
  std::vector<std::string> tolerances;
  app.add_option("--curve", curve, "catalog curve, e.g. Line_CP2 or FactorSphere[K1=2,K2=1]");
  app.add_option("--cutoff", cutoff, "basis cutoff");
  app.add_option("--cutoffs", cutoffs, "comma separated cutoff ladder");
  app.add_option("--checks", checks, "thm1,thm2,claim1,claim2,identities,topology or all");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed for random sections");
  app.add_option("--samples", samples, "random sections per identity check");
  app.add_option("--resolution", resolution, "quadrature resolution");
  app.add_option("--emit", emit, "json,csv,svg");
  app.add_option("--tol", tolerances, "KEY=VAL tolerance override")->allow_extra_args(false);
  app.add_option("--config", config_path, "JSON config file");
  app.add_flag("--all", all, "every catalog curve");

  auto* list = app.add_subcommand("list-curves", "print the curve catalog");
  auto* spectrum = app.add_subcommand("spectrum", "Jacobi spectrum of a curve");
  auto* verify = app.add_subcommand("verify", "run checks");
  auto* converge = app.add_subcommand("converge", "cutoff convergence study");
  auto* dump = app.add_subcommand("dump-geometry", "write quadrature nodes and geometric fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config_file(config_path);
    if (app.count("--curve")) config.curve = curve;
    if (app.count("--cutoff")) config.cutoff = cutoff;
    if (app.count("--cutoffs")) config.cutoffs = parse_int_list(cutoffs);
    if (app.count("--checks")) config.checks = parse_checks(checks);
    if (app.count("--out")) config.out = out;
    if (app.count("--seed")) config.seed = seed;
    if (app.count("--samples")) config.samples = samples;
    if (app.count("--resolution")) config.resolution = resolution;
    if (app.count("--emit")) config.emit = parse_emit(emit);
    if (app.count("--all")) config.all = all;
    for (const auto& t : tolerances) apply_tolerance(config.tol, t);
    if (app.count("--cutoff") && config.cutoff < 1) throw JacobiError(ErrorCode::CutoffTooSmall, "--cutoff must be at least 1");
    if (config.samples < 1) throw JacobiError(ErrorCode::InvalidArgument, "--samples must be positive");

    if (list->parsed()) return cmd_list_curves();
    if (spectrum->parsed()) return cmd_spectrum(config);
    if (verify->parsed()) return cmd_verify(config);
    if (converge->parsed()) return cmd_converge(config);
    if (dump->parsed()) return cmd_dump_geometry(config);
  } catch (const JacobiError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitUsage;
}

}  // namespace jacobi::cli
