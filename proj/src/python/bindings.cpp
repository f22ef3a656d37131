#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jacobi/cli.hpp"
#include "jacobi/spectral.hpp"
#include "jacobi/theorems.hpp"

namespace py = pybind11;
using namespace jacobi;

namespace {

// Results cross the boundary as JSON text; the Python layer decodes them.
std::string dump(const nlohmann::json& j) { return j.dump(); }

CurveGeometry geometry_for(const CurveSpec& spec, int cutoff, int resolution) {
  return build_geometry(spec, {.resolution = resolution > 0 ? resolution : default_resolution(spec, cutoff)});
}

std::string spectrum_json(const std::string& curve, int cutoff, int resolution, const std::string& op) {
  const CurveSpec spec = curve_from_label(curve);
  if (cutoff <= 0) cutoff = default_cutoffs(spec).back();
  OperatorKind kind = OperatorKind::Jacobi;
  if (op == "area") kind = OperatorKind::AreaForm;
  else if (op == "wplus") kind = OperatorKind::WplusForm;
  else if (op != "jacobi") throw JacobiError(ErrorCode::InvalidArgument, "operator must be jacobi, area or wplus");
  const CurveGeometry geometry = geometry_for(spec, cutoff, resolution);
  const SectionBasis basis = build_basis(geometry, 0, 1, cutoff);
  return dump(to_json(eigensolve(assemble(geometry, basis, kind))));
}

std::string converge_json(const std::string& curve, std::vector<int> cutoffs, int resolution) {
  const CurveSpec spec = curve_from_label(curve);
  if (cutoffs.empty()) cutoffs = default_cutoffs(spec);
  const CurveGeometry geometry = geometry_for(spec, *std::max_element(cutoffs.begin(), cutoffs.end()), resolution);
  return dump(to_json(convergence_study(geometry, OperatorKind::Jacobi, cutoffs)));
}

std::string verify_json(const std::string& curve, const std::string& checks, std::vector<int> cutoffs, int samples,
                        std::uint64_t seed) {
  VerifyOptions opts;
  opts.groups = cli::parse_checks(checks);
  opts.cutoffs = std::move(cutoffs);
  opts.identities.samples = samples;
  opts.identities.seed = seed;
  return dump(to_json(verify_curve(curve_from_label(curve), opts)));
}

std::string geometry_json(const std::string& curve, int resolution) {
  const CurveSpec spec = curve_from_label(curve);
  return dump(geometry_to_json(geometry_for(spec, default_cutoffs(spec).back(), resolution)));
}

std::string ledger_json(const std::string& curve) {
  const CurveSpec spec = curve_from_label(curve);
  const auto mode = ledger_mode(spec.ambient, spec.genus);
  if (!mode) throw JacobiError(ErrorCode::HypothesisViolation, spec.label() + " has no Riemann-Roch ledger");
  return dump(to_json(build_ledger(geometry_for(spec, 2, 0), *mode)));
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jacobi-spectra");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  py::gil_scoped_release release;
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jacobi operator spectra on catalog surfaces";
  py::register_exception<JacobiError>(m, "JacobiError", PyExc_RuntimeError);

  m.def("curve_labels", [] {
    std::vector<std::string> out;
    for (const auto& spec : catalog()) out.push_back(spec.label());
    return out;
  });
  m.def("default_cutoffs", [](const std::string& curve) { return default_cutoffs(curve_from_label(curve)); }, py::arg("curve"));
  m.def("spectrum_json", &spectrum_json, py::arg("curve"), py::arg("cutoff") = 0, py::arg("resolution") = 0,
        py::arg("operator") = "jacobi", py::call_guard<py::gil_scoped_release>());
  m.def("converge_json", &converge_json, py::arg("curve"), py::arg("cutoffs") = std::vector<int>{}, py::arg("resolution") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("verify_json", &verify_json, py::arg("curve"), py::arg("checks") = "all", py::arg("cutoffs") = std::vector<int>{},
        py::arg("samples") = 20, py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("geometry_json", &geometry_json, py::arg("curve"), py::arg("resolution") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("ledger_json", &ledger_json, py::arg("curve"));
  m.def("run_cli", &run_cli, py::arg("args"));
}
