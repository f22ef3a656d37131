#include "jacobi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "jacobi/calculus.hpp"
#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

Eigen::MatrixXcd weighted_inner(const CurveGeometry& g, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a.adjoint() * (g.area_weights().cast<cplx>().asDiagonal() * b);
}

double hermitize(Eigen::MatrixXcd& a) {
  const double scale = a.norm();
  const double residual = scale > 0.0 ? (a - a.adjoint()).norm() / scale : 0.0;
  a = 0.5 * (a + a.adjoint()).eval();
  return residual;
}

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

std::string format_double(double x) {
  if (!std::isfinite(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Jacobi: return "Jacobi";
    case OperatorKind::AreaForm: return "AreaForm";
    case OperatorKind::WplusForm: return "WplusForm";
    case OperatorKind::Dbar: return "Dbar";
  }
  return "?";
}

OperatorMatrix assemble(const CurveGeometry& geometry, const SectionBasis& basis, OperatorKind kind) {
  if (basis.geometry != &geometry) throw JacobiError(ErrorCode::InvalidArgument, "basis was built on another geometry");
  if (basis.weight_p != 0 || basis.weight_q != 1) {
    throw JacobiError(ErrorCode::WeightMismatch, std::string(to_string(kind)) + " acts on weight (0, 1) sections");
  }
  OperatorMatrix op;
  op.kind = kind;
  op.basis = &basis;
  const Eigen::MatrixXcd& b = basis.values;
  switch (kind) {
    case OperatorKind::Jacobi:
      op.matrix = weighted_inner(geometry, b, jacobi_apply(geometry, b));
      break;
    case OperatorKind::AreaForm: {
      const Eigen::MatrixXcd db = d1bar(geometry, b, 0, 1);
      op.matrix = 4.0 * weighted_inner(geometry, db, db);
      break;
    }
    case OperatorKind::WplusForm: {
      const Eigen::MatrixXcd ddb = d1bar(geometry, d1bar(geometry, b, 0, 1), 1, 1);
      op.matrix = 8.0 * weighted_inner(geometry, ddb, ddb);
      break;
    }
    case OperatorKind::Dbar: {
      auto target = std::make_shared<SectionBasis>(build_basis(geometry, 1, 1, basis.cutoff));
      op.matrix = weighted_inner(geometry, target->values, d1bar(geometry, b, 0, 1));
      op.target = std::move(target);
      return op;
    }
  }
  op.hermiticity_residual = hermitize(op.matrix);
  return op;
}

SpectrumReport eigensolve(const OperatorMatrix& op, const SpectralOptions& options) {
  if (op.kind == OperatorKind::Dbar) throw JacobiError(ErrorCode::InvalidArgument, "Dbar is rectangular; use dbar_rank");
  const SectionBasis& basis = *op.basis;
  SpectrumReport r;
  r.curve = basis.geometry->spec.label();
  r.backend = basis.backend;
  r.kind = op.kind;
  r.cutoff = basis.cutoff;
  r.resolution = basis.geometry->spectral_grid->bandwidth();
  r.hermiticity_residual = op.hermiticity_residual;
  r.gram_condition = basis.gram_condition;
  if (!(basis.gram_condition <= options.gram_condition_limit)) {
    throw JacobiError(ErrorCode::GramIllConditioned, "Gram condition number " + format_double(basis.gram_condition));
  }

  // Imaginary parts of the Ritz values, measured through the skew part of G^{-1/2} A G^{-1/2}.
  const Eigen::LLT<Eigen::MatrixXcd> llt(basis.gram);
  if (llt.info() != Eigen::Success) throw JacobiError(ErrorCode::GramIllConditioned, "Gram matrix is not positive definite");
  Eigen::MatrixXcd reduced = llt.matrixL().solve(op.matrix);
  reduced = llt.matrixL().solve(reduced.adjoint()).adjoint();
  {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(reduced, false);
    for (Eigen::Index i = 0; i < ces.eigenvalues().size(); ++i) {
      r.max_imaginary = std::max(r.max_imaginary, std::abs(ces.eigenvalues()[i].imag()));
    }
  }
  reduced = 0.5 * (reduced + reduced.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced);
  if (es.info() != Eigen::Success) throw JacobiError(ErrorCode::NonConvergence, "Hermitian eigensolver did not converge");
  const Eigen::VectorXd& ev = es.eigenvalues();
  r.eigenvectors = llt.matrixU().solve(es.eigenvectors());
  r.eigenvalues.assign(ev.data(), ev.data() + ev.size());

  double largest = 0.0;
  for (double x : r.eigenvalues) largest = std::max(largest, std::abs(x));
  r.kernel_threshold = options.kernel_threshold * largest;
  std::size_t i = 0;
  while (i < r.eigenvalues.size() && std::abs(r.eigenvalues[i]) <= r.kernel_threshold) ++i;
  r.kernel_dim = static_cast<int>(i);
  while (i < r.eigenvalues.size()) {
    std::size_t j = i + 1;
    while (j < r.eigenvalues.size() &&
           r.eigenvalues[j] - r.eigenvalues[j - 1] <= options.cluster_gap * std::max(std::abs(r.eigenvalues[j]), 1.0)) {
      ++j;
    }
    double sum = 0.0;
    for (std::size_t k = i; k < j; ++k) sum += r.eigenvalues[k];
    const EigenCluster c{sum / static_cast<double>(j - i), static_cast<int>(j - i), r.eigenvalues[j - 1] - r.eigenvalues[i]};
    r.clusters.push_back(c);
    r.residuals.push_back(c.spread);
    i = j;
  }
  r.lambda1 = r.clusters.empty() ? std::numeric_limits<double>::quiet_NaN() : r.clusters.front().value;
  return r;
}

nlohmann::json to_json(const SpectrumReport& r) {
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : r.clusters) clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}, {"spread", c.spread}});
  return {
      {"curve", r.curve},
      {"backend", std::string(to_string(r.backend))},
      {"operator", std::string(to_string(r.kind))},
      {"cutoff", r.cutoff},
      {"resolution", r.resolution},
      {"eigenvalues", r.eigenvalues},
      {"clusters", clusters},
      {"kernel_dim", r.kernel_dim},
      {"kernel_threshold", r.kernel_threshold},
      {"lambda1", number_or_null(r.lambda1)},
      {"residuals", r.residuals},
      {"max_imaginary", r.max_imaginary},
      {"hermiticity_residual", r.hermiticity_residual},
      {"gram_condition", r.gram_condition},
  };
}

std::string to_csv(const SpectrumReport& r) {
  std::ostringstream os;
  os << "index,eigenvalue,in_kernel\n";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    os << i << ',' << format_double(r.eigenvalues[i]) << ',' << (static_cast<int>(i) < r.kernel_dim ? 1 : 0) << '\n';
  }
  return os.str();
}

RankReport dbar_rank(const OperatorMatrix& dbar, double relative_threshold) {
  if (dbar.kind != OperatorKind::Dbar || !dbar.target) throw JacobiError(ErrorCode::InvalidArgument, "expected a Dbar matrix");
  const Eigen::LLT<Eigen::MatrixXcd> dom(dbar.basis->gram);
  const Eigen::LLT<Eigen::MatrixXcd> tgt(dbar.target->gram);
  // Orthonormal coordinates: L_t^{-1} M L_d^{-H}.
  Eigen::MatrixXcd m = tgt.matrixL().solve(dbar.matrix);
  m = dom.matrixL().solve(m.adjoint()).adjoint();
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  RankReport r;
  r.rows = static_cast<int>(m.rows());
  r.cols = static_cast<int>(m.cols());
  r.singular_values.assign(s.data(), s.data() + s.size());
  const double cut = s.size() ? relative_threshold * s[0] : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r.rank += s[i] > cut ? 1 : 0;
  r.kernel = r.cols - r.rank;
  r.cokernel = r.rows - r.rank;
  return r;
}

int default_resolution(const CurveSpec& spec, int max_cutoff) {
  if (spec.chart == ChartKind::TorusFundamentalDomain) {
    int n = 2 * max_cutoff + 4;
    return n + (n % 2);
  }
  return 2 * max_cutoff + 32;
}

ConvergenceTable convergence_study(const CurveGeometry& geometry, OperatorKind kind, const std::vector<int>& cutoffs,
                                   const SpectralOptions& options) {
  if (cutoffs.size() < 3) throw JacobiError(ErrorCode::InvalidArgument, "convergence study needs at least three cutoffs");
  if (!std::is_sorted(cutoffs.begin(), cutoffs.end()) || std::adjacent_find(cutoffs.begin(), cutoffs.end()) != cutoffs.end()) {
    throw JacobiError(ErrorCode::InvalidArgument, "cutoffs must be strictly increasing");
  }
  ConvergenceTable t;
  t.curve = geometry.spec.label();
  t.kind = kind;
  for (int c : cutoffs) {
    const SectionBasis basis = build_basis(geometry, 0, 1, c);
    SpectrumReport rep = eigensolve(assemble(geometry, basis, kind), options);
    rep.eigenvectors.resize(0, 0);
    ConvergenceRow row{c, rep.lambda1, rep.kernel_dim, rep.lambda1_multiplicity(), std::numeric_limits<double>::quiet_NaN()};
    t.rows.push_back(row);
    t.reports.push_back(std::move(rep));
  }
  const std::size_t n = t.rows.size();
  for (std::size_t i = 2; i < n; ++i) {
    const double d1 = t.rows[i - 1].lambda1 - t.rows[i - 2].lambda1;
    const double d2 = t.rows[i].lambda1 - t.rows[i - 1].lambda1;
    const double ratio = std::log(std::abs(d1) / std::abs(d2)) /
                         std::log(double(t.rows[i].cutoff) / double(t.rows[i - 1].cutoff));
    if (std::isfinite(ratio)) t.rows[i].observed_order = ratio;
  }
  const double x0 = t.rows[n - 3].lambda1, x1 = t.rows[n - 2].lambda1, x2 = t.rows[n - 1].lambda1;
  const double d1 = x1 - x0, d2 = x2 - x1;
  const double floor = 1e-13 * std::max(1.0, std::abs(x2));
  if (std::abs(d2) <= floor || std::abs(d2 - d1) <= floor || (d1 * d2) <= 0.0 || std::abs(d2) >= std::abs(d1)) {
    // Exact, noisy or non-contracting sequence: no extrapolation beyond the last value.
    t.extrapolated = x2;
    t.error_bar = std::max(std::abs(d2), floor);
  } else {
    t.extrapolated = x2 - d2 * d2 / (d2 - d1);
    t.error_bar = std::max(std::abs(t.extrapolated - x2), floor);
  }
  if (t.rows[n - 1].kernel_dim != t.rows[n - 2].kernel_dim) {
    throw JacobiError(ErrorCode::UnstableKernel, "kernel dimension changes from " + std::to_string(t.rows[n - 2].kernel_dim) +
                                                     " to " + std::to_string(t.rows[n - 1].kernel_dim));
  }
  return t;
}

nlohmann::json to_json(const ConvergenceTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"cutoff", r.cutoff},
                    {"lambda1", number_or_null(r.lambda1)},
                    {"kernel_dim", r.kernel_dim},
                    {"multiplicity", r.multiplicity},
                    {"observed_order", number_or_null(r.observed_order)}});
  }
  return {{"curve", t.curve},
          {"operator", std::string(to_string(t.kind))},
          {"rows", rows},
          {"extrapolated", number_or_null(t.extrapolated)},
          {"error_bar", t.error_bar}};
}

std::string to_csv(const ConvergenceTable& t) {
  std::ostringstream os;
  os << "cutoff,lambda1,kernel_dim,multiplicity,observed_order\n";
  for (const auto& r : t.rows) {
    os << r.cutoff << ',' << format_double(r.lambda1) << ',' << r.kernel_dim << ',' << r.multiplicity << ','
       << format_double(r.observed_order) << '\n';
  }
  return os.str();
}

}  // namespace jacobi
