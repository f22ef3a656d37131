#include "jacobi/grid.hpp"

#include <cmath>
#include <numbers>

#include "jacobi/errors.hpp"
#include "jacobi/wigner.hpp"

namespace jacobi {

using Eigen::MatrixXcd;

void SpectralGrid::check_spin(int two_k) const {
  if (std::abs(two_k) > 2 * max_spin_) {
    throw JacobiError(ErrorCode::WeightOverflow,
                      "spin " + std::to_string(two_k / 2.0) + " exceeds grid limit " + std::to_string(max_spin_));
  }
}

SpinLayout::SpinLayout(int two_s_in, int bandwidth)
    : two_s(two_s_in), two_l_min(std::abs(two_s_in)), two_l_max(2 * bandwidth + (std::abs(two_s_in) % 2)) {}

int SpinLayout::size() const {
  if (two_l_max < two_l_min) return 0;
  const int n = (two_l_max - two_l_min) / 2 + 1;
  return n * (two_l_min + 1) + n * (n - 1);
}

int SpinLayout::index(int two_l, int two_m) const {
  const int n = (two_l - two_l_min) / 2;
  return n * (two_l_min + 1) + n * (n - 1) + (two_m + two_l) / 2;
}

// ---------------------------------------------------------------------------

SphereGrid::SphereGrid(int bandwidth, int max_spin) {
  if (bandwidth < 1) throw JacobiError(ErrorCode::InvalidArgument, "sphere bandwidth must be >= 1");
  bandwidth_ = bandwidth;
  max_spin_ = max_spin;
  n_theta_ = bandwidth + 2;
  mu_max_ = bandwidth + max_spin + 1;
  n_phi_ = 2 * mu_max_ + 2;

  const GaussLegendreRule rule = gauss_legendre(n_theta_);
  grid_.chart = ChartKind::SphereStereographic;
  grid_.resolution = {n_theta_, n_phi_};
  grid_.theta.resize(n_theta_);
  gl_weights_.resize(n_theta_);
  for (int i = 0; i < n_theta_; ++i) {
    // Ascending polar angle: ring 0 sits next to the north pole z = 0.
    grid_.theta[i] = std::acos(rule.nodes[n_theta_ - 1 - i]);
    gl_weights_[i] = rule.weights[n_theta_ - 1 - i];
  }
  grid_.phi.resize(n_phi_);
  for (int j = 0; j < n_phi_; ++j) grid_.phi[j] = 2.0 * std::numbers::pi * j / n_phi_;

  const std::size_t n_nodes = static_cast<std::size_t>(n_theta_) * n_phi_;
  grid_.nodes.resize(n_nodes);
  grid_.weights.resize(n_nodes);
  ref_scale_.resize(n_nodes);
  ref_conn_bar_.resize(n_nodes);
  ref_log_factor_.resize(n_nodes);
  const double dphi = 2.0 * std::numbers::pi / n_phi_;
  for (int i = 0; i < n_theta_; ++i) {
    const double t = std::tan(0.5 * grid_.theta[i]);
    const double c2 = std::cos(0.5 * grid_.theta[i]) * std::cos(0.5 * grid_.theta[i]);
    for (int j = 0; j < n_phi_; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * n_phi_ + j;
      const cplx z = std::polar(t, grid_.phi[j]);
      grid_.nodes[k] = z;
      grid_.weights[k] = gl_weights_[i] * dphi;
      ref_scale_[k] = 0.5 / c2;
      ref_conn_bar_[k] = -0.5 * z;
      ref_log_factor_[k] = std::log(2.0 * c2);
    }
  }

  fourier_.resize(n_phi_, 2 * mu_max_ + 1);
  for (int j = 0; j < n_phi_; ++j) {
    for (int mu = -mu_max_; mu <= mu_max_; ++mu) {
      fourier_(j, mu_column(mu)) = std::polar(1.0, mu * grid_.phi[j]);
    }
  }
}

const SphereGrid::SpinTable& SphereGrid::table(int two_s) const {
  check_spin(two_s);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = cache_.find(two_s);
  if (it != cache_.end()) return *it->second;

  auto t = std::make_unique<SpinTable>(SpinTable{SpinLayout(two_s, bandwidth_), {}, {}, {}});
  const SpinLayout& lay = t->layout;
  for (int two_m = -lay.two_l_max; two_m <= lay.two_l_max; two_m += 2) {
    std::vector<int> rows;
    std::vector<int> two_ls;
    for (int two_l = std::max(lay.two_l_min, std::abs(two_m)); two_l <= lay.two_l_max; two_l += 2) {
      two_ls.push_back(two_l);
      rows.push_back(lay.index(two_l, two_m));
    }
    if (rows.empty()) continue;
    Eigen::MatrixXd prof(n_theta_, static_cast<Eigen::Index>(rows.size()));
    for (int i = 0; i < n_theta_; ++i) {
      for (std::size_t c = 0; c < two_ls.size(); ++c) {
        prof(i, static_cast<Eigen::Index>(c)) = spin_harmonic_profile(two_s, two_ls[c], two_m, grid_.theta[i]);
      }
    }
    t->two_m.push_back(two_m);
    t->profile.push_back(std::move(prof));
    t->index.push_back(std::move(rows));
  }
  auto [pos, inserted] = cache_.emplace(two_s, std::move(t));
  return *pos->second;
}

MatrixXcd SphereGrid::forward(const MatrixXcd& fields, int two_s) const {
  const SpinTable& t = table(two_s);
  const Eigen::Index nf = fields.cols();
  const Eigen::Index n_mu = fourier_.cols();
  const double dphi = 2.0 * std::numbers::pi / n_phi_;

  // Azimuthal analysis ring by ring.
  MatrixXcd rings(n_theta_ * n_mu, nf);
  const MatrixXcd eh = fourier_.adjoint() * dphi;
  for (int i = 0; i < n_theta_; ++i) {
    rings.middleRows(i * n_mu, n_mu).noalias() = eh * fields.middleRows(static_cast<Eigen::Index>(i) * n_phi_, n_phi_);
  }

  MatrixXcd coeffs = MatrixXcd::Zero(t.layout.size(), nf);
  MatrixXcd gathered(n_theta_, nf);
  for (std::size_t b = 0; b < t.two_m.size(); ++b) {
    const int mu = (two_s + t.two_m[b]) / 2;
    for (int i = 0; i < n_theta_; ++i) {
      gathered.row(i) = rings.row(i * n_mu + mu_column(mu)) * gl_weights_[i];
    }
    const MatrixXcd block = t.profile[b].transpose().cast<cplx>() * gathered;
    for (std::size_t c = 0; c < t.index[b].size(); ++c) coeffs.row(t.index[b][c]) = block.row(static_cast<Eigen::Index>(c));
  }
  return coeffs;
}

MatrixXcd SphereGrid::backward(const MatrixXcd& coeffs, int two_s) const {
  const SpinTable& t = table(two_s);
  const Eigen::Index nf = coeffs.cols();
  const Eigen::Index n_mu = fourier_.cols();

  MatrixXcd rings = MatrixXcd::Zero(n_theta_ * n_mu, nf);
  for (std::size_t b = 0; b < t.two_m.size(); ++b) {
    const int mu = (two_s + t.two_m[b]) / 2;
    MatrixXcd sub(static_cast<Eigen::Index>(t.index[b].size()), nf);
    for (std::size_t c = 0; c < t.index[b].size(); ++c) sub.row(static_cast<Eigen::Index>(c)) = coeffs.row(t.index[b][c]);
    const MatrixXcd g = t.profile[b].cast<cplx>() * sub;
    for (int i = 0; i < n_theta_; ++i) rings.row(i * n_mu + mu_column(mu)) += g.row(i);
  }
  MatrixXcd fields(static_cast<Eigen::Index>(grid_.size()), nf);
  for (int i = 0; i < n_theta_; ++i) {
    fields.middleRows(static_cast<Eigen::Index>(i) * n_phi_, n_phi_).noalias() = fourier_ * rings.middleRows(i * n_mu, n_mu);
  }
  return fields;
}

MatrixXcd SphereGrid::raise(const MatrixXcd& coeffs, int two_s) const {
  const SpinLayout src(two_s, bandwidth_);
  const SpinLayout dst(two_s + 2, bandwidth_);
  MatrixXcd out = MatrixXcd::Zero(dst.size(), coeffs.cols());
  const double s = 0.5 * two_s;
  for (int two_l = dst.two_l_min; two_l <= dst.two_l_max; two_l += 2) {
    if (!src.contains(two_l)) continue;
    const double l = 0.5 * two_l;
    const double factor = 0.5 * std::sqrt(std::max(0.0, (l - s) * (l + s + 1.0)));
    for (int two_m = -two_l; two_m <= two_l; two_m += 2) {
      out.row(dst.index(two_l, two_m)) = factor * coeffs.row(src.index(two_l, two_m));
    }
  }
  return out;
}

MatrixXcd SphereGrid::lower(const MatrixXcd& coeffs, int two_s) const {
  const SpinLayout src(two_s, bandwidth_);
  const SpinLayout dst(two_s - 2, bandwidth_);
  MatrixXcd out = MatrixXcd::Zero(dst.size(), coeffs.cols());
  const double s = 0.5 * two_s;
  for (int two_l = dst.two_l_min; two_l <= dst.two_l_max; two_l += 2) {
    if (!src.contains(two_l)) continue;
    const double l = 0.5 * two_l;
    const double factor = -0.5 * std::sqrt(std::max(0.0, (l + s) * (l - s + 1.0)));
    for (int two_m = -two_l; two_m <= two_l; two_m += 2) {
      out.row(dst.index(two_l, two_m)) = factor * coeffs.row(src.index(two_l, two_m));
    }
  }
  return out;
}

MatrixXcd SphereGrid::dbar(const MatrixXcd& fields, int two_k) const {
  check_spin(two_k + 2);
  return backward(raise(forward(fields, two_k), two_k), two_k + 2);
}

MatrixXcd SphereGrid::d(const MatrixXcd& fields, int two_k) const {
  check_spin(two_k - 2);
  return backward(lower(forward(fields, two_k), two_k), two_k - 2);
}

// ---------------------------------------------------------------------------

TorusGrid::TorusGrid(int n, cplx omega1, cplx omega2) {
  if (n < 2 || n % 2 != 0) throw JacobiError(ErrorCode::InvalidArgument, "torus grid size must be even and >= 2");
  n_ = n;
  bandwidth_ = n / 2 - 1;
  max_spin_ = 64;
  Eigen::Matrix2d frame;
  frame << omega1.real(), omega2.real(), omega1.imag(), omega2.imag();
  const double det = frame.determinant();
  if (std::abs(det) < 1e-12) throw JacobiError(ErrorCode::DegenerateLattice, "lattice basis is rank deficient");
  area_ = std::abs(det);
  inverse_frame_ = frame.inverse();

  grid_.chart = ChartKind::TorusFundamentalDomain;
  grid_.resolution = {n, n};
  const std::size_t n_nodes = static_cast<std::size_t>(n) * n;
  grid_.nodes.resize(n_nodes);
  grid_.weights.assign(n_nodes, area_ / static_cast<double>(n_nodes));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      grid_.nodes[static_cast<std::size_t>(a) * n + b] = (static_cast<double>(a) / n) * omega1 + (static_cast<double>(b) / n) * omega2;
    }
  }
  ref_scale_ = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_nodes));
  ref_conn_bar_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_nodes));
  ref_log_factor_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_nodes));

  fourier_.resize(n, n);
  for (int a = 0; a < n; ++a) {
    for (int mi = 0; mi < n; ++mi) {
      const int m = mi - n / 2;
      fourier_(a, mi) = std::polar(1.0, 2.0 * std::numbers::pi * m * a / n);
    }
  }
}

cplx TorusGrid::dbar_symbol(int m, int n) const {
  const Eigen::Vector2d c = inverse_frame_.transpose() * Eigen::Vector2d(m, n);
  return cplx(0.0, std::numbers::pi) * cplx(c[0], c[1]);
}

cplx TorusGrid::d_symbol(int m, int n) const {
  const Eigen::Vector2d c = inverse_frame_.transpose() * Eigen::Vector2d(m, n);
  return cplx(0.0, std::numbers::pi) * cplx(c[0], -c[1]);
}

MatrixXcd TorusGrid::apply_symbol(const MatrixXcd& fields, bool holomorphic_direction) const {
  MatrixXcd out(fields.rows(), fields.cols());
  const double norm = 1.0 / (static_cast<double>(n_) * n_);
  for (Eigen::Index f = 0; f < fields.cols(); ++f) {
    const MatrixXcd values = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        fields.col(f).data(), n_, n_);
    MatrixXcd spec = fourier_.adjoint() * values * fourier_.conjugate() * norm;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        const int m = i - n_ / 2;
        const int k = j - n_ / 2;
        // The Nyquist modes have no symmetric partner and are dropped.
        if (i == 0 || j == 0) {
          spec(i, j) = 0.0;
          continue;
        }
        spec(i, j) *= holomorphic_direction ? d_symbol(m, k) : dbar_symbol(m, k);
      }
    }
    const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> back = fourier_ * spec * fourier_.transpose();
    out.col(f) = Eigen::Map<const Eigen::VectorXcd>(back.data(), static_cast<Eigen::Index>(back.size()));
  }
  return out;
}

MatrixXcd TorusGrid::dbar(const MatrixXcd& fields, int two_k) const {
  check_spin(two_k);
  return apply_symbol(fields, false);
}

MatrixXcd TorusGrid::d(const MatrixXcd& fields, int two_k) const {
  check_spin(two_k);
  return apply_symbol(fields, true);
}

}  // namespace jacobi
