#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace jacobi {

using cplx = std::complex<double>;

enum class ChartKind { SphereStereographic, TorusFundamentalDomain };

/// Nodes and reference weights of a product quadrature on the parameter
/// domain. The induced area density is carried by the geometry, so
/// sum(weights * density) is the induced area.
struct QuadratureGrid {
  ChartKind chart = ChartKind::SphereStereographic;
  std::vector<cplx> nodes;
  std::vector<double> weights;
  std::array<int, 2> resolution{0, 0};
  // Sphere only: polar angle per ring and azimuth per column. Node index is
  // ring * n_phi + column.
  std::vector<double> theta;
  std::vector<double> phi;

  std::size_t size() const { return nodes.size(); }
};

/// Chart-level differentiation on a fixed grid. Fields are stored as columns
/// of a (nodes x fields) matrix. The operators act in the chart gauge of the
/// round reference: on the sphere dbar/d are the unit-sphere spin raising and
/// lowering operators for spin two_k/2, on the torus they are d/dwbar, d/dw.
class SpectralGrid {
 public:
  virtual ~SpectralGrid() = default;

  const QuadratureGrid& grid() const { return grid_; }
  int bandwidth() const { return bandwidth_; }
  int max_spin() const { return max_spin_; }

  virtual Eigen::MatrixXcd dbar(const Eigen::MatrixXcd& fields, int two_k) const = 0;
  virtual Eigen::MatrixXcd d(const Eigen::MatrixXcd& fields, int two_k) const = 0;

  /// exp(-u0) of the reference metric at each node (1 on the torus).
  const Eigen::VectorXd& ref_scale() const { return ref_scale_; }
  /// exp(-u0) d u0/dzbar at each node (0 on the torus).
  const Eigen::VectorXcd& ref_conn_bar() const { return ref_conn_bar_; }
  /// u0 at each node.
  const Eigen::VectorXd& ref_log_factor() const { return ref_log_factor_; }

 protected:
  void check_spin(int two_k) const;

  QuadratureGrid grid_;
  int bandwidth_ = 0;
  int max_spin_ = 0;
  Eigen::VectorXd ref_scale_;
  Eigen::VectorXcd ref_conn_bar_;
  Eigen::VectorXd ref_log_factor_;
};

/// Index bookkeeping for spin-weighted harmonic coefficients of spin two_s/2
/// with degrees |s| <= l <= bandwidth (+1/2 for half-integer spin).
struct SpinLayout {
  int two_s = 0;
  int two_l_min = 0;
  int two_l_max = 0;

  SpinLayout(int two_s, int bandwidth);
  int size() const;
  int index(int two_l, int two_m) const;
  bool contains(int two_l) const { return two_l >= two_l_min && two_l <= two_l_max; }
};

/// Gauss-Legendre x uniform-azimuth grid on the unit sphere with exact
/// spin-weighted harmonic transforms up to the bandwidth.
class SphereGrid final : public SpectralGrid {
 public:
  explicit SphereGrid(int bandwidth, int max_spin = 8);

  Eigen::MatrixXcd forward(const Eigen::MatrixXcd& fields, int two_s) const;
  Eigen::MatrixXcd backward(const Eigen::MatrixXcd& coeffs, int two_s) const;
  /// Chart-gauge exp(-u0)(d/dzbar - s du0/dzbar): spin s -> s+1.
  Eigen::MatrixXcd raise(const Eigen::MatrixXcd& coeffs, int two_s) const;
  /// Chart-gauge exp(-u0)(d/dz + s du0/dz): spin s -> s-1.
  Eigen::MatrixXcd lower(const Eigen::MatrixXcd& coeffs, int two_s) const;

  Eigen::MatrixXcd dbar(const Eigen::MatrixXcd& fields, int two_k) const override;
  Eigen::MatrixXcd d(const Eigen::MatrixXcd& fields, int two_k) const override;

  SpinLayout layout(int two_s) const { return SpinLayout(two_s, bandwidth_); }

 private:
  struct SpinTable {
    SpinLayout layout;
    std::vector<int> two_m;                 // per azimuthal block
    std::vector<Eigen::MatrixXd> profile;   // n_theta x n_l for each block
    std::vector<std::vector<int>> index;    // coefficient rows for each block
  };

  const SpinTable& table(int two_s) const;
  int mu_column(int mu) const { return mu + mu_max_; }

  int n_theta_ = 0;
  int n_phi_ = 0;
  int mu_max_ = 0;
  std::vector<double> gl_weights_;
  Eigen::MatrixXcd fourier_;  // n_phi x (2 mu_max + 1), entries exp(i mu phi_j)
  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::unique_ptr<SpinTable>> cache_;
};

/// Uniform grid on the fundamental domain of a lattice {omega1, omega2};
/// node w = x omega1 + y omega2 with x, y in {0, 1/n, ...}.
class TorusGrid final : public SpectralGrid {
 public:
  TorusGrid(int n, cplx omega1, cplx omega2);

  Eigen::MatrixXcd dbar(const Eigen::MatrixXcd& fields, int two_k) const override;
  Eigen::MatrixXcd d(const Eigen::MatrixXcd& fields, int two_k) const override;

  /// Multiplier of d/dwbar on the mode exp(2 pi i (m x + n y)).
  cplx dbar_symbol(int m, int n) const;
  cplx d_symbol(int m, int n) const;
  double cell_area() const { return area_; }
  int n() const { return n_; }

 private:
  Eigen::MatrixXcd apply_symbol(const Eigen::MatrixXcd& fields, bool conjugate_direction) const;

  int n_ = 0;
  double area_ = 0.0;
  Eigen::Matrix2d inverse_frame_;  // maps (Re w, Im w) to (x, y)
  Eigen::MatrixXcd fourier_;       // n x n, entries exp(2 pi i m a / n), m = -n/2 .. n/2-1
};

}  // namespace jacobi
