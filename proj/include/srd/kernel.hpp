#pragma once

// Gaussian reproducing kernels of the space of admissible vector fields, evaluated on
// Dirac momenta.

#include "srd/core.hpp"
#include "srd/frame.hpp"

#include <optional>
#include <string>

namespace srd {

enum class KernelMode { Full, FrameConstrained };

struct KernelSpec {
  double sigma = 1.0;
  KernelMode mode = KernelMode::Full;
  /// Resolved frame, present exactly in FrameConstrained mode.
  std::optional<FrameField> frame;

  static KernelSpec full(double sigma);
  static KernelSpec constrained(double sigma, std::string_view frame_id, int dim = 0);

  /// Throws InvalidInput for sigma <= 0 or non-finite, ConfigurationError for a
  /// constrained spec without a usable frame.
  void validate() const;
  /// Dimension forced by the frame, or 0 in Full mode.
  int frame_dim() const { return frame ? frame->dim : 0; }
};

/// n points paired with n row covectors; points pairwise distinct.
struct DiracMomentum {
  Points points;
  Points covectors;

  void validate() const;
  int size() const { return static_cast<int>(points.size()); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
};

/// exp(-|x - y|^2 / (2 sigma)).
double gaussian_scalar(const Point& x, const Point& y, double sigma);

template <class T>
T gaussian_t(const VecN<T>& x, const VecN<T>& y, double sigma) {
  using std::exp;
  T r2(0.0);
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    const T dx = x[a] - y[a];
    r2 += dx * dx;
  }
  return exp(-r2 / (2.0 * sigma));
}

/// K(x, y) p. Full: e(x-y) p^T. FrameConstrained: e(x-y) sum_j <p, X_j(y)> X_j(x).
Point kernel_apply(const KernelSpec& spec, const Point& x, const Point& y, const Point& p);

/// Dense (nd)x(nd) block matrix with block (i, j) = K(x_i, x_j). Rows are filled in
/// row-major (i, j) order; the parallel path splits over block rows and is bitwise
/// identical to the serial one.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Points& points, Exec exec = Exec::Parallel);

/// P(KP) = sum_{i,j} p_i . K(x_i, x_j) p_j, i.e. twice the normal Hamiltonian.
double rkhs_norm_sq(const KernelSpec& spec, const DiracMomentum& mom);

}  // namespace srd
