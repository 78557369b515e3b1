#pragma once

// Reduced normal Hamiltonian on landmark phase space T*Lmk^n, its symplectic gradient,
// the reconstructed velocity field and the abnormal (singular covector) residual.

#include "srd/core.hpp"
#include "srd/frame.hpp"
#include "srd/kernel.hpp"

#include <vector>

namespace srd {

struct LandmarkState {
  Points q;
  Points p;
  double time = 0.0;

  int size() const { return static_cast<int>(q.size()); }
  int dim() const { return q.empty() ? 0 : static_cast<int>(q.front().size()); }
  void validate() const;
  DiracMomentum momentum() const { return {q, p}; }

  /// z = [q_1, ..., q_n, p_1, ..., p_n], each block of length d.
  Eigen::VectorXd flatten() const;
  static LandmarkState unflatten(const Eigen::VectorXd& z, int n, int d, double t);
};

double hamiltonian(const KernelSpec& spec, const LandmarkState& state);

struct PhaseVelocity {
  Points dq;
  Points dp;
};

/// (dq, dp) = (dh/dp, -dh/dq), evaluated with the analytic frame Jacobians.
PhaseVelocity symplectic_gradient(const KernelSpec& spec, const LandmarkState& state,
                                  Exec exec = Exec::Parallel);

/// Flat-array form used by the integrator, no validation. z and out have length 2nd.
void phase_field(const KernelSpec& spec, int n, int d, const double* z, double* out,
                 Exec exec = Exec::Parallel);

/// X(x) = sum_j K(x, x_j) p_j.
Point field_from_momenta(const KernelSpec& spec, const LandmarkState& state, const Point& x);

/// Spatial Jacobian DX(x) of the reconstructed field, closed form.
SmallMat field_jacobian(const KernelSpec& spec, const LandmarkState& state, const Point& x);

/// Unchecked flat-array evaluation of X(x) and DX(x); `q`, `p` are length n*d.
void field_and_jacobian(const KernelSpec& spec, int n, int d, const double* q, const double* p,
                        const double* x, double* v, double* jac);

/// max_{t,i,k} |<p_i(t), X_k(x_i(t))>| / max_{t,i} |p_i(t)|. Zero means every covector
/// annihilates the distribution at its base point along the whole trajectory.
/// Throws DegenerateCovector when all covectors vanish.
double abnormal_residual(const FrameField& frame, const std::vector<LandmarkState>& trajectory);

}  // namespace srd
