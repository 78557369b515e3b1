#pragma once

// Horizontal Moser transport on the flat torus: weighted sub-Laplacian, its CG solve,
// horizontal gradients and the particle flow carrying f0 to f1 along the linear path.

#include "srd/core.hpp"
#include "srd/frame.hpp"
#include "srd/grid.hpp"

#include <vector>

namespace srd {

/// Node coefficients c_i = L_{X_i} F by centered differences, one component per frame field.
GridField frame_derivatives(const FrameField& frame, const GridField& F);

/// sum_i (L_{X_i} F) X_i at each node, d components.
GridField horizontal_gradient(const FrameField& frame, const GridField& F);

/// (1/f) div(f A grad F) with A = sum_i X_i X_i^T. Diagonal entries of A act through
/// face-centered differences D-(f_face A_aa D+ F), so the operator has only constants in
/// its kernel; off-diagonal entries use centered differences on both sides. Symmetric
/// for sum u v f, negative semi-definite whenever A is diagonal (all registered torus
/// frames). Throws InvalidInput on nonpositive density.
GridField sub_laplacian_apply(const FrameField& frame, const GridField& density, const GridField& F,
                              Exec exec = Exec::Parallel);

struct CgOptions {
  double tol = 1e-10;
  /// 0 selects 10 N^d.
  int max_iters = 0;
  Exec exec = Exec::Parallel;
};

struct CgReport {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// F with sub_laplacian(F) = rhs, f-weighted mean of F zero, |LF - rhs| <= tol |rhs|.
/// Throws IncompatibleRhs when the f-weighted mean of rhs exceeds 1e-8 (relative to
/// max(1, max|rhs|)), NotConverged at the iteration cap.
GridField solve_sub_laplacian(const FrameField& frame, const GridField& density, const GridField& rhs,
                              const CgOptions& opts = {}, CgReport* report = nullptr,
                              const GridField* initial_guess = nullptr);

struct MoserOptions {
  int n_time = 32;
  int substeps = 2;  // RK4 substeps per time step
  CgOptions cg;
  bool record_paths = false;
};

struct MoserStep {
  double t_mid = 0.0;
  int cg_iterations = 0;
  double cg_residual = 0.0;
  double mass_drift = 0.0;    // |sum f0/det * det vol - M0| / M0 on the Lagrangian particles
  double volume_drift = 0.0;  // |sum det vol - 1|, zero for an exact torus diffeomorphism
  double min_det = 0.0;
};

struct MoserReport {
  double error = 0.0;  // sum |f0 / det - f1(phi)| det vol / sum f1 vol
  double mass_drift = 0.0;
  double volume_drift = 0.0;
  double min_det = 0.0;
  double max_det = 0.0;
  int total_cg_iterations = 0;
  std::vector<MoserStep> steps;
};

struct MoserResult {
  std::vector<double> times;
  Points positions;            // phi(1, x) per source node (unwrapped)
  std::vector<SmallMat> jacobians;
  std::vector<Points> paths;   // paths[k][s] when record_paths
  GridField achieved;          // f0(x) / det Dphi(1, x), carried by the particle from node x
  MoserReport report;
};

/// Pushes f0 forward to f1 by the flow of grad_SR F(t), Delta_{f(t)} F = -(f1 - f0)/f(t),
/// f(t) = (1-t) f0 + t f1, one potential per time step at the step midpoint. Throws
/// PreconditionError on mass mismatch beyond 1e-10 relative or nonpositive densities,
/// ConfigurationError for a non-periodic frame.
MoserResult moser_transport(const FrameField& frame, const GridField& f0, const GridField& f1,
                            const MoserOptions& opts = {});

}  // namespace srd
