#pragma once

// Diffeomorphism flow driven by a landmark geodesic, sampled on passive particles
// together with their Jacobians, and Lagrangian density pushforward.

#include "srd/grid.hpp"
#include "srd/hamiltonian.hpp"
#include "srd/integrator.hpp"
#include "srd/kernel.hpp"

#include <vector>

namespace srd {

struct FlowRecord {
  KernelSpec spec;
  int n = 0;
  int d = 0;
  std::vector<double> times;
  std::vector<LandmarkState> landmarks;          // landmarks[k] at times[k]
  Points seeds;
  std::vector<Points> particles;                 // particles[s][k]
  std::vector<std::vector<SmallMat>> jacobians;  // jacobians[s][k] = Dphi(times[k], seeds[s])
  double min_det = 0.0;
  double max_det = 0.0;
};

struct AdvectOptions {
  Exec exec = Exec::Parallel;
  /// Record every k-th step (the final state is always recorded).
  int record_stride = 1;
};

/// Integrates the landmark Hamiltonian system together with every seed y and its
/// variational equation dJ/dt = DX(t, y) J, DX in closed form.
FlowRecord advect(const KernelSpec& spec, const LandmarkState& state0, const Points& seeds, double T,
                  int steps, const AdvectOptions& opts = {});

/// max over landmarks i and samples t of |p_i(t) J_i(t) - p_i(0)| / |p_i(0)|, J_i the
/// Jacobian at the seed sitting on landmark i. Throws ConfigurationError if a landmark
/// has no seed on it.
double pushforward_residual(const FlowRecord& record);

/// Density pushed forward to the particles of a flow at its final time.
struct LagrangianDensity {
  GridField values;        // f0(x) / det Dphi(T, x), indexed by the source node x
  Points positions;        // phi(T, x)
  std::vector<double> det;
  double mass_residual = 0.0;  // |sum f1 det vol - sum f0 vol| / sum f0 vol
};

/// Requires the record's seeds to be exactly the nodes of f0 (in node order).
/// Throws OrientationError when some det Dphi <= 0.
LagrangianDensity transport_density(const FlowRecord& record, const GridField& f0);

}  // namespace srd
