#pragma once

// Scalar-generic landmark Hamiltonian and its symplectic gradient on flat arrays.
// Instantiated with double for integration and with Dual<double> for the
// Hessian-vector products used by the shooting adjoint.

#include "srd/dual.hpp"
#include "srd/frame.hpp"
#include "srd/kernel.hpp"

#include <vector>

namespace srd::detail {

template <class T>
VecN<T> load(const T* base, int i, int d) {
  VecN<T> v(d);
  for (int a = 0; a < d; ++a) v[a] = base[i * d + a];
  return v;
}

/// Per-landmark frame data for the constrained kernel: X_k(x_i), w_ik = <p_i, X_k(x_i)>
/// and the covector p_i o DX_k(x_i).
template <class T>
struct FrameCache {
  int r = 0;
  std::vector<VecN<T>> X;      // [i * r + k]
  std::vector<T> w;            // [i * r + k]
  std::vector<VecN<T>> pDX;    // [i * r + k]

  FrameCache(const FrameField& f, int n, int d, const T* q, const T* p) : r(f.count) {
    X.resize(n * r);
    w.resize(n * r);
    pDX.resize(n * r);
    for (int i = 0; i < n; ++i) {
      const VecN<T> x = load(q, i, d);
      for (int k = 0; k < r; ++k) {
        const VecN<T> xk = frame_field<T>(f, k + 1, x);
        const MatN<T> J = frame_jacobian<T>(f, k + 1, x);
        T s(0.0);
        for (int a = 0; a < d; ++a) s += p[i * d + a] * xk[a];
        VecN<T> row(d);
        for (int b = 0; b < d; ++b) {
          T acc(0.0);
          for (int a = 0; a < d; ++a) acc += p[i * d + a] * J(a, b);
          row[b] = acc;
        }
        X[i * r + k] = xk;
        w[i * r + k] = s;
        pDX[i * r + k] = row;
      }
    }
  }
};

template <class T>
T pair_gaussian(const T* q, int i, int j, int d, double sigma) {
  using std::exp;
  T r2(0.0);
  for (int a = 0; a < d; ++a) {
    const T dx = q[i * d + a] - q[j * d + a];
    r2 += dx * dx;
  }
  return exp(-r2 / (2.0 * sigma));
}

template <class T>
T hamiltonian_flat(const KernelSpec& spec, int n, int d, const T* q, const T* p) {
  T h(0.0);
  if (spec.mode == KernelMode::Full) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        T s(0.0);
        for (int a = 0; a < d; ++a) s += p[i * d + a] * p[j * d + a];
        h += pair_gaussian(q, i, j, d, spec.sigma) * s;
      }
    return 0.5 * h;
  }
  const FrameCache<T> fc(*spec.frame, n, d, q, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      T s(0.0);
      for (int k = 0; k < fc.r; ++k) s += fc.w[i * fc.r + k] * fc.w[j * fc.r + k];
      h += pair_gaussian(q, i, j, d, spec.sigma) * s;
    }
  return 0.5 * h;
}

/// (dq, dp) = (dh/dp, -dh/dq). Landmark i only reads shared inputs and writes row i,
/// summing over j in increasing order, so the parallel loop matches the serial one bitwise.
template <class T>
void phase_field_flat(const KernelSpec& spec, int n, int d, const T* q, const T* p, T* dq, T* dp,
                      Exec exec) {
  const double inv_sigma = 1.0 / spec.sigma;
  if (spec.mode == KernelMode::Full) {
    auto row = [&](int i) {
      for (int a = 0; a < d; ++a) {
        dq[i * d + a] = T(0.0);
        dp[i * d + a] = T(0.0);
      }
      for (int j = 0; j < n; ++j) {
        const T e = pair_gaussian(q, i, j, d, spec.sigma);
        T s(0.0);
        for (int a = 0; a < d; ++a) s += p[i * d + a] * p[j * d + a];
        const T c = inv_sigma * e * s;
        for (int a = 0; a < d; ++a) {
          dq[i * d + a] += e * p[j * d + a];
          dp[i * d + a] += c * (q[i * d + a] - q[j * d + a]);
        }
      }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) row(i);
    } else {
      for (int i = 0; i < n; ++i) row(i);
    }
    return;
  }

  const FrameCache<T> fc(*spec.frame, n, d, q, p);
  const int r = fc.r;
  auto row = [&](int i) {
    std::vector<T> coef(r, T(0.0));  // sum_j e_ij w_jk
    VecN<T> acc_dp(d);
    for (int a = 0; a < d; ++a) acc_dp[a] = T(0.0);
    for (int j = 0; j < n; ++j) {
      const T e = pair_gaussian(q, i, j, d, spec.sigma);
      T s(0.0);
      for (int k = 0; k < r; ++k) {
        coef[k] += e * fc.w[j * r + k];
        s += fc.w[i * r + k] * fc.w[j * r + k];
      }
      const T c = inv_sigma * e * s;
      for (int a = 0; a < d; ++a) acc_dp[a] += c * (q[i * d + a] - q[j * d + a]);
    }
    for (int a = 0; a < d; ++a) {
      T v(0.0);
      T corr(0.0);
      for (int k = 0; k < r; ++k) {
        v += coef[k] * fc.X[i * r + k][a];
        corr += coef[k] * fc.pDX[i * r + k][a];
      }
      dq[i * d + a] = v;
      dp[i * d + a] = acc_dp[a] - corr;
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) row(i);
  } else {
    for (int i = 0; i < n; ++i) row(i);
  }
}

}  // namespace srd::detail
