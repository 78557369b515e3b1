#include "srd/kernel.hpp"

#include <cmath>

namespace srd {

KernelSpec KernelSpec::full(double sigma) {
  KernelSpec s;
  s.sigma = sigma;
  s.validate();
  return s;
}

KernelSpec KernelSpec::constrained(double sigma, std::string_view frame_id, int dim) {
  KernelSpec s;
  s.sigma = sigma;
  s.mode = KernelMode::FrameConstrained;
  s.frame = make_frame(frame_id, dim);
  s.validate();
  return s;
}

void KernelSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("kernel sigma must be positive");
  if (mode == KernelMode::FrameConstrained) {
    if (!frame) throw ConfigurationError("frame-constrained kernel without a registered frame");
    if (frame->count < 1) throw ConfigurationError("frame has no fields");
  }
}

void DiracMomentum::validate() const {
  if (points.empty()) throw InvalidInput("Dirac momentum needs at least one point");
  if (covectors.size() != points.size()) throw InvalidInput("points and covectors differ in count");
  require_distinct(points);
  for (const auto& p : covectors) {
    if (p.size() != points.front().size()) throw InvalidInput("covector dimension mismatch");
    if (!all_finite(p)) throw InvalidInput("non-finite covector");
  }
}

double gaussian_scalar(const Point& x, const Point& y, double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  if (x.size() != y.size()) throw InvalidInput("dimension mismatch");
  if (!all_finite(x) || !all_finite(y)) throw InvalidInput("non-finite coordinate");
  return gaussian_t<double>(x, y, sigma);
}

namespace {

void check_dims(const KernelSpec& spec, Eigen::Index d) {
  if (spec.frame && spec.mode == KernelMode::FrameConstrained && spec.frame->dim != d)
    throw ConfigurationError("kernel frame '" + spec.frame->id + "' has dimension " +
                             std::to_string(spec.frame->dim) + ", data has " + std::to_string(d));
}

}  // namespace

Point kernel_apply(const KernelSpec& spec, const Point& x, const Point& y, const Point& p) {
  spec.validate();
  if (x.size() != y.size() || p.size() != x.size()) throw InvalidInput("dimension mismatch");
  check_dims(spec, x.size());
  const double e = gaussian_scalar(x, y, spec.sigma);
  if (spec.mode == KernelMode::Full) return e * p;
  Point out = Point::Zero(x.size());
  for (int k = 1; k <= spec.frame->count; ++k) {
    const double w = p.dot(frame_field<double>(*spec.frame, k, y));
    out += (e * w) * frame_field<double>(*spec.frame, k, x);
  }
  return out;
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Points& points, Exec exec) {
  spec.validate();
  require_distinct(points);
  const int n = static_cast<int>(points.size());
  const int d = static_cast<int>(points.front().size());
  check_dims(spec, d);

  // Frame values at every point, reused by all blocks.
  std::vector<std::vector<Point>> fv;
  if (spec.mode == KernelMode::FrameConstrained) {
    fv.resize(n);
    for (int i = 0; i < n; ++i) fv[i] = eval_frame(*spec.frame, points[i]);
  }

  Eigen::MatrixXd G(n * d, n * d);
  auto fill_row = [&](int i) {
    for (int j = 0; j < n; ++j) {
      const double e = gaussian_t<double>(points[i], points[j], spec.sigma);
      auto blk = G.block(i * d, j * d, d, d);
      if (spec.mode == KernelMode::Full) {
        blk.setIdentity();
        blk *= e;
      } else {
        // scale after summing so block (j, i) is the exact transpose of (i, j)
        blk.setZero();
        for (std::size_t k = 0; k < fv[i].size(); ++k) blk += fv[i][k] * fv[j][k].transpose();
        blk *= e;
      }
    }
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) fill_row(i);
  } else {
    for (int i = 0; i < n; ++i) fill_row(i);
  }
  return G;
}

double rkhs_norm_sq(const KernelSpec& spec, const DiracMomentum& mom) {
  spec.validate();
  mom.validate();
  check_dims(spec, mom.dim());
  const int n = mom.size();
  double s = 0.0;
  if (spec.mode == KernelMode::Full) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += gaussian_t<double>(mom.points[i], mom.points[j], spec.sigma) *
             mom.covectors[i].dot(mom.covectors[j]);
    return s;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s += mom.covectors[i].dot(kernel_apply(spec, mom.points[i], mom.points[j], mom.covectors[j]));
  return s;
}

}  // namespace srd
