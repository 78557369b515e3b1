#pragma once

// Closed registry of analytic frames X_1..X_r with closed-form Jacobians,
// pointwise Lie brackets, iterated brackets and the bracket-generating rank.
//
// Field numbers are 1-based everywhere in the public API, matching the
// letters of a BracketWord.

#include "srd/core.hpp"
#include "srd/dual.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace srd {

enum class FrameKind { Translation, Heisenberg, Grushin, TorusSine };
enum class DomainKind { Euclidean, Torus };

struct FrameField {
  std::string id;
  FrameKind kind = FrameKind::Translation;
  int dim = 0;
  int count = 0;
  DomainKind domain = DomainKind::Euclidean;

  /// True when every field is 1-periodic in each coordinate, i.e. the frame descends to T^d.
  bool periodic() const { return kind == FrameKind::Translation || kind == FrameKind::TorusSine; }
};

/// Registered ids: "translation" (any dim in [1, kMaxDim]), "heisenberg" (R^3),
/// "grushin" (R^2), "torus_sine" (T^2). `dim` = 0 selects the frame's native dimension
/// (translation then defaults to 2). Unknown ids or a dimension mismatch throw
/// ConfigurationError.
FrameField make_frame(std::string_view id, int dim = 0);
std::vector<std::string> registered_frames();

template <class T>
VecN<T> frame_field(const FrameField& f, int field, const VecN<T>& x) {
  using std::sin;
  VecN<T> v(f.dim);
  for (int a = 0; a < f.dim; ++a) v[a] = T(0.0);
  switch (f.kind) {
    case FrameKind::Translation:
      v[field - 1] = T(1.0);
      break;
    case FrameKind::Heisenberg:
      if (field == 1) {
        v[0] = T(1.0);
      } else {
        v[1] = T(1.0);
        v[2] = x[0];
      }
      break;
    case FrameKind::Grushin:
      if (field == 1)
        v[0] = T(1.0);
      else
        v[1] = x[0];
      break;
    case FrameKind::TorusSine:
      if (field == 1)
        v[0] = T(1.0);
      else
        v[1] = sin(2.0 * std::numbers::pi * x[0]);
      break;
  }
  return v;
}

/// Closed-form Jacobian DX_field(x), entry (a, b) = dX^a / dx_b.
template <class T>
MatN<T> frame_jacobian(const FrameField& f, int field, const VecN<T>& x) {
  using std::cos;
  MatN<T> J(f.dim, f.dim);
  for (int a = 0; a < f.dim; ++a)
    for (int b = 0; b < f.dim; ++b) J(a, b) = T(0.0);
  switch (f.kind) {
    case FrameKind::Translation:
      break;
    case FrameKind::Heisenberg:
      if (field == 2) J(2, 0) = T(1.0);
      break;
    case FrameKind::Grushin:
      if (field == 2) J(1, 0) = T(1.0);
      break;
    case FrameKind::TorusSine:
      if (field == 2) J(1, 0) = 2.0 * std::numbers::pi * cos(2.0 * std::numbers::pi * x[0]);
      break;
  }
  return J;
}

/// Second derivatives: result[a](b, c) = d^2 X^a / dx_b dx_c.
std::vector<SmallMat> frame_hessian(const FrameField& f, int field, const Point& x);

/// [X_1(x), ..., X_r(x)].
std::vector<Point> eval_frame(const FrameField& f, const Point& x);

/// [X_i, X_j](x) = DX_j(x) X_i(x) - DX_i(x) X_j(x).
Point lie_bracket(const FrameField& f, int i, int j, const Point& x);

/// Right-nested bracket word I = (i_1, ..., i_j), X_I = [X_{i_1}, [..., [X_{i_{j-1}}, X_{i_j}]...]].
struct BracketWord {
  std::vector<int> letters;

  BracketWord() = default;
  BracketWord(std::initializer_list<int> l) : letters(l) {}
  explicit BracketWord(std::vector<int> l) : letters(std::move(l)) {}

  int length() const { return static_cast<int>(letters.size()); }
  std::string to_string() const;
  friend bool operator==(const BracketWord&, const BracketWord&) = default;
};

struct BracketOptions {
  /// Words up to this length are evaluated exactly (nested forward-mode derivatives).
  int analytic_depth = 4;
  /// Beyond analytic_depth, up to this many further levels use nested central differences.
  int fd_extra_depth = 2;
  double fd_step = 1e-4;
};

/// X_I(x). Throws UnsupportedDepth beyond analytic_depth + fd_extra_depth,
/// InvalidInput for an empty word or an out-of-range letter.
Point iterated_bracket(const FrameField& f, const BracketWord& word, const Point& x,
                       const BracketOptions& opts = {});

struct RankResult {
  int rank = 0;
  std::vector<BracketWord> families;
};

/// Greedy span of bracket words of length <= max_depth, enumerated by length and
/// lexicographically within a length. rank < dim means not bracket-generating at this depth.
RankResult bracket_generating_rank(const FrameField& f, const Point& x, int max_depth,
                                   const BracketOptions& opts = {});

/// Numerical rank with threshold 1e-8 * largest singular value.
int numerical_rank(const Eigen::MatrixXd& columns);

}  // namespace srd
