#include "srd/frame.hpp"

#include <algorithm>
#include <sstream>

namespace srd {

FrameField make_frame(std::string_view id, int dim) {
  FrameField f;
  f.id = std::string(id);
  auto fixed = [&](FrameKind kind, int native, int count, DomainKind dom) {
    if (dim != 0 && dim != native)
      throw ConfigurationError("frame '" + f.id + "' lives in dimension " + std::to_string(native) +
                               ", requested " + std::to_string(dim));
    f.kind = kind;
    f.dim = native;
    f.count = count;
    f.domain = dom;
  };
  if (id == "translation") {
    const int d = dim == 0 ? 2 : dim;
    if (d < 1 || d > kMaxDim) throw ConfigurationError("translation frame dimension out of range");
    f.kind = FrameKind::Translation;
    f.dim = d;
    f.count = d;
    f.domain = DomainKind::Euclidean;
  } else if (id == "heisenberg") {
    fixed(FrameKind::Heisenberg, 3, 2, DomainKind::Euclidean);
  } else if (id == "grushin") {
    fixed(FrameKind::Grushin, 2, 2, DomainKind::Euclidean);
  } else if (id == "torus_sine") {
    fixed(FrameKind::TorusSine, 2, 2, DomainKind::Torus);
  } else {
    throw ConfigurationError("unknown frame id '" + f.id + "'");
  }
  return f;
}

std::vector<std::string> registered_frames() {
  return {"translation", "heisenberg", "grushin", "torus_sine"};
}

namespace {

void check_field(const FrameField& f, int field) {
  if (field < 1 || field > f.count)
    throw InvalidInput("field number " + std::to_string(field) + " outside 1.." +
                       std::to_string(f.count) + " for frame '" + f.id + "'");
}

void check_point(const FrameField& f, const Point& x) {
  if (x.size() != f.dim) throw InvalidInput("point dimension does not match frame '" + f.id + "'");
  if (!all_finite(x)) throw InvalidInput("non-finite point coordinate");
}

template <class T>
VecN<T> values(const VecN<Dual<T>>& v) {
  VecN<T> out(v.size());
  for (Eigen::Index a = 0; a < v.size(); ++a) out[a] = v[a].v;
  return out;
}

template <class T>
VecN<T> derivs(const VecN<Dual<T>>& v) {
  VecN<T> out(v.size());
  for (Eigen::Index a = 0; a < v.size(); ++a) out[a] = v[a].d;
  return out;
}

template <class T>
VecN<T> matvec(const MatN<T>& m, const VecN<T>& v) {
  VecN<T> out(m.rows());
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    T s(0.0);
    for (Eigen::Index b = 0; b < m.cols(); ++b) s += m(a, b) * v[b];
    out[a] = s;
  }
  return out;
}

// Exact X_I: the bracket [X_i, Y] = DY.X_i - DX_i.Y, with DY.X_i taken as a directional
// derivative through one more level of dual numbers.
template <int Depth, class T>
VecN<T> word_field(const FrameField& f, const int* letters, int len, const VecN<T>& x) {
  if (len == 1) return frame_field<T>(f, letters[0], x);
  if constexpr (Depth <= 1) {
    throw UnsupportedDepth("word longer than the exact-evaluation depth");
  } else {
    using D = Dual<T>;
    const VecN<T> xi = frame_field<T>(f, letters[0], x);
    VecN<D> xd(f.dim);
    for (int a = 0; a < f.dim; ++a) xd[a] = D(x[a], xi[a]);
    const VecN<D> y = word_field<Depth - 1, D>(f, letters + 1, len - 1, xd);
    const VecN<T> yv = values(y);
    VecN<T> out = derivs(y);
    const VecN<T> corr = matvec<T>(frame_jacobian<T>(f, letters[0], x), yv);
    for (int a = 0; a < f.dim; ++a) out[a] -= corr[a];
    return out;
  }
}

constexpr int kExactDepthCap = 4;

Point word_field_mixed(const FrameField& f, const int* letters, int len, const Point& x,
                       const BracketOptions& opts) {
  const int exact = std::min(opts.analytic_depth, kExactDepthCap);
  if (len <= exact) return word_field<kExactDepthCap, double>(f, letters, len, x);
  const Point xi = frame_field<double>(f, letters[0], x);
  const double h = opts.fd_step;
  const Point plus = word_field_mixed(f, letters + 1, len - 1, x + h * xi, opts);
  const Point minus = word_field_mixed(f, letters + 1, len - 1, x - h * xi, opts);
  const Point y = word_field_mixed(f, letters + 1, len - 1, x, opts);
  return ((plus - minus) / (2.0 * h) - frame_jacobian<double>(f, letters[0], x) * y).eval();
}

}  // namespace

std::vector<SmallMat> frame_hessian(const FrameField& f, int field, const Point& x) {
  check_field(f, field);
  check_point(f, x);
  using D = Dual<double>;
  std::vector<SmallMat> out(f.dim, SmallMat::Zero(f.dim, f.dim));
  for (int c = 0; c < f.dim; ++c) {
    VecN<D> xd(f.dim);
    for (int a = 0; a < f.dim; ++a) xd[a] = D(x[a], a == c ? 1.0 : 0.0);
    const MatN<D> J = frame_jacobian<D>(f, field, xd);
    for (int a = 0; a < f.dim; ++a)
      for (int b = 0; b < f.dim; ++b) out[a](b, c) = J(a, b).d;
  }
  return out;
}

std::vector<Point> eval_frame(const FrameField& f, const Point& x) {
  check_point(f, x);
  std::vector<Point> out;
  out.reserve(f.count);
  for (int k = 1; k <= f.count; ++k) out.push_back(frame_field<double>(f, k, x));
  return out;
}

Point lie_bracket(const FrameField& f, int i, int j, const Point& x) {
  check_field(f, i);
  check_field(f, j);
  check_point(f, x);
  const Point xi = frame_field<double>(f, i, x);
  const Point xj = frame_field<double>(f, j, x);
  const Point a = frame_jacobian<double>(f, j, x) * xi;
  const Point b = frame_jacobian<double>(f, i, x) * xj;
  return a - b;
}

std::string BracketWord::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < letters.size(); ++k) os << (k ? "," : "") << letters[k];
  os << ')';
  return os.str();
}

Point iterated_bracket(const FrameField& f, const BracketWord& word, const Point& x,
                       const BracketOptions& opts) {
  if (word.letters.empty()) throw InvalidInput("empty bracket word");
  for (int l : word.letters) check_field(f, l);
  check_point(f, x);
  const int limit = std::min(opts.analytic_depth, kExactDepthCap) + opts.fd_extra_depth;
  if (word.length() > limit)
    throw UnsupportedDepth("bracket word " + word.to_string() + " exceeds supported depth " +
                           std::to_string(limit));
  return word_field_mixed(f, word.letters.data(), word.length(), x, opts);
}

int numerical_rank(const Eigen::MatrixXd& columns) {
  if (columns.cols() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double thresh = 1e-8 * s[0];
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s[k] > thresh) ++r;
  return r;
}

RankResult bracket_generating_rank(const FrameField& f, const Point& x, int max_depth,
                                   const BracketOptions& opts) {
  if (max_depth < 1) throw InvalidInput("max_depth must be >= 1");
  check_point(f, x);
  RankResult res;
  Eigen::MatrixXd selected(f.dim, 0);
  for (int len = 1; len <= max_depth && res.rank < f.dim; ++len) {
    // Odometer over {1..r}^len gives lexicographic order.
    std::vector<int> letters(len, 1);
    while (true) {
      const BracketWord w{letters};
      const Point v = iterated_bracket(f, w, x, opts);
      Eigen::MatrixXd trial(f.dim, selected.cols() + 1);
      trial << selected, v;
      const int r = numerical_rank(trial);
      if (r > res.rank) {
        selected = trial;
        res.rank = r;
        res.families.push_back(w);
        if (res.rank == f.dim) break;
      }
      int pos = len - 1;
      while (pos >= 0 && letters[pos] == f.count) letters[pos--] = 1;
      if (pos < 0) break;
      ++letters[pos];
    }
  }
  return res;
}

}  // namespace srd
