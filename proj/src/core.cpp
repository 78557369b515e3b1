#include "srd/core.hpp"

#include <algorithm>
#include <cmath>

namespace srd {

Point make_point(std::initializer_list<double> xs) {
  return make_point(std::vector<double>(xs));
}

Point make_point(const std::vector<double>& xs) {
  if (xs.empty() || static_cast<int>(xs.size()) > kMaxDim)
    throw InvalidInput("point dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  Point p(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t a = 0; a < xs.size(); ++a) p[static_cast<Eigen::Index>(a)] = xs[a];
  return p;
}

std::vector<double> to_std(const Point& p) { return {p.data(), p.data() + p.size()}; }

bool all_finite(const Point& p) {
  return std::all_of(p.data(), p.data() + p.size(), [](double v) { return std::isfinite(v); });
}

void require_distinct(const Points& points) {
  if (points.empty()) throw InvalidInput("at least one point is required");
  const auto d = points.front().size();
  double scale = 0.0;
  for (const auto& x : points) {
    if (x.size() != d) throw InvalidInput("points have mixed dimensions");
    if (!all_finite(x)) throw InvalidInput("non-finite point coordinate");
    scale = std::max(scale, x.norm());
  }
  const double tol = 1e-10 * (1.0 + scale);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if ((points[i] - points[j]).norm() < tol)
        throw DegenerateConfiguration("points " + std::to_string(i) + " and " + std::to_string(j) +
                                      " coincide");
}

}  // namespace srd
