#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace srd {

inline constexpr const char* kVersion = "0.3.0";

/// Largest ambient dimension supported by the small fixed-capacity types.
inline constexpr int kMaxDim = 4;

template <class T>
using VecN = Eigen::Matrix<T, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
template <class T>
using MatN = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// A position in R^d or T^d. Covectors use the same storage and are read as rows.
using Point = VecN<double>;
using SmallMat = MatN<double>;
using Points = std::vector<Point>;

/// Execution policy for the data-parallel kernels. `Serial` is the reference path.
enum class Exec { Serial, Parallel };

// Error hierarchy. Every library failure derives from srd::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
  using Error::Error;
};
class ConfigurationError : public Error {
  using Error::Error;
};
class DegenerateConfiguration : public Error {
  using Error::Error;
};
class DegenerateCovector : public Error {
  using Error::Error;
};
class UnsupportedDepth : public Error {
  using Error::Error;
};
class OrientationError : public Error {
  using Error::Error;
};
class OutOfChart : public Error {
  using Error::Error;
};
class IncompatibleRhs : public Error {
  using Error::Error;
};
class NotConverged : public Error {
  using Error::Error;
};
class PreconditionError : public Error {
  using Error::Error;
};

Point make_point(std::initializer_list<double> xs);
Point make_point(const std::vector<double>& xs);
std::vector<double> to_std(const Point& p);

bool all_finite(const Point& p);

/// Throws DegenerateConfiguration when two points are closer than
/// 1e-10 * (1 + max |x|), InvalidInput on non-finite coordinates or mixed dimensions.
void require_distinct(const Points& points);

}  // namespace srd
