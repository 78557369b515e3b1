#pragma once

// Forward-mode dual numbers, nestable (Dual<Dual<double>>) for higher derivatives.

#include <Eigen/Core>

#include <cmath>

namespace srd {

template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(double value) : v(value), d(0.0) {}  // NOLINT(google-explicit-constructor)
  template <class U = T>
    requires(!std::is_same_v<U, double>)
  Dual(const T& value) : v(value), d(0.0) {}  // NOLINT(google-explicit-constructor)
  Dual(const T& value, const T& deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
};

template <class T>
Dual<T> operator+(Dual<T> a, const Dual<T>& b) {
  return a += b;
}
template <class T>
Dual<T> operator-(Dual<T> a, const Dual<T>& b) {
  return a -= b;
}
template <class T>
Dual<T> operator*(Dual<T> a, const Dual<T>& b) {
  return a *= b;
}
template <class T>
Dual<T> operator/(Dual<T> a, const Dual<T>& b) {
  return a /= b;
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <class T>
Dual<T> operator+(const Dual<T>& a) {
  return a;
}

template <class T>
Dual<T> operator+(Dual<T> a, double b) {
  a.v += b;
  return a;
}
template <class T>
Dual<T> operator+(double b, Dual<T> a) {
  a.v += b;
  return a;
}
template <class T>
Dual<T> operator-(Dual<T> a, double b) {
  a.v -= b;
  return a;
}
template <class T>
Dual<T> operator-(double b, const Dual<T>& a) {
  return {b - a.v, -a.d};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, double b) {
  return {a.v * b, a.d * b};
}
template <class T>
Dual<T> operator*(double b, const Dual<T>& a) {
  return {a.v * b, a.d * b};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, double b) {
  return {a.v / b, a.d / b};
}

template <class T>
bool operator<(const Dual<T>& a, const Dual<T>& b) {
  return a.v < b.v;
}
template <class T>
bool operator>(const Dual<T>& a, const Dual<T>& b) {
  return a.v > b.v;
}
template <class T>
bool operator==(const Dual<T>& a, const Dual<T>& b) {
  return a.v == b.v && a.d == b.d;
}

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  const T e = exp(a.v);
  return {e, e * a.d};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), cos(a.v) * a.d};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -sin(a.v) * a.d};
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}

/// Value of a (possibly nested) dual number.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

}  // namespace srd

namespace Eigen {
template <class T>
struct NumTraits<srd::Dual<T>> : NumTraits<double> {
  using Real = srd::Dual<T>;
  using NonInteger = srd::Dual<T>;
  using Nested = srd::Dual<T>;
  using Literal = srd::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 4,
    MulCost = 8
  };
};
}  // namespace Eigen
