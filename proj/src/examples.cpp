#include "srd/examples.hpp"

#include <cmath>
#include <numbers>

namespace srd {

Point DeterministicRng::uniform_point(int d, double lo, double hi) {
  Point x(d);
  for (int a = 0; a < d; ++a) x[a] = uniform(lo, hi);
  return x;
}

Points random_landmarks(DeterministicRng& rng, int n, int d, double lo, double hi, double min_sep) {
  Points pts;
  int attempts = 0;
  while (static_cast<int>(pts.size()) < n) {
    if (++attempts > 100000) throw InvalidInput("cannot place landmarks with the requested separation");
    const Point x = rng.uniform_point(d, lo, hi);
    bool ok = true;
    for (const auto& y : pts) ok = ok && (x - y).norm() >= min_sep;
    if (ok) pts.push_back(x);
  }
  return pts;
}

namespace {

LandmarkState ring(int n, int d, double radius, double speed, DeterministicRng& rng) {
  LandmarkState s;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    Point q = Point::Zero(d);
    Point p = Point::Zero(d);
    q[0] = radius * std::cos(th);
    q[1] = radius * std::sin(th);
    p[0] = -speed * std::sin(th) + rng.uniform(-0.1, 0.1);
    p[1] = speed * std::cos(th) + rng.uniform(-0.1, 0.1);
    if (d == 3) {
      q[2] = rng.uniform(-0.1, 0.1);
      p[2] = rng.uniform(-0.2, 0.2);
    }
    s.q.push_back(q);
    s.p.push_back(p);
  }
  return s;
}

// Mostly outward momenta: random inward pairs tend to collapse onto each other with
// exponentially growing momenta, which no fixed step survives on long horizons.
LandmarkState scattered(int n, int d, double half_width, double min_sep, double pmax, DeterministicRng& rng) {
  LandmarkState s;
  s.q = random_landmarks(rng, n, d, -half_width, half_width, min_sep);
  for (int i = 0; i < n; ++i) s.p.push_back((0.3 * s.q[i] + rng.uniform_point(d, -pmax, pmax)).eval());
  return s;
}

}  // namespace

std::vector<LandmarkExample> bundled_examples() {
  std::vector<LandmarkExample> out;
  {
    LandmarkState s;
    s.q = {make_point({-0.5, 0.0}), make_point({0.5, 0.0})};
    s.p = {make_point({0.4, 0.3}), make_point({-0.2, 0.4})};
    out.push_back({"pair_full", KernelSpec::full(0.5), s});
  }
  {
    DeterministicRng rng(5);
    out.push_back({"five_full", KernelSpec::full(0.3), ring(5, 2, 0.6, 0.4, rng)});
  }
  {
    DeterministicRng rng(20);
    out.push_back({"twenty_full", KernelSpec::full(0.1), scattered(20, 2, 1.0, 0.2, 0.1, rng)});
  }
  {
    LandmarkState s;
    s.q = {make_point({-0.4, 0.0, 0.0}), make_point({0.4, 0.1, 0.0})};
    s.p = {make_point({0.5, 0.3, 0.2}), make_point({-0.4, 0.2, -0.3})};
    out.push_back({"pair_heisenberg", KernelSpec::constrained(0.5, "heisenberg"), s});
  }
  {
    DeterministicRng rng(55);
    out.push_back({"five_heisenberg", KernelSpec::constrained(0.3, "heisenberg"), ring(5, 3, 0.5, 0.4, rng)});
  }
  {
    DeterministicRng rng(2020);
    out.push_back(
        {"twenty_heisenberg", KernelSpec::constrained(0.1, "heisenberg"), scattered(20, 3, 0.8, 0.25, 0.1, rng)});
  }
  return out;
}

std::vector<std::string> bundled_example_names() {
  std::vector<std::string> names;
  for (const auto& e : bundled_examples()) names.push_back(e.name);
  return names;
}

LandmarkExample bundled_example(const std::string& name) {
  for (auto& e : bundled_examples())
    if (e.name == name) return e;
  throw ConfigurationError("unknown bundled example '" + name + "'");
}

std::vector<MatchExample> bundled_matches() {
  std::vector<MatchExample> out;
  {
    MatchProblem m;
    m.q0 = {make_point({0.0})};
    m.q_target = {make_point({1.0})};
    m.spec = KernelSpec::full(1.0);
    m.lambda = 1.0;
    out.push_back({"line_1d", m});
  }
  {
    MatchProblem m;
    m.q0 = {make_point({-0.5, 0.0}), make_point({0.5, 0.0})};
    m.q_target = {make_point({0.5, 0.3}), make_point({-0.5, -0.3})};
    m.spec = KernelSpec::full(0.5);
    m.lambda = 10.0;
    out.push_back({"crossing_pair", m});
  }
  {
    const LandmarkExample e = bundled_example("five_full");
    MatchProblem m;
    m.q0 = e.state.q;
    for (const auto& q : e.state.q) {
      Point t = 1.2 * q;
      t[1] += 0.1;
      m.q_target.push_back(t);
    }
    m.spec = e.spec;
    m.lambda = 1.0;
    out.push_back({"five_full", m});
  }
  return out;
}

MatchExample bundled_match(const std::string& name) {
  for (auto& e : bundled_matches())
    if (e.name == name) return e;
  throw ConfigurationError("unknown bundled match '" + name + "'");
}

}  // namespace srd
