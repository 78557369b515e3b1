#include "srd/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace srd {

GridField::GridField(int N_, int d_, int components_) : N(N_), d(d_), components(components_) {
  if (N < 2) throw InvalidInput("grid needs at least 2 nodes per axis");
  if (d < 1 || d > 3) throw InvalidInput("grid dimension must be 1, 2 or 3");
  if (components < 1) throw InvalidInput("grid needs at least one component");
  values.assign(nodes() * components, 0.0);
}

GridField GridField::scalar(int N, int d, const std::function<double(const Point&)>& fn) {
  GridField g(N, d, 1);
  for (std::size_t n = 0; n < g.nodes(); ++n) g.values[n] = fn(g.node_position(n));
  return g;
}

std::size_t GridField::nodes() const {
  std::size_t m = 1;
  for (int a = 0; a < d; ++a) m *= static_cast<std::size_t>(N);
  return m;
}

double GridField::cell_volume() const { return std::pow(spacing(), d); }

Point GridField::node_position(std::size_t node) const {
  Point x(d);
  for (int a = d - 1; a >= 0; --a) {
    x[a] = static_cast<double>(node % N) / N;
    node /= N;
  }
  return x;
}

std::vector<Point> GridField::node_positions() const {
  std::vector<Point> out;
  out.reserve(nodes());
  for (std::size_t n = 0; n < nodes(); ++n) out.push_back(node_position(n));
  return out;
}

double GridField::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double GridField::min() const { return *std::min_element(values.begin(), values.end()); }

bool GridField::same_shape(const GridField& o) const {
  return N == o.N && d == o.d && components == o.components;
}

GridStencil::GridStencil(int N_, int d_) : N(N_), d(d_), plus(d_), minus(d_) {
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(N);
  std::vector<std::size_t> stride(d);
  std::size_t s = 1;
  for (int a = d - 1; a >= 0; --a) {
    stride[a] = s;
    s *= static_cast<std::size_t>(N);
  }
  for (int a = 0; a < d; ++a) {
    plus[a].resize(total);
    minus[a].resize(total);
    for (std::size_t n = 0; n < total; ++n) {
      const std::size_t ia = (n / stride[a]) % N;
      const std::size_t base = n - ia * stride[a];
      plus[a][n] = base + ((ia + 1) % N) * stride[a];
      minus[a][n] = base + ((ia + N - 1) % N) * stride[a];
    }
  }
}

namespace {

// Catmull-Rom weights for offsets -1, 0, 1, 2 and their derivatives in s.
void cubic_weights(double s, std::array<double, 4>& w, std::array<double, 4>& dw) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  w = {0.5 * (-s3 + 2 * s2 - s), 0.5 * (3 * s3 - 5 * s2 + 2), 0.5 * (-3 * s3 + 4 * s2 + s),
       0.5 * (s3 - s2)};
  dw = {0.5 * (-3 * s2 + 4 * s - 1), 0.5 * (9 * s2 - 10 * s), 0.5 * (-9 * s2 + 8 * s + 1),
        0.5 * (3 * s2 - 2 * s)};
}

}  // namespace

InterpSample interpolate_cubic(const GridField& g, int comp, const Point& x) {
  const int d = g.d;
  const int N = g.N;
  std::array<int, 3> base{};
  std::array<std::array<double, 4>, 3> w{}, dw{};
  for (int a = 0; a < d; ++a) {
    const double u = x[a] * N;
    const double fl = std::floor(u);
    cubic_weights(u - fl, w[a], dw[a]);
    base[a] = static_cast<int>(((static_cast<long long>(fl) % N) + N) % N);
  }
  InterpSample out;
  out.grad = Point::Zero(d);
  const int count = d == 1 ? 4 : d == 2 ? 16 : 64;
  for (int c = 0; c < count; ++c) {
    std::size_t node = 0;
    double wt = 1.0;
    int cc = c;
    std::array<int, 3> off{};
    for (int a = d - 1; a >= 0; --a) {
      off[a] = cc % 4;
      cc /= 4;
    }
    for (int a = 0; a < d; ++a) {
      const int ia = (base[a] + off[a] - 1 + N) % N;
      node = node * N + static_cast<std::size_t>(ia);
      wt *= w[a][off[a]];
    }
    const double v = g.at(node, comp);
    out.value += wt * v;
    for (int a = 0; a < d; ++a) {
      double gw = dw[a][off[a]] * N;
      for (int b = 0; b < d; ++b)
        if (b != a) gw *= w[b][off[b]];
      out.grad[a] += gw * v;
    }
  }
  return out;
}

GridField scatter_bilinear(int N, const std::vector<Point>& positions, const std::vector<double>& masses) {
  if (positions.empty()) throw InvalidInput("no particles to scatter");
  const int d = static_cast<int>(positions.front().size());
  GridField g(N, d, 1);
  const double inv_vol = 1.0 / g.cell_volume();
  const int corners = 1 << d;
  for (std::size_t s = 0; s < positions.size(); ++s) {
    std::array<int, 3> base{};
    std::array<double, 3> frac{};
    for (int a = 0; a < d; ++a) {
      const double u = positions[s][a] * N;
      const double fl = std::floor(u);
      frac[a] = u - fl;
      base[a] = static_cast<int>(((static_cast<long long>(fl) % N) + N) % N);
    }
    for (int c = 0; c < corners; ++c) {
      std::size_t node = 0;
      double wt = 1.0;
      for (int a = 0; a < d; ++a) {
        const int bit = (c >> (d - 1 - a)) & 1;
        node = node * N + static_cast<std::size_t>((base[a] + bit) % N);
        wt *= bit ? frac[a] : 1.0 - frac[a];
      }
      g.values[node] += wt * masses[s] * inv_vol;
    }
  }
  return g;
}

void write_grid_csv(std::ostream& os, const GridField& g) {
  os << "N=" << g.N << ",d=" << g.d << ",domain=torus,components=" << g.components << '\n';
  os << std::setprecision(17);
  const std::size_t row = static_cast<std::size_t>(g.N) * g.components;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    os << g.values[k];
    os << (((k + 1) % row == 0) ? '\n' : ',');
  }
}

GridField read_grid_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw InvalidInput("empty grid file");
  int N = 0, d = 0, comps = 1;
  std::string domain;
  {
    std::stringstream ss(header);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw InvalidInput("malformed grid header '" + header + "'");
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "N")
        N = std::stoi(val);
      else if (key == "d")
        d = std::stoi(val);
      else if (key == "components")
        comps = std::stoi(val);
      else if (key == "domain")
        domain = val;
    }
  }
  if (domain != "torus") throw InvalidInput("grid domain must be torus");
  GridField g(N, d, comps);
  std::size_t k = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (k >= g.values.size()) throw InvalidInput("too many grid values");
      g.values[k++] = std::stod(tok);
    }
  }
  if (k != g.values.size()) throw InvalidInput("too few grid values");
  return g;
}

}  // namespace srd
