#pragma once

// Samples on a regular periodic grid of the unit torus T^d = [0,1)^d.

#include "srd/core.hpp"
#include "srd/frame.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace srd {

struct GridField {
  int N = 0;           // nodes per axis
  int d = 0;           // dimension
  int components = 1;  // 1 for scalars, d for vector fields
  DomainKind domain = DomainKind::Torus;
  std::vector<double> values;  // node-major, components interleaved

  GridField() = default;
  GridField(int N, int d, int components = 1);

  static GridField scalar(int N, int d, const std::function<double(const Point&)>& fn);

  std::size_t nodes() const;
  double spacing() const { return 1.0 / N; }
  double cell_volume() const;
  double& at(std::size_t node, int comp = 0) { return values[node * components + comp]; }
  double at(std::size_t node, int comp = 0) const { return values[node * components + comp]; }
  Point node_position(std::size_t node) const;
  std::vector<Point> node_positions() const;

  double sum() const;
  double min() const;
  bool same_shape(const GridField& o) const;
};

/// Neighbor table: plus[a][n] / minus[a][n] are the periodic neighbors of node n along axis a.
struct GridStencil {
  int N = 0;
  int d = 0;
  std::vector<std::vector<std::size_t>> plus;
  std::vector<std::vector<std::size_t>> minus;

  GridStencil(int N, int d);
};

struct InterpSample {
  double value = 0.0;
  Point grad;
};

/// Periodic tensor-product cubic convolution (Catmull-Rom) of one component, with its
/// exact gradient. Positions outside [0,1)^d are wrapped.
InterpSample interpolate_cubic(const GridField& g, int comp, const Point& x);

/// Diagnostic only: bilinear scatter of point masses onto the grid (values are densities).
GridField scatter_bilinear(int N, const std::vector<Point>& positions, const std::vector<double>& masses);

/// Header line `N=<N>,d=<d>,domain=torus,components=<c>`, then one line per row of the last axis.
void write_grid_csv(std::ostream& os, const GridField& g);
GridField read_grid_csv(std::istream& is);

}  // namespace srd
