#pragma once

/// Box domains, uniform sample grids, quadrature and cubic interpolation.

#include <functional>

#include "ultraglab/common.hpp"

namespace ultraglab {

/// Axis-aligned box with per-axis power-of-two sample counts.
/// Grid points are x_j = lo + j*dx, j = 0..n-1 (right endpoint excluded),
/// the layout assumed by the discrete Fourier transform convention.
struct Box {
  int dim = 1;
  std::array<double, 2> lo{-1.0, -1.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<int, 2> n{16, 16};

  static Box make1d(double lo, double hi, int n) {
    Box b;
    b.dim = 1;
    b.lo = {lo, 0.0};
    b.hi = {hi, 0.0};
    b.n = {n, 1};
    b.validate();
    return b;
  }

  static Box make2d(double lo0, double hi0, int n0, double lo1, double hi1, int n1) {
    Box b;
    b.dim = 2;
    b.lo = {lo0, lo1};
    b.hi = {hi0, hi1};
    b.n = {n0, n1};
    b.validate();
    return b;
  }

  void validate() const {
    if (dim != 1 && dim != 2) throw GeometryError("Box: dim must be 1 or 2");
    for (int ax = 0; ax < dim; ++ax) {
      if (!(lo[ax] < hi[ax])) throw GeometryError("Box: lo must be < hi");
      if (!is_power_of_two(n[ax])) throw GeometryError("Box: n must be a power of two");
    }
  }

  double dx(int ax) const { return (hi[ax] - lo[ax]) / n[ax]; }
  double coord(int ax, int j) const { return lo[ax] + j * dx(ax); }
  long total_samples() const { return dim == 1 ? n[0] : long(n[0]) * n[1]; }

  Point point_at(long flat) const {
    if (dim == 1) return {coord(0, int(flat)), 0.0};
    const int j1 = int(flat % n[1]);
    const int j0 = int(flat / n[1]);
    return {coord(0, j0), coord(1, j1)};
  }

  bool contains(const Point& p) const {
    for (int ax = 0; ax < dim; ++ax)
      if (p[ax] < lo[ax] || p[ax] > hi[ax]) return false;
    return true;
  }

  bool contains(const Box& inner) const {
    if (inner.dim != dim) return false;
    for (int ax = 0; ax < dim; ++ax)
      if (inner.lo[ax] < lo[ax] || inner.hi[ax] > hi[ax]) return false;
    return true;
  }

  /// Intersection; empty boxes collapse to a degenerate sliver around lo.
  static Box intersect(const Box& a, const Box& b) {
    Box r = a;
    for (int ax = 0; ax < a.dim; ++ax) {
      r.lo[ax] = std::max(a.lo[ax], b.lo[ax]);
      r.hi[ax] = std::min(a.hi[ax], b.hi[ax]);
      if (r.hi[ax] <= r.lo[ax]) r.hi[ax] = r.lo[ax] + 1e-12;
    }
    return r;
  }
};

/// Trapezoid rule over samples on a Box grid (left-endpoint grid, so the
/// missing right endpoint is weighted as if the function continued by 0;
/// integrands here are compactly supported well inside the box).
inline double trapezoid(const Box& box, const std::vector<double>& samples) {
  double s = 0.0;
  for (double v : samples) s += v;
  double cell = box.dx(0);
  if (box.dim == 2) cell *= box.dx(1);
  return s * cell;
}

inline cplx trapezoid(const Box& box, const std::vector<cplx>& samples) {
  cplx s = 0.0;
  for (const cplx& v : samples) s += v;
  double cell = box.dx(0);
  if (box.dim == 2) cell *= box.dx(1);
  return s * cell;
}

namespace detail {

/// Catmull-Rom on 4 equispaced samples; t in [0,1] between p1 and p2.
inline double cubic_kernel(double p0, double p1, double p2, double p3, double t) {
  const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
  const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
  const double c = -0.5 * p0 + 0.5 * p2;
  return ((a * t + b) * t + c) * t + p1;
}

inline cplx cubic_kernel(cplx p0, cplx p1, cplx p2, cplx p3, double t) {
  return {cubic_kernel(p0.real(), p1.real(), p2.real(), p3.real(), t),
          cubic_kernel(p0.imag(), p1.imag(), p2.imag(), p3.imag(), t)};
}

}  // namespace detail

/// Cubic interpolation of samples living on a 1D Box grid. Outside the box
/// the samples are extended by zero (all interpolands are compactly
/// supported inside their box).
inline cplx interp_cubic_1d(const Box& box, const std::vector<cplx>& samples, double x) {
  const double dx = box.dx(0);
  const double u = (x - box.lo[0]) / dx;
  const int n = box.n[0];
  if (u < -1.0 || u > double(n)) return 0.0;
  const int j = int(std::floor(u));
  const double t = u - j;
  auto at = [&](int idx) -> cplx {
    return (idx < 0 || idx >= n) ? cplx(0.0) : samples[idx];
  };
  return detail::cubic_kernel(at(j - 1), at(j), at(j + 1), at(j + 2), t);
}

/// Separable bicubic interpolation on a 2D Box grid (row-major, axis 1 fast).
inline cplx interp_cubic_2d(const Box& box, const std::vector<cplx>& samples, const Point& p) {
  const int n0 = box.n[0], n1 = box.n[1];
  const double u0 = (p[0] - box.lo[0]) / box.dx(0);
  const double u1 = (p[1] - box.lo[1]) / box.dx(1);
  if (u0 < -1.0 || u0 > double(n0) || u1 < -1.0 || u1 > double(n1)) return 0.0;
  const int j0 = int(std::floor(u0));
  const int j1 = int(std::floor(u1));
  const double t0 = u0 - j0, t1 = u1 - j1;
  auto at = [&](int i0, int i1) -> cplx {
    if (i0 < 0 || i0 >= n0 || i1 < 0 || i1 >= n1) return 0.0;
    return samples[long(i0) * n1 + i1];
  };
  cplx rows[4];
  for (int r = 0; r < 4; ++r) {
    const int i0 = j0 - 1 + r;
    rows[r] = detail::cubic_kernel(at(i0, j1 - 1), at(i0, j1), at(i0, j1 + 1), at(i0, j1 + 2), t1);
  }
  return detail::cubic_kernel(rows[0], rows[1], rows[2], rows[3], t0);
}

inline cplx interp_cubic(const Box& box, const std::vector<cplx>& samples, const Point& p) {
  return box.dim == 1 ? interp_cubic_1d(box, samples, p[0]) : interp_cubic_2d(box, samples, p);
}

}  // namespace ultraglab
