#pragma once

/// Windowed Fourier analysis: cone partitions of frequency directions,
/// geometric |xi| shells, and per-(bin, shell) magnitude profiles that feed
/// the two-scale decay fits.

#include "ultraglab/builtins.hpp"

namespace ultraglab {

struct DirectionBin {
  int id = 0;
  double theta_lo = 0.0;  ///< radians; 1D uses sign bins instead
  double theta_hi = 0.0;
  int sign = +1;          ///< 1D: +1 or -1
};

struct ConePartition {
  int dim = 1;
  std::vector<DirectionBin> bins;

  int bin_count() const { return int(bins.size()); }

  /// Bin containing direction xi (nonzero).
  int bin_of(const Point& xi) const {
    if (dim == 1) return xi[0] >= 0.0 ? 0 : 1;
    double th = std::atan2(xi[1], xi[0]);
    if (th < 0.0) th += 2.0 * kPi;
    int b = int(th / (2.0 * kPi) * bins.size());
    if (b >= int(bins.size())) b = 0;
    return b;
  }

  /// Central direction of a bin (unit vector).
  Point bin_center(int id) const {
    if (dim == 1) return {bins[id].sign > 0 ? 1.0 : -1.0, 0.0};
    const double th = 0.5 * (bins[id].theta_lo + bins[id].theta_hi);
    return {std::cos(th), std::sin(th)};
  }
};

inline ConePartition cone_partition(int dim, int bin_count) {
  ConePartition part;
  part.dim = dim;
  if (dim == 1) {
    if (bin_count != 2) throw BadBinCount("cone_partition: 1D uses exactly 2 bins");
    part.bins = {{0, 0.0, 0.0, +1}, {1, 0.0, 0.0, -1}};
    return part;
  }
  if (dim == 2) {
    if (bin_count != 8 && bin_count != 16 && bin_count != 32)
      throw BadBinCount("cone_partition: 2D bin count must be 8, 16 or 32");
    const double d = 2.0 * kPi / bin_count;
    for (int b = 0; b < bin_count; ++b) part.bins.push_back({b, b * d, (b + 1) * d, +1});
    return part;
  }
  throw BadBinCount("cone_partition: dim must be 1 or 2");
}

/// Geometric |xi| shells between the low-frequency exclusion and 0.8 of the
/// dual-grid maximum; ratio sqrt(2).
struct ShellSet {
  std::vector<std::pair<double, double>> bounds;

  static ShellSet standard(const Box& box) {
    ShellSet s;
    double min_dx = box.dx(0);
    if (box.dim == 2) min_dx = std::min(min_dx, box.dx(1));
    const double dxi = 2.0 * kPi / (box.n[0] * box.dx(0));
    const double lo0 = 4.0 * dxi;
    const double hi = 0.8 * kPi / min_dx;
    for (double lo = lo0; lo * std::sqrt(2.0) <= hi; lo *= std::sqrt(2.0))
      s.bounds.push_back({lo, lo * std::sqrt(2.0)});
    return s;
  }

  /// Deterministic representative |xi| of a shell (geometric midpoint).
  double rep(int i) const { return std::sqrt(bounds[i].first * bounds[i].second); }

  int shell_of(double ximag) const {
    for (size_t i = 0; i < bounds.size(); ++i)
      if (ximag >= bounds[i].first && ximag < bounds[i].second) return int(i);
    return -1;
  }
};

struct SpectralSample {
  double eps;
  int shell;
  double xi_rep;
  double magnitude;
  bool saturated;
};

struct SpectralProfile {
  int bin = 0;
  Point window_center{0.0, 0.0};
  std::vector<SpectralSample> samples;
};

struct WindowedSpectrumResult {
  std::vector<SpectralProfile> per_bin;
  double max_magnitude = 0.0;  ///< over the whole analysis, saturation anchor
};

/// Per-eps grid samples of a net, shared across windows and probe points.
struct NetSampleCache {
  Box box;
  std::vector<std::pair<double, std::vector<cplx>>> per_eps;

  static NetSampleCache build(const Net& f, const Box& box, const EpsGrid& grid) {
    NetSampleCache c;
    c.box = box;
    for (double eps : grid.values) c.per_eps.push_back({eps, sample_net(f, box, eps)});
    return c;
  }

  const std::vector<cplx>* find(double eps) const {
    for (const auto& [e, s] : per_eps)
      if (e == eps) return &s;
    return nullptr;
  }
};

/// For each eps: transform of window * f_eps, magnitudes reduced per
/// (cone bin, shell) by max. Low shells below the exclusion are dropped.
/// Passing no window (nullptr) analyzes f itself (global spectrum).
inline WindowedSpectrumResult windowed_spectrum(const Net& f, const Window* window,
                                                const Box& box, const EpsGrid& grid,
                                                const ConePartition& part,
                                                const NetSampleCache* cache = nullptr) {
  if (window) {
    Point c = window->center;
    const double r = window->profile.r_outer;
    for (int ax = 0; ax < box.dim; ++ax)
      if (c[ax] - r < box.lo[ax] || c[ax] + r > box.hi[ax])
        throw GeometryError("windowed_spectrum: window leaves the box");
  }
  const ShellSet shells = ShellSet::standard(box);
  const int nbins = part.bin_count();
  const int nshells = int(shells.bounds.size());
  WindowedSpectrumResult out;
  out.per_bin.resize(nbins);
  for (int b = 0; b < nbins; ++b) {
    out.per_bin[b].bin = b;
    if (window) out.per_bin[b].window_center = window->center;
  }

  // window samples are eps-independent; net samples may come from the cache
  std::vector<double> wsamp;
  if (window) {
    wsamp.resize(box.total_samples());
    for (long idx = 0; idx < box.total_samples(); ++idx)
      wsamp[idx] = window->value(box.point_at(idx));
  }

  // reduce: max magnitude per (eps, bin, shell)
  std::vector<double> red(size_t(nbins) * nshells);
  for (double eps : grid.values) {
    std::fill(red.begin(), red.end(), 0.0);
    std::vector<cplx> g(box.total_samples());
    const std::vector<cplx>* fs = cache ? cache->find(eps) : nullptr;
    for (long idx = 0; idx < box.total_samples(); ++idx) {
      const cplx fv = fs ? (*fs)[idx] : f.eval(eps, box.point_at(idx));
      g[idx] = window ? fv * wsamp[idx] : fv;
    }
    const auto F = dft_forward(box, g);
    if (box.dim == 1) {
      const int n = box.n[0];
      for (int idx = 0; idx < n; ++idx) {
        const double xi = xi_of_index(idx, n, box.dx(0));
        const int sh = shells.shell_of(std::abs(xi));
        if (sh < 0) continue;
        const int b = part.bin_of({xi, 0.0});
        double& slot = red[size_t(b) * nshells + sh];
        slot = std::max(slot, std::abs(F[idx]));
      }
    } else {
      const int n0 = box.n[0], n1 = box.n[1];
      for (int i = 0; i < n0; ++i) {
        const double xi0 = xi_of_index(i, n0, box.dx(0));
        for (int j = 0; j < n1; ++j) {
          const double xi1 = xi_of_index(j, n1, box.dx(1));
          const double mag2 = std::hypot(xi0, xi1);
          const int sh = shells.shell_of(mag2);
          if (sh < 0) continue;
          const int b = part.bin_of({xi0, xi1});
          double& slot = red[size_t(b) * nshells + sh];
          slot = std::max(slot, std::abs(F[long(i) * n1 + j]));
        }
      }
    }
    for (int b = 0; b < nbins; ++b) {
      for (int sh = 0; sh < nshells; ++sh) {
        SpectralSample s;
        s.eps = eps;
        s.shell = sh;
        s.xi_rep = shells.rep(sh);
        s.magnitude = red[size_t(b) * nshells + sh];
        s.saturated = false;  // flagged after the global max is known
        out.per_bin[b].samples.push_back(s);
        out.max_magnitude = std::max(out.max_magnitude, s.magnitude);
      }
    }
  }
  const double floor = kSpectralRelFloor * out.max_magnitude;
  for (auto& prof : out.per_bin)
    for (auto& s : prof.samples) s.saturated = s.magnitude < floor;
  return out;
}

/// Fit-ready samples for one bin: the per-shell max reduction is already
/// done; saturated entries are dropped here.
inline std::vector<TwoScaleSample> directional_profile(const WindowedSpectrumResult& spec,
                                                       int bin) {
  if (bin < 0 || bin >= int(spec.per_bin.size())) throw EmptyBin("directional_profile: no such bin");
  std::vector<TwoScaleSample> out;
  for (const auto& s : spec.per_bin[bin].samples) {
    if (s.saturated || s.magnitude <= 0.0) continue;
    out.push_back({s.eps, s.xi_rep, s.magnitude});
  }
  if (out.empty()) throw EmptyBin("directional_profile: bin has no usable samples");
  return out;
}

}  // namespace ultraglab
