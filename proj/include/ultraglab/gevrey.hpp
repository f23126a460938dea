#pragma once

/// Gevrey-class cutoffs, the rapidly decreasing mollifier built as the
/// inverse transform of a frequency-side cutoff (unit mass, vanishing
/// moments), the scaled mollifier net phi_eps and the log-cutoff net rho_eps.

#include "ultraglab/fft.hpp"
#include "ultraglab/net.hpp"

namespace ultraglab {

namespace detail {

/// h(t) = exp(-t^(-1/(sigma-1))) for t > 0; the classic Gevrey-flat factor.
inline double gevrey_h(double t, double p) {
  if (t <= 0.0) return 0.0;
  return std::exp(-std::pow(t, -p));
}

inline double gevrey_h_prime(double t, double p) {
  if (t <= 0.0) return 0.0;
  return gevrey_h(t, p) * p * std::pow(t, -p - 1.0);
}

/// Bridge rising 0 -> 1 on [0, 1]: h(t) / (h(t) + h(1-t)).
inline double bridge(double t, double p) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = gevrey_h(t, p);
  const double b = gevrey_h(1.0 - t, p);
  return a / (a + b);
}

inline double bridge_prime(double t, double p) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = gevrey_h(t, p);
  const double b = gevrey_h(1.0 - t, p);
  const double ap = gevrey_h_prime(t, p);
  const double bp = gevrey_h_prime(1.0 - t, p);
  const double denom = (a + b) * (a + b);
  return (ap * b + a * bp) / denom;
}

}  // namespace detail

/// Radial plateau/taper profile: 1 on |x| <= r_inner, 0 on |x| >= r_outer,
/// Gevrey-sigma smooth in between.
struct CutoffProfile {
  double sigma = 2.0;
  double r_inner = 1.0;
  double r_outer = 2.0;
  Box box;  ///< domain the profile was declared on
  std::vector<double> samples;

  double taper_exponent() const { return 1.0 / (sigma - 1.0); }

  double value_radial(double r) const {
    if (r <= r_inner) return 1.0;
    if (r >= r_outer) return 0.0;
    const double t = (r_outer - r) / (r_outer - r_inner);
    return detail::bridge(t, taper_exponent());
  }

  double derivative_radial(double r) const {
    if (r <= r_inner || r >= r_outer) return 0.0;
    const double t = (r_outer - r) / (r_outer - r_inner);
    return -detail::bridge_prime(t, taper_exponent()) / (r_outer - r_inner);
  }

  double second_derivative_radial(double r) const {
    // one central difference on the analytic first derivative
    const double h = 1e-6 * (r_outer - r_inner);
    return (derivative_radial(r + h) - derivative_radial(r - h)) / (2.0 * h);
  }

  double value(const Point& x, int dim) const { return value_radial(norm2(x, dim)); }
};

/// Plateau/taper cutoff centered at the origin of `box`.
inline CutoffProfile gevrey_bump(double sigma, double r_inner, double r_outer, const Box& box) {
  if (!(sigma > 1.0)) throw DomainError("gevrey_bump: sigma must be > 1");
  if (!(0.0 < r_inner && r_inner < r_outer)) throw GeometryError("gevrey_bump: need 0 < r_inner < r_outer");
  for (int ax = 0; ax < box.dim; ++ax)
    if (r_outer > box.hi[ax] || -r_outer < box.lo[ax] - 1e-12)
      if (r_outer > std::min(box.hi[ax], -box.lo[ax]))
        throw GeometryError("gevrey_bump: outer radius does not fit inside the box");
  CutoffProfile c;
  c.sigma = sigma;
  c.r_inner = r_inner;
  c.r_outer = r_outer;
  c.box = box;
  c.samples.resize(box.total_samples());
  for (long idx = 0; idx < box.total_samples(); ++idx)
    c.samples[idx] = c.value(box.point_at(idx), box.dim);
  return c;
}

/// Off-center variant used for spectral windows.
struct Window {
  CutoffProfile profile;  ///< radial profile about 0
  Point center{0.0, 0.0};
  int dim = 1;

  double value(const Point& x) const {
    return profile.value_radial(norm2({x[0] - center[0], x[1] - center[1]}, dim));
  }
};

struct MollifierDiagnostics {
  std::map<int, double> moment_errors;  ///< |moment_q - delta_{q0}|
  double decay_c = 0.0;                 ///< envelope constant for |phi_hat|
  double decay_k = 0.0;                 ///< fitted rate against |xi|^(1/sigma)
  double s_sigma_norm = 0.0;            ///< truncated norm at b = 1, cap = 3
  std::optional<double> rho_decay_nu;   ///< filled once a cutoff net is fitted
};

inline constexpr int kMollDerivCap = 8;

/// Sampled rapidly-decreasing mollifier: phi = inverse transform of a
/// Gevrey frequency cutoff equal to 1 near 0. Unit mass and vanishing
/// moments hold to quadrature accuracy because phi_hat is flat at 0.
struct Mollifier {
  double sigma = 2.0;
  Box box;                       ///< 1D symmetric profile domain
  CutoffProfile freq_profile;    ///< chi on the frequency axis
  std::vector<std::vector<cplx>> deriv_samples;  ///< d^q phi, q = 0..kMollDerivCap
  std::vector<cplx> phi_hat;     ///< recomputed transform, DFT order
  std::vector<cplx> cdf;         ///< cumulative integral of phi
  MollifierDiagnostics diagnostics;

  const std::vector<cplx>& phi() const { return deriv_samples[0]; }

  cplx value(double t, int order = 0) const {
    if (order > kMollDerivCap) throw DerivativeUnavailable("mollifier derivative order too high");
    return interp_cubic_1d(box, deriv_samples[order], t);
  }

  /// Primitive of phi from the left; 0 / total mass outside the box.
  cplx cdf_value(double t) const {
    const double dx = box.dx(0);
    if (t <= box.lo[0] + 2 * dx) return 0.0;
    if (t >= box.hi[0] - 3 * dx) return cdf.back();
    return interp_cubic_1d(box, cdf, t);
  }
};

struct MollifierOptions {
  double xi1_frac = 0.15;       ///< plateau end as a fraction of the dual-grid max
  double xi2_frac = 0.35;       ///< support end as a fraction of the dual-grid max
  double moment_tolerance = 1e-5;
  int moment_cap = 6;
};

inline Mollifier build_mollifier(double sigma, const Box& box, int moment_cap = 6,
                                 MollifierOptions opt = {}) {
  if (!(sigma > 1.0)) throw DomainError("build_mollifier: sigma must be > 1");
  if (box.dim != 1) throw GeometryError("build_mollifier: profile box must be 1D");
  if (std::abs(box.lo[0] + box.hi[0]) > 1e-12 * (box.hi[0] - box.lo[0]))
    throw GeometryError("build_mollifier: box must be symmetric about 0");
  opt.moment_cap = moment_cap;

  Mollifier m;
  m.sigma = sigma;
  m.box = box;
  const int n = box.n[0];
  const double dx = box.dx(0);
  const double ximax = xi_max(n, dx);

  CutoffProfile chi;
  chi.sigma = sigma;
  chi.r_inner = opt.xi1_frac * ximax;
  chi.r_outer = opt.xi2_frac * ximax;
  chi.box = box;
  m.freq_profile = chi;

  // phi and its derivatives by spectral synthesis: d^q phi = F^{-1}[(i xi)^q chi]
  m.deriv_samples.resize(kMollDerivCap + 1);
  std::vector<cplx> symbol(n);
  for (int q = 0; q <= kMollDerivCap; ++q) {
    for (int idx = 0; idx < n; ++idx) {
      const double xi = xi_of_index(idx, n, dx);
      symbol[idx] = std::pow(cplx(0.0, xi), q) * chi.value_radial(std::abs(xi));
    }
    m.deriv_samples[q] = dft_inverse_1d(box, symbol);
  }

  // moment diagnostics
  for (int q = 0; q <= opt.moment_cap; ++q) {
    cplx mom = 0.0;
    for (int j = 0; j < n; ++j) mom += std::pow(box.coord(0, j), q) * m.phi()[j];
    mom *= dx;
    const double err = std::abs(mom - (q == 0 ? 1.0 : 0.0));
    m.diagnostics.moment_errors[q] = err;
    if (err > opt.moment_tolerance)
      throw ToleranceError("build_mollifier: moment " + std::to_string(q) +
                           " error " + std::to_string(err) + " exceeds tolerance");
  }

  // transform-side decay: fit log|phi_hat| against |xi|^(1/sigma), envelope
  // intercept so the fitted pair bounds the data from above
  m.phi_hat = dft_forward_1d(box, m.phi());
  double maxmag = 0.0;
  for (const auto& v : m.phi_hat) maxmag = std::max(maxmag, std::abs(v));
  std::vector<double> feat, logv;
  const ScaleModel sm = scale_exponent(sigma);
  for (int idx = 0; idx < n; ++idx) {
    const double xi = std::abs(xi_of_index(idx, n, dx));
    const double mag = std::abs(m.phi_hat[idx]);
    if (xi <= 0.0 || mag < kSpectralRelFloor * maxmag) continue;
    feat.push_back(sm.xi_feature(xi));
    logv.push_back(std::log(mag));
  }
  const auto lf = detail::least_squares(feat, logv);
  m.diagnostics.decay_k = -lf.b;
  double env = -kInfRate;
  for (size_t i = 0; i < feat.size(); ++i) env = std::max(env, logv[i] - lf.b * feat[i]);
  m.diagnostics.decay_c = std::exp(env);

  // cumulative integral (trapezoid), used for jump convolutions
  m.cdf.resize(n);
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j > 0) acc += 0.5 * (m.phi()[j - 1] + m.phi()[j]) * dx;
    m.cdf[j] = acc;
  }
  return m;
}

/// Truncated S^(sigma) norm: sup over derivative order q and weight order r
/// (both <= cap) of int |x|^r |phi^(q)| dx / (b^(q+r) q!^sigma r!^sigma).
inline double s_sigma_norm(const Mollifier& m, double b, int cap) {
  if (!(b > 0.0)) throw DomainError("s_sigma_norm: b must be > 0");
  if (cap > 6) throw DerivativeUnavailable("s_sigma_norm: cap must be <= 6");
  const int n = m.box.n[0];
  const double dx = m.box.dx(0);
  double best = 0.0;
  for (int q = 0; q <= cap; ++q) {
    for (int r = 0; r <= cap; ++r) {
      double integral = 0.0;
      for (int j = 0; j < n; ++j)
        integral += std::pow(std::abs(m.box.coord(0, j)), r) * std::abs(m.deriv_samples[q][j]);
      integral *= dx;
      const double weight =
          std::pow(b, q + r) * std::pow(factorial(q), m.sigma) * std::pow(factorial(r), m.sigma);
      best = std::max(best, integral / weight);
    }
  }
  return best;
}

/// Scaled-profile sampling points for sup estimates of mollified spikes:
/// the structure lives at scale eps, between working-grid samples.
inline std::function<std::vector<Point>(double)> scaled_profile_points(const Box& profile_box,
                                                                       int dim,
                                                                       Point center = {0.0, 0.0}) {
  return [profile_box, dim, center](double eps) {
    std::vector<Point> pts;
    const int n = profile_box.n[0];
    if (dim == 1) {
      pts.reserve(n / 2);
      for (int j = 0; j < n; j += 2)
        pts.push_back({center[0] + eps * profile_box.coord(0, j), 0.0});
    } else {
      for (int i = 0; i < n; i += 32) {
        for (int j = 0; j < n; j += 32) {
          pts.push_back({center[0] + eps * profile_box.coord(0, i),
                         center[1] + eps * profile_box.coord(0, j)});
        }
      }
    }
    return pts;
  };
}

/// phi_eps = eps^(-m) phi(./eps) as a net (tensor product across axes).
inline Net mollifier_net(std::shared_ptr<const Mollifier> moll, int dim = 1) {
  Net net;
  net.id = "mollified_delta";
  net.dim = dim;
  net.provenance = "mollifier";
  net.max_analytic_order = kMollDerivCap;
  net.fine_points = scaled_profile_points(moll->box, dim);
  Box supp;
  supp.dim = dim;
  for (int ax = 0; ax < dim; ++ax) {
    supp.lo[ax] = moll->box.lo[0];
    supp.hi[ax] = moll->box.hi[0];
    supp.n[ax] = moll->box.n[0];
  }
  net.support = supp;
  net.evaluator = [moll, dim](double eps, const Point& x) {
    cplx v = std::pow(eps, -dim);
    for (int ax = 0; ax < dim; ++ax) v *= moll->value(x[ax] / eps);
    return v;
  };
  net.derivative_provider = [moll, dim](const MultiIndex& al, double eps, const Point& x) {
    cplx v = std::pow(eps, -dim - al.order());
    for (int ax = 0; ax < dim; ++ax) v *= moll->value(x[ax] / eps, al[ax]);
    return v;
  };
  return net;
}

/// rho_eps(x) = eps^(-m) phi(x/eps) cut(x |ln eps|); support shrinks like
/// r_outer / |ln eps|.
inline Net cutoff_mollifier_net(std::shared_ptr<const Mollifier> moll,
                                std::shared_ptr<const CutoffProfile> cut, int dim = 1) {
  if (std::abs(moll->sigma - cut->sigma) > 1e-12)
    throw DomainError("cutoff_mollifier_net: sigma of mollifier and cutoff must agree");
  Net net;
  net.id = "cutoff_mollifier";
  net.dim = dim;
  net.provenance = "mollifier:cutoff";
  net.max_analytic_order = dim == 1 ? 2 : 1;
  net.fine_points = scaled_profile_points(moll->box, dim);
  Box supp;
  supp.dim = dim;
  for (int ax = 0; ax < dim; ++ax) {
    supp.lo[ax] = moll->box.lo[0];
    supp.hi[ax] = moll->box.hi[0];
    supp.n[ax] = moll->box.n[0];
  }
  net.support = supp;
  auto lnmag = [](double eps) { return std::abs(std::log(eps)); };
  net.evaluator = [moll, cut, dim, lnmag](double eps, const Point& x) {
    cplx v = std::pow(eps, -dim);
    for (int ax = 0; ax < dim; ++ax) v *= moll->value(x[ax] / eps);
    return v * cut->value_radial(norm2(x, dim) * lnmag(eps));
  };
  if (dim == 1) {
    net.derivative_provider = [moll, cut, lnmag](const MultiIndex& al, double eps,
                                                 const Point& x) -> cplx {
      const double L = lnmag(eps);
      const double r = std::abs(x[0]) * L;
      const double sgn = x[0] < 0.0 ? -1.0 : 1.0;
      auto phi_d = [&](int q) { return moll->value(x[0] / eps, q) * std::pow(eps, -1.0 - q); };
      auto cut_d = [&](int q) {
        if (q == 0) return cut->value_radial(r);
        if (q == 1) return cut->derivative_radial(r) * L * sgn;
        return cut->second_derivative_radial(r) * L * L;
      };
      if (al.order() == 0) return phi_d(0) * cut_d(0);
      if (al.order() == 1) return phi_d(1) * cut_d(0) + phi_d(0) * cut_d(1);
      return phi_d(2) * cut_d(0) + 2.0 * phi_d(1) * cut_d(1) + phi_d(0) * cut_d(2);
    };
  } else {
    net.derivative_provider = [moll, cut, lnmag](const MultiIndex& al, double eps,
                                                 const Point& x) -> cplx {
      const double L = lnmag(eps);
      const double r = norm2(x, 2) * L;
      cplx phi_part = std::pow(eps, -2.0);
      for (int ax = 0; ax < 2; ++ax) phi_part *= moll->value(x[ax] / eps);
      if (al.order() == 0) return phi_part * cut->value_radial(r);
      const int ax = al[0] > 0 ? 0 : 1;
      cplx dphi = std::pow(eps, -3.0) * moll->value(x[ax] / eps, 1) * moll->value(x[1 - ax] / eps);
      const double rn = norm2(x, 2);
      const double dir = rn > 0.0 ? x[ax] / rn : 0.0;
      return dphi * cut->value_radial(r) + phi_part * cut->derivative_radial(r) * L * dir;
    };
  }
  return net;
}

/// Fits nu in |rho_hat_eps(xi)| <= c eps^(-m) exp(-nu eps^(1/sigma) |xi|^(1/sigma))
/// over an (eps, xi) grid; c is the envelope intercept so the bound holds on
/// all unsaturated samples.
struct RhoDecayFit {
  double nu = 0.0;
  double c = 0.0;
  double bound_fraction = 0.0;  ///< unsaturated samples satisfying the bound
};

inline RhoDecayFit fit_rho_decay(const Net& rho, const Box& box, const EpsGrid& grid,
                                 double sigma) {
  const int n = box.n[0];
  std::vector<double> feat, logv;
  double maxmag = 0.0;
  std::vector<std::pair<double, double>> rows;  // (feature, log value)
  for (double eps : grid.values) {
    const auto samples = sample_net(rho, box, eps);
    const auto F = dft_forward_1d(box, samples);
    for (int idx = 0; idx < n; ++idx) {
      const double xi = std::abs(xi_of_index(idx, n, box.dx(0)));
      if (xi <= 0.0) continue;
      const double mag = std::abs(F[idx]) * eps;  // divide out eps^(-m), m = 1
      maxmag = std::max(maxmag, mag);
      rows.push_back({std::pow(eps * xi, 1.0 / sigma), mag});
    }
  }
  for (const auto& [f, v] : rows) {
    if (v < kSpectralRelFloor * maxmag) continue;
    feat.push_back(f);
    logv.push_back(std::log(v));
  }
  const auto lf = detail::least_squares(feat, logv);
  RhoDecayFit fit;
  fit.nu = std::max(0.0, -lf.b);
  double env = -kInfRate;
  for (size_t i = 0; i < feat.size(); ++i) env = std::max(env, logv[i] + fit.nu * feat[i]);
  fit.c = std::exp(env);
  int ok = 0;
  for (size_t i = 0; i < feat.size(); ++i)
    if (logv[i] <= env - fit.nu * feat[i] + 1e-9) ++ok;
  fit.bound_fraction = feat.empty() ? 0.0 : double(ok) / feat.size();
  return fit;
}

}  // namespace ultraglab
