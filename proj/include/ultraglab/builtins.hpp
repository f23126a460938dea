#pragma once

/// Catalog of built-in nets with analytic derivative providers.

#include "ultraglab/gevrey.hpp"

namespace ultraglab {

struct BuiltinParams {
  double center = 0.0;
  double width = 1.0;
  double pole = 0.0;
  double sigma = 2.0;
  double r_inner = 0.5;
  double r_outer = 1.0;
  std::shared_ptr<const Mollifier> mollifier;
};

/// 2D net from two 1D factors: (a x b)(x0, x1) = a(x0) b(x1).
inline Net tensor_product(const Net& a, const Net& b) {
  if (a.dim != 1 || b.dim != 1) throw DimMismatch("tensor_product: factors must be 1D");
  Net out;
  out.dim = 2;
  out.id = "tensor(" + a.id + "," + b.id + ")";
  out.provenance = "tensor";
  out.evaluator = [a, b](double eps, const Point& x) {
    return a.eval(eps, {x[0], 0.0}) * b.eval(eps, {x[1], 0.0});
  };
  if (a.derivative_provider && b.derivative_provider) {
    out.max_analytic_order = std::min(a.max_analytic_order, b.max_analytic_order);
    out.derivative_provider = [a, b](const MultiIndex& al, double eps, const Point& x) {
      const cplx fa = al[0] == 0 ? a.eval(eps, {x[0], 0.0})
                                 : a.eval_derivative(MultiIndex{al[0]}, eps, {x[0], 0.0});
      const cplx fb = al[1] == 0 ? b.eval(eps, {x[1], 0.0})
                                 : b.eval_derivative(MultiIndex{al[1]}, eps, {x[1], 0.0});
      return fa * fb;
    };
  }
  if (a.support && b.support) {
    Box supp;
    supp.dim = 2;
    supp.lo = {a.support->lo[0], b.support->lo[0]};
    supp.hi = {a.support->hi[0], b.support->hi[0]};
    supp.n = {a.support->n[0], b.support->n[0]};
    out.support = supp;
  }
  if (a.fine_points || b.fine_points) {
    auto fa = a.fine_points, fb = b.fine_points;
    out.fine_points = [fa, fb](double eps) {
      // cross each factor's fine axis points with a coarse sweep of the other
      std::vector<Point> pts;
      auto add_axis = [&](const std::function<std::vector<Point>(double)>& fp, int ax) {
        if (!fp) return;
        for (const Point& p : fp(eps)) {
          for (int k = -8; k <= 8; ++k) {
            Point q{0.0, 0.0};
            q[ax] = p[0];
            q[1 - ax] = k * 0.25;
            pts.push_back(q);
          }
        }
      };
      add_axis(fa, 0);
      add_axis(fb, 1);
      return pts;
    };
  }
  return out;
}

namespace detail {

inline Net gaussian_net(double center, double width) {
  Net n;
  n.id = "gaussian";
  n.dim = 1;
  n.provenance = "builtin";
  n.max_analytic_order = 99;
  n.evaluator = [center, width](double, const Point& x) {
    const double t = (x[0] - center) / width;
    return cplx(std::exp(-0.5 * t * t), 0.0);
  };
  n.derivative_provider = [center, width](const MultiIndex& al, double, const Point& x) {
    // d^k exp(-t^2/2) = (-1)^k He_k(t) exp(-t^2/2), chain-ruled through t = (x-c)/w
    const double t = (x[0] - center) / width;
    double he_prev = 1.0, he = t;
    const int k = al[0];
    if (k == 0) return cplx(std::exp(-0.5 * t * t), 0.0);
    for (int j = 1; j < k; ++j) {
      const double next = t * he - j * he_prev;
      he_prev = he;
      he = next;
    }
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    return cplx(sign * he * std::exp(-0.5 * t * t) / std::pow(width, k), 0.0);
  };
  return n;
}

inline Net cauchy_net(double pole) {
  Net n;
  n.id = "cauchy";
  n.dim = 1;
  n.provenance = "builtin";
  n.max_analytic_order = 99;
  n.evaluator = [pole](double eps, const Point& x) {
    return 1.0 / cplx(x[0] - pole, eps);
  };
  n.derivative_provider = [pole](const MultiIndex& al, double eps, const Point& x) {
    const int k = al[0];
    const cplx z(x[0] - pole, eps);
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    return sign * factorial(k) / std::pow(z, k + 1);
  };
  return n;
}

inline Net bump_net(double sigma, double r_inner, double r_outer, double center) {
  auto prof = std::make_shared<CutoffProfile>();
  prof->sigma = sigma;
  prof->r_inner = r_inner;
  prof->r_outer = r_outer;
  Net n;
  n.id = "gevrey_bump";
  n.dim = 1;
  n.provenance = "builtin";
  n.max_analytic_order = 2;
  Box supp;
  supp.dim = 1;
  supp.lo[0] = center - r_outer;
  supp.hi[0] = center + r_outer;
  supp.n[0] = 2;
  n.support = supp;
  n.evaluator = [prof, center](double, const Point& x) {
    return cplx(prof->value_radial(std::abs(x[0] - center)), 0.0);
  };
  n.derivative_provider = [prof, center](const MultiIndex& al, double, const Point& x) {
    const double t = x[0] - center;
    const double r = std::abs(t);
    const double sgn = t < 0.0 ? -1.0 : 1.0;
    if (al[0] == 1) return cplx(prof->derivative_radial(r) * sgn, 0.0);
    return cplx(prof->second_derivative_radial(r), 0.0);
  };
  return n;
}

inline Net mollified_heaviside_net(std::shared_ptr<const Mollifier> moll, double center) {
  Net n;
  n.id = "mollified_heaviside";
  n.dim = 1;
  n.provenance = "builtin";
  n.max_analytic_order = kMollDerivCap;
  n.fine_points = scaled_profile_points(moll->box, 1, {center, 0.0});
  n.evaluator = [moll, center](double eps, const Point& x) {
    return moll->cdf_value((x[0] - center) / eps);
  };
  n.derivative_provider = [moll, center](const MultiIndex& al, double eps, const Point& x) {
    const int k = al[0];
    return moll->value((x[0] - center) / eps, k - 1) * std::pow(eps, -double(k));
  };
  return n;
}

inline Net shifted_delta_net(std::shared_ptr<const Mollifier> moll, double center) {
  Net base = mollifier_net(moll, 1);
  if (center == 0.0) return base;
  Net n = base;
  n.support->lo[0] += center;
  n.support->hi[0] += center;
  n.evaluator = [base, center](double eps, const Point& x) {
    return base.eval(eps, {x[0] - center, 0.0});
  };
  n.derivative_provider = [base, center](const MultiIndex& al, double eps, const Point& x) {
    return base.eval_derivative(al, eps, {x[0] - center, 0.0});
  };
  n.fine_points = scaled_profile_points(moll->box, 1, {center, 0.0});
  return n;
}

/// x exp(-eps^(-1/(2 sigma - 1))) phi(x / eps) with phi a compactly
/// supported bump, phi(0) = 1: vanishes at every classical point yet is not
/// a null net.
inline Net sec3_counterexample_net(double sigma) {
  auto prof = std::make_shared<CutoffProfile>();
  prof->sigma = std::max(sigma, 1.5);  // taper smoothness; support is [-1, 1]
  prof->r_inner = 0.5;
  prof->r_outer = 1.0;
  const double s = 1.0 / (2.0 * sigma - 1.0);
  Net n;
  n.id = "paper_sec3_counterexample";
  n.dim = 1;
  n.provenance = "builtin";
  n.max_analytic_order = 2;
  n.fine_points = [](double eps) {
    std::vector<Point> pts;
    for (int j = -512; j <= 512; ++j) pts.push_back({eps * j / 512.0, 0.0});
    return pts;
  };
  Box supp;
  supp.dim = 1;
  supp.lo[0] = -1.0;
  supp.hi[0] = 1.0;
  supp.n[0] = 2;
  n.support = supp;
  auto amp = [s](double eps) { return std::exp(-std::pow(eps, -s)); };
  n.evaluator = [prof, amp](double eps, const Point& x) {
    const double t = x[0] / eps;
    return cplx(x[0] * amp(eps) * prof->value_radial(std::abs(t)), 0.0);
  };
  n.derivative_provider = [prof, amp](const MultiIndex& al, double eps, const Point& x) {
    const double t = x[0] / eps;
    const double r = std::abs(t);
    const double sgn = t < 0.0 ? -1.0 : 1.0;
    const double phi = prof->value_radial(r);
    const double dphi = prof->derivative_radial(r) * sgn;
    if (al[0] == 1) return cplx(amp(eps) * (phi + t * dphi), 0.0);
    const double d2phi = prof->second_derivative_radial(r);
    return cplx(amp(eps) * (2.0 * dphi / eps + x[0] * d2phi / (eps * eps)), 0.0);
  };
  return n;
}

}  // namespace detail

/// Stable catalog of builtin ids with one-line descriptions.
inline std::vector<std::pair<std::string, std::string>> builtin_catalog() {
  return {
      {"cauchy", "1/(x - pole + i eps), boundary value of a holomorphic function"},
      {"gaussian", "eps-constant Gaussian, value 1 at its center"},
      {"gaussian2d", "tensor product of two Gaussians"},
      {"gevrey_bump", "eps-constant Gevrey cutoff, plateau r_inner, support r_outer"},
      {"heaviside_x1", "mollified step in x1, constant in x2"},
      {"heaviside_x2", "mollified step in x2, constant in x1"},
      {"mollified_delta", "phi_eps = eps^-1 phi(x/eps)"},
      {"mollified_delta2d", "tensor product phi_eps(x1) phi_eps(x2)"},
      {"mollified_heaviside", "H * phi_eps, the smoothed unit step"},
      {"paper_sec3_counterexample",
       "x exp(-eps^(-1/(2s-1))) phi(x/eps): zero at classical points, not null"},
  };
}

inline Net builtin_net(const std::string& name, const BuiltinParams& p = {}) {
  auto need_moll = [&]() {
    if (!p.mollifier) throw UnknownBuiltin("builtin '" + name + "' requires a mollifier");
    return p.mollifier;
  };
  if (name == "gaussian") return detail::gaussian_net(p.center, p.width);
  if (name == "cauchy") return detail::cauchy_net(p.pole);
  if (name == "gevrey_bump") return detail::bump_net(p.sigma, p.r_inner, p.r_outer, p.center);
  if (name == "mollified_delta") return detail::shifted_delta_net(need_moll(), p.center);
  if (name == "mollified_heaviside")
    return detail::mollified_heaviside_net(need_moll(), p.center);
  if (name == "paper_sec3_counterexample") return detail::sec3_counterexample_net(p.sigma);
  if (name == "gaussian2d") {
    Net g = detail::gaussian_net(p.center, p.width);
    Net out = tensor_product(g, g);
    out.id = "gaussian2d";
    return out;
  }
  if (name == "mollified_delta2d") {
    Net out = mollifier_net(need_moll(), 2);
    out.id = "mollified_delta2d";
    return out;
  }
  if (name == "heaviside_x1" || name == "heaviside_x2") {
    Net h = detail::mollified_heaviside_net(need_moll(), p.center);
    Net one = constant_net(1, 1.0);
    Net out = name == "heaviside_x1" ? tensor_product(h, one) : tensor_product(one, h);
    out.id = name;
    return out;
  }
  throw UnknownBuiltin("unknown builtin net: " + name);
}

}  // namespace ultraglab
