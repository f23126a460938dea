#pragma once

/// Nets (f_eps)_eps of sampled complex functions: construction, pointwise
/// algebra, derivatives, polynomial composition, generalized point values,
/// and the equality / association hierarchy.

#include <functional>
#include <memory>
#include <utility>

#include "ultraglab/asymptotics.hpp"
#include "ultraglab/grid.hpp"

namespace ultraglab {

/// One representative of a generalized function. Immutable after
/// construction; evaluation is a pure function of (eps, x).
struct Net {
  std::string id;
  int dim = 1;
  std::function<cplx(double, const Point&)> evaluator;
  /// Analytic derivatives up to max_analytic_order; empty means finite
  /// differences on the sample grid.
  std::function<cplx(const MultiIndex&, double, const Point&)> derivative_provider;
  int max_analytic_order = 0;
  std::optional<Box> support;       ///< evaluator is exactly 0 outside
  std::optional<Box> sample_grid;   ///< native grid of sampled nets
  /// Extra sup-sampling points for structure finer than a working grid
  /// (e.g. the eps-scaled profile of a mollified spike).
  std::function<std::vector<Point>(double)> fine_points;
  std::string provenance;

  cplx eval(double eps, const Point& x) const {
    if (support && !support->contains(x)) return 0.0;
    return evaluator(eps, x);
  }

  cplx eval_derivative(const MultiIndex& alpha, double eps, const Point& x) const {
    if (alpha.order() == 0) return eval(eps, x);
    if (support && !support->contains(x)) return 0.0;
    if (!derivative_provider || alpha.order() > max_analytic_order)
      throw DerivativeUnavailable("net '" + id + "': no analytic derivative of order " +
                                  std::to_string(alpha.order()));
    return derivative_provider(alpha, eps, x);
  }

  bool has_analytic_derivatives(int order) const {
    return bool(derivative_provider) && order <= max_analytic_order;
  }
};

inline Net make_analytic_net(std::string id, int dim,
                             std::function<cplx(double, const Point&)> f,
                             std::function<cplx(const MultiIndex&, double, const Point&)> df = {},
                             int max_order = 0) {
  Net n;
  n.id = std::move(id);
  n.dim = dim;
  n.evaluator = std::move(f);
  n.derivative_provider = std::move(df);
  n.max_analytic_order = n.derivative_provider ? max_order : 0;
  n.provenance = "analytic";
  return n;
}

inline Net constant_net(int dim, cplx value) {
  return make_analytic_net(
      "const", dim, [value](double, const Point&) { return value; },
      [](const MultiIndex&, double, const Point&) { return cplx(0.0); }, 99);
}

/// Samples a net on a box grid at fixed eps (row-major, axis 1 fast in 2D).
inline std::vector<cplx> sample_net(const Net& f, const Box& box, double eps) {
  std::vector<cplx> out(box.total_samples());
  for (long idx = 0; idx < box.total_samples(); ++idx) out[idx] = f.eval(eps, box.point_at(idx));
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise algebra

enum class CombineOp { Add, Mul };

/// Pointwise combination a*sa (+|*) b*sb. Derivatives compose linearly for
/// Add and by the Leibniz rule for Mul when both inputs provide them.
inline Net combine(const Net& a, const Net& b, CombineOp op, cplx sa = 1.0, cplx sb = 1.0) {
  if (a.dim != b.dim) throw DimMismatch("combine: dimension mismatch");
  Net out;
  out.dim = a.dim;
  const int dim = a.dim;
  if (op == CombineOp::Add) {
    out.id = "(" + a.id + "+" + b.id + ")";
    out.evaluator = [a, b, sa, sb](double eps, const Point& x) {
      return sa * a.eval(eps, x) + sb * b.eval(eps, x);
    };
    if (a.derivative_provider && b.derivative_provider) {
      out.max_analytic_order = std::min(a.max_analytic_order, b.max_analytic_order);
      out.derivative_provider = [a, b, sa, sb](const MultiIndex& al, double eps, const Point& x) {
        return sa * a.eval_derivative(al, eps, x) + sb * b.eval_derivative(al, eps, x);
      };
    }
  } else {
    out.id = "(" + a.id + "*" + b.id + ")";
    const cplx s = sa * sb;
    out.evaluator = [a, b, s](double eps, const Point& x) {
      return s * a.eval(eps, x) * b.eval(eps, x);
    };
    if (a.derivative_provider && b.derivative_provider) {
      out.max_analytic_order = std::min(a.max_analytic_order, b.max_analytic_order);
      out.derivative_provider = [a, b, s, dim](const MultiIndex& al, double eps, const Point& x) {
        // Leibniz: sum over beta <= alpha of binom(alpha, beta) d^beta a d^(alpha-beta) b
        cplx sum = 0.0;
        auto binom = [](int n, int k) {
          double r = 1.0;
          for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
          return r;
        };
        for (int b0 = 0; b0 <= al[0]; ++b0) {
          for (int b1 = 0; b1 <= (dim == 2 ? al[1] : 0); ++b1) {
            const MultiIndex beta{b0, b1};
            const MultiIndex rest{al[0] - b0, al[1] - b1};
            const double w = binom(al[0], b0) * binom(al[1], b1);
            sum += w * a.eval_derivative(beta, eps, x) * b.eval_derivative(rest, eps, x);
          }
        }
        return s * sum;
      };
    }
    if (a.support && b.support) out.support = Box::intersect(*a.support, *b.support);
    else if (a.support) out.support = a.support;
    else if (b.support) out.support = b.support;
  }
  if (op == CombineOp::Add && a.sample_grid) out.sample_grid = a.sample_grid;
  if (op == CombineOp::Mul && a.sample_grid) out.sample_grid = a.sample_grid;
  if (!out.sample_grid && b.sample_grid) out.sample_grid = b.sample_grid;
  if (a.fine_points && b.fine_points) {
    auto fa = a.fine_points, fb = b.fine_points;
    out.fine_points = [fa, fb](double eps) {
      auto pts = fa(eps);
      const auto more = fb(eps);
      pts.insert(pts.end(), more.begin(), more.end());
      return pts;
    };
  } else if (a.fine_points) {
    out.fine_points = a.fine_points;
  } else if (b.fine_points) {
    out.fine_points = b.fine_points;
  }
  out.provenance = "combine";
  return out;
}

namespace detail {

/// 4th-order centered first/second difference, recursing down the order.
inline cplx fd_derivative(const Net& f, MultiIndex alpha, double eps, const Point& x, double h0,
                          double h1) {
  const int ax = alpha[0] > 0 ? 0 : 1;
  const double h = ax == 0 ? h0 : h1;
  auto shifted = [&](double offset) {
    Point p = x;
    p[ax] += offset;
    MultiIndex rest = alpha;
    if (rest[ax] >= 2) {
      rest[ax] -= 2;
      return rest.order() == 0 ? f.eval(eps, p) : fd_derivative(f, rest, eps, p, h0, h1);
    }
    rest[ax] -= 1;
    return rest.order() == 0 ? f.eval(eps, p) : fd_derivative(f, rest, eps, p, h0, h1);
  };
  if (alpha[ax] >= 2) {
    // second derivative stencil
    return (-shifted(2 * h) + 16.0 * shifted(h) - 30.0 * shifted(0.0) + 16.0 * shifted(-h) -
            shifted(-2 * h)) /
           (12.0 * h * h);
  }
  return (-shifted(2 * h) + 8.0 * shifted(h) - 8.0 * shifted(-h) + shifted(-2 * h)) / (12.0 * h);
}

}  // namespace detail

inline constexpr int kMaxFdOrder = 4;

/// d^alpha f as a net. Uses the analytic provider when present, otherwise
/// 4th-order centered differences at the net's native grid spacing.
inline Net derivative(const Net& f, const MultiIndex& alpha) {
  if (alpha.order() < 1) throw DomainError("derivative: |alpha| must be >= 1");
  Net out;
  out.dim = f.dim;
  out.id = "d" + alpha.str() + "[" + f.id + "]";
  out.support = f.support;
  out.sample_grid = f.sample_grid;
  out.fine_points = f.fine_points;
  if (f.has_analytic_derivatives(alpha.order())) {
    out.provenance = "derivative:analytic";
    out.evaluator = [f, alpha](double eps, const Point& x) {
      return f.eval_derivative(alpha, eps, x);
    };
    out.max_analytic_order = f.max_analytic_order - alpha.order();
    if (out.max_analytic_order > 0) {
      out.derivative_provider = [f, alpha](const MultiIndex& be, double eps, const Point& x) {
        return f.eval_derivative(MultiIndex{alpha[0] + be[0], alpha[1] + be[1]}, eps, x);
      };
    }
    return out;
  }
  if (alpha.order() > kMaxFdOrder)
    throw DerivativeUnavailable("derivative: finite differences capped at order 4");
  if (!f.sample_grid)
    throw DerivativeUnavailable("derivative: net '" + f.id + "' has no grid for differencing");
  const Box grid = *f.sample_grid;
  if (grid.n[0] < 16 || (grid.dim == 2 && grid.n[1] < 16))
    throw DerivativeUnavailable("derivative: grid too coarse for the stencil");
  const double h0 = grid.dx(0);
  const double h1 = grid.dim == 2 ? grid.dx(1) : grid.dx(0);
  out.provenance = "derivative:finite-difference";
  out.evaluator = [f, alpha, h0, h1](double eps, const Point& x) {
    return detail::fd_derivative(f, alpha, eps, x, h0, h1);
  };
  return out;
}

/// P(f) for a polynomial P given by coeffs[j] on xi^j. Built from repeated
/// products so derivative providers compose by the Leibniz rule.
inline Net compose_polynomial(const Net& f, const std::vector<cplx>& coeffs) {
  Net acc = constant_net(f.dim, coeffs.empty() ? 0.0 : coeffs[0]);
  acc.id = "P[" + f.id + "]";
  Net power = constant_net(f.dim, 1.0);
  for (size_t j = 1; j < coeffs.size(); ++j) {
    power = combine(power, f, CombineOp::Mul);
    if (coeffs[j] != 0.0) acc = combine(acc, power, CombineOp::Add, 1.0, coeffs[j]);
  }
  acc.id = "P[" + f.id + "]";
  return acc;
}

// ---------------------------------------------------------------------------
// Function-net classification (sup over grid samples per derivative order)

struct FunctionClassOptions {
  int max_order = 1;
  bool full_per_alpha = false;  ///< verify negligibility order by order
};

inline Classification classify_function_net(const Net& f, const Box& box, const EpsGrid& grid,
                                            const ScaleModel& model, const FitPolicy& policy = {},
                                            FunctionClassOptions opt = {}) {
  std::vector<Net> dnets;  // index aligned with alphas
  const auto alphas = multi_indices_upto(f.dim, opt.max_order);
  for (const auto& al : alphas) {
    if (al.order() == 0) continue;
    dnets.push_back(derivative(f, al));
  }

  Classification result;
  bool all_moderate = true;
  bool all_negligible = true;
  bool all_zero = true;
  double min_neg_rate = kInfRate;
  int di = 0;
  for (const auto& al : alphas) {
    const Net* src = al.order() == 0 ? &f : &dnets[di++];
    std::vector<ScalarSample> sups;
    bool alpha_zero = true;
    for (double eps : grid.values) {
      double sup = 0.0;
      for (long idx = 0; idx < box.total_samples(); ++idx) {
        const double m = std::abs(src->eval(eps, box.point_at(idx)));
        if (m > sup) sup = m;
      }
      if (src->fine_points) {
        for (const Point& p : src->fine_points(eps)) {
          if (!box.contains(p)) continue;
          const double m = std::abs(src->eval(eps, p));
          if (m > sup) sup = m;
        }
      }
      if (sup != 0.0) alpha_zero = false;
      sups.push_back({eps, sup});
    }
    AsymptoticFit fit;
    if (alpha_zero) {
      fit.k = kInfRate;
      fit.sign = -1;
      fit.saturated_count = int(grid.values.size());
    } else {
      all_zero = false;
      auto maybe = detail::fit_or_saturated(sups, model, policy);
      if (!maybe) throw InsufficientData("classify_function_net: too few usable sup values");
      fit = *maybe;
    }
    result.per_alpha[al] = fit;

    const bool moderate_ok =
        fit.k == kInfRate || fit.sign < 0 || detail::growth_within_model(fit, policy);
    const bool negligible_ok = fit.k == kInfRate || (fit.sign < 0 && fit.k >= policy.k_min);
    all_moderate = all_moderate && moderate_ok;
    all_negligible = all_negligible && negligible_ok;
    if (negligible_ok && fit.k < min_neg_rate) min_neg_rate = fit.k;
  }

  const AsymptoticFit& fit0 = result.per_alpha.at(MultiIndex{0});
  const bool order0_negligible =
      fit0.k == kInfRate || (fit0.sign < 0 && fit0.k >= policy.k_min);

  if (all_zero) {
    result.verdict = Verdict::ExactZero;
    result.k_hat = kInfRate;
    return result;
  }
  if (!all_moderate) {
    result.verdict = Verdict::Neither;
    result.k_hat = fit0.sign > 0 ? fit0.k : 0.0;
    return result;
  }
  // Null characterization: a moderate net is negligible when its zeroth-order
  // sups are; full mode re-verifies order by order.
  const bool negligible = opt.full_per_alpha ? all_negligible : order0_negligible;
  if (negligible) {
    result.verdict = Verdict::Negligible;
    result.k_hat = opt.full_per_alpha ? min_neg_rate : fit0.k;
  } else {
    result.verdict = Verdict::Moderate;
    result.k_hat = fit0.sign > 0 ? fit0.k : 0.0;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Generalized points and point values

struct GenPoint {
  int dim = 1;
  std::function<Point(double)> path;
  bool compactly_supported = false;
  Box witness;  ///< meaningful when compactly_supported

  static GenPoint classical(int dim, const Point& x) {
    GenPoint p;
    p.dim = dim;
    p.path = [x](double) { return x; };
    p.compactly_supported = true;
    Box w;
    w.dim = dim;
    for (int ax = 0; ax < dim; ++ax) {
      w.lo[ax] = x[ax] - 1e-9;
      w.hi[ax] = x[ax] + 1e-9;
      w.n[ax] = 1;
    }
    p.witness = w;
    return p;
  }
};

struct GenNumber {
  std::vector<std::pair<double, cplx>> values;
  Classification classification;
};

/// f evaluated along a compactly supported generalized point.
inline GenNumber point_value(const Net& f, const GenPoint& x, const EpsGrid& grid,
                             const ScaleModel& model, const FitPolicy& policy = {}) {
  if (!x.compactly_supported)
    throw OutOfDomain("point_value: generalized point must be compactly supported");
  if (f.sample_grid && !f.sample_grid->contains(x.witness))
    throw OutOfDomain("point_value: witness box leaves the net's grid");
  GenNumber out;
  for (double eps : grid.values) out.values.push_back({eps, f.eval(eps, x.path(eps))});
  out.classification = classify_scalar_net(out.values, model, policy);
  return out;
}

/// Equivalence of generalized points: |x_eps - y_eps| negligible.
inline std::pair<bool, Classification> gen_point_equiv(const GenPoint& x, const GenPoint& y,
                                                       const EpsGrid& grid, const ScaleModel& model,
                                                       const FitPolicy& policy = {}) {
  if (x.dim != y.dim) throw DimMismatch("gen_point_equiv: dimension mismatch");
  std::vector<std::pair<double, cplx>> diffs;
  for (double eps : grid.values) {
    const Point a = x.path(eps), b = y.path(eps);
    diffs.push_back({eps, cplx(norm2({a[0] - b[0], a[1] - b[1]}, x.dim), 0.0)});
  }
  const auto c = classify_scalar_net(diffs, model, policy);
  const bool equiv = c.verdict == Verdict::ExactZero || c.verdict == Verdict::Negligible;
  return {equiv, c};
}

/// Deterministic witness for non-null nets: tracks the grid argmax of |f_eps|,
/// ties broken toward the smallest coordinate (scan order).
inline GenPoint argmax_witness_path(const Net& f, const Box& box, const EpsGrid& grid) {
  auto points = std::make_shared<std::map<double, Point>>();
  for (double eps : grid.values) {
    double best = -1.0;
    Point best_p{box.lo[0], box.lo[1]};
    for (long idx = 0; idx < box.total_samples(); ++idx) {
      const Point p = box.point_at(idx);
      const double m = std::abs(f.eval(eps, p));
      if (m > best) {
        best = m;
        best_p = p;
      }
    }
    (*points)[eps] = best_p;
  }
  GenPoint g;
  g.dim = f.dim;
  g.compactly_supported = true;
  Box w;
  w.dim = f.dim;
  for (int ax = 0; ax < f.dim; ++ax) {
    w.lo[ax] = box.lo[ax];
    w.hi[ax] = box.hi[ax];
    w.n[ax] = 1;
  }
  g.witness = w;
  g.path = [points](double eps) {
    auto it = points->find(eps);
    if (it != points->end()) return it->second;
    it = points->lower_bound(eps);
    if (it == points->end()) --it;
    return it->second;
  };
  return g;
}

// ---------------------------------------------------------------------------
// Equality hierarchy

struct EqualityMode {
  enum Kind { Strong, TSense, Associated } kind = Strong;
  double t = 0.0;  ///< order parameter for TSense, in [sigma, 3 sigma - 1]

  static EqualityMode strong() { return {Strong, 0.0}; }
  static EqualityMode t_sense(double t) { return {TSense, t}; }
  static EqualityMode associated() { return {Associated, 0.0}; }
};

struct PairTest {
  std::string name;
  std::function<double(const Point&)> fn;  ///< Gevrey bump test function
};

struct EqualityVerdict {
  EqualityMode mode;
  bool holds = false;
  Classification strong_class;                       ///< Strong mode
  std::vector<Classification> pairing_classes;       ///< TSense mode
  std::vector<std::vector<double>> pairing_tails;    ///< Associated: |pairing| per eps
  std::string notes;
};

namespace detail {

/// Pairing integral of (f - g) against a test function. In 1D the quadrature
/// runs on the working grid merged with both nets' fine-structure points, so
/// spikes narrower than a grid cell keep their mass.
inline cplx pairing_integral(const Net& f, const Net& g, const std::function<double(const Point&)>& test,
                             const Box& box, double eps) {
  if (box.dim == 2) {
    cplx acc = 0.0;
    for (long idx = 0; idx < box.total_samples(); ++idx) {
      const Point p = box.point_at(idx);
      acc += (f.eval(eps, p) - g.eval(eps, p)) * test(p);
    }
    return acc * box.dx(0) * box.dx(1);
  }
  std::vector<double> xs;
  xs.reserve(box.n[0] + 4096);
  for (int j = 0; j < box.n[0]; ++j) xs.push_back(box.coord(0, j));
  auto add_fine = [&](const Net& n) {
    if (!n.fine_points) return;
    for (const Point& p : n.fine_points(eps))
      if (p[0] >= box.lo[0] && p[0] <= box.hi[0]) xs.push_back(p[0]);
  };
  add_fine(f);
  add_fine(g);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  cplx acc = 0.0;
  cplx prev_v = (f.eval(eps, {xs[0], 0.0}) - g.eval(eps, {xs[0], 0.0})) * test({xs[0], 0.0});
  for (size_t i = 1; i < xs.size(); ++i) {
    const cplx v = (f.eval(eps, {xs[i], 0.0}) - g.eval(eps, {xs[i], 0.0})) * test({xs[i], 0.0});
    acc += 0.5 * (prev_v + v) * (xs[i] - xs[i - 1]);
    prev_v = v;
  }
  return acc;
}

}  // namespace detail

inline EqualityVerdict equality_test(const Net& f, const Net& g, const EqualityMode& mode,
                                     const std::vector<PairTest>& tests, const Box& box,
                                     const EpsGrid& grid, const ScaleModel& model,
                                     const FitPolicy& policy = {}, double assoc_tol = 1e-3) {
  if (f.dim != g.dim) throw DimMismatch("equality_test: dimension mismatch");
  EqualityVerdict out;
  out.mode = mode;
  if (mode.kind == EqualityMode::Strong) {
    const Net diff = combine(f, g, CombineOp::Add, 1.0, -1.0);
    FunctionClassOptions opt;
    opt.max_order = 1;
    out.strong_class = classify_function_net(diff, box, grid, model, policy, opt);
    out.holds = out.strong_class.verdict == Verdict::Negligible ||
                out.strong_class.verdict == Verdict::ExactZero;
    return out;
  }
  if (tests.empty()) throw InsufficientData("equality_test: pairing tests required");
  if (mode.kind == EqualityMode::TSense) {
    if (mode.t < model.sigma || mode.t > 3.0 * model.sigma - 1.0)
      throw DomainError("equality_test: t must lie in [sigma, 3 sigma - 1]");
    const ScaleModel tmodel = scale_exponent(mode.t);
    out.holds = true;
    for (const auto& test : tests) {
      std::vector<std::pair<double, cplx>> pairing;
      for (double eps : grid.values)
        pairing.push_back({eps, detail::pairing_integral(f, g, test.fn, box, eps)});
      const auto c = classify_scalar_net(pairing, tmodel, policy);
      out.pairing_classes.push_back(c);
      out.holds = out.holds &&
                  (c.verdict == Verdict::Negligible || c.verdict == Verdict::ExactZero);
    }
    return out;
  }
  // Associated: each pairing tends to 0 (last three magnitudes nonincreasing
  // and the final one below tolerance).
  out.holds = true;
  for (const auto& test : tests) {
    std::vector<double> mags;
    for (double eps : grid.values)
      mags.push_back(std::abs(detail::pairing_integral(f, g, test.fn, box, eps)));
    out.pairing_tails.push_back(mags);
    const size_t n = mags.size();
    const bool decreasing = mags[n - 1] <= mags[n - 2] + assoc_tol * 0.01 &&
                            mags[n - 2] <= mags[n - 3] + assoc_tol * 0.01;
    out.holds = out.holds && decreasing && mags[n - 1] < assoc_tol;
  }
  return out;
}

}  // namespace ultraglab
