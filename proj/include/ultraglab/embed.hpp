#pragma once

/// Symbolic compactly supported ultradistributions and their convolution
/// embeddings: against the plain mollifier net (J0) and against the
/// log-cutoff mollifier net (J).

#include "ultraglab/builtins.hpp"

namespace ultraglab {

struct Atom {
  enum Kind { DeltaDeriv, Jump, Density, SeriesTerm } kind = DeltaDeriv;
  MultiIndex order;       ///< derivative order (DeltaDeriv) or gamma (SeriesTerm)
  Point location{0.0, 0.0};
  cplx coeff = 1.0;       ///< weight, or a_gamma for series terms
  Box sample_box;         ///< Density / SeriesTerm payloads
  std::vector<cplx> samples;
};

/// Finite model of a compactly supported ultradistribution:
/// sum of derivative-of-delta atoms, jumps, densities and truncated
/// structure-series terms sum_gamma a_gamma D^gamma f_gamma.
struct DistributionExpr {
  int dim = 1;
  std::vector<Atom> atoms;
  Box support_box;
  double sigma_order = 5.0;  ///< order in the coefficient bound (series atoms)
  double series_c = 1.0;     ///< |a_gamma| <= series_c * series_h^|gamma| / (gamma!)^sigma_order
  double series_h = 1.0;
  double series_M = 1.0;     ///< declared sup bound for the f_gamma

  void validate() const {
    for (const auto& a : atoms) {
      if (a.kind == Atom::DeltaDeriv || a.kind == Atom::Jump) {
        if (!support_box.contains(a.location))
          throw SupportError("DistributionExpr: atom location outside the support box");
      } else {
        double sup = 0.0;
        for (long idx = 0; idx < long(a.samples.size()); ++idx) {
          const double m = std::abs(a.samples[idx]);
          if (m == 0.0) continue;
          if (!support_box.contains(a.sample_box.point_at(idx)))
            throw SupportError("DistributionExpr: nonzero samples outside the support box");
          sup = std::max(sup, m);
        }
        if (sup > series_M * (1.0 + 1e-12))
          throw SeriesBoundViolation("DistributionExpr: density exceeds the declared sup bound");
      }
      if (a.kind == Atom::SeriesTerm) {
        const double bound = series_c * std::pow(series_h, a.order.order()) /
                             std::pow(multi_factorial(a.order), sigma_order);
        if (std::abs(a.coeff) > bound * (1.0 + 1e-12))
          throw SeriesBoundViolation("DistributionExpr: coefficient " + a.order.str() +
                                     " violates the declared decay bound");
      }
    }
  }
};

struct EmbeddingReport {
  Net net;
  std::string method;  ///< "J0" or "J"
  std::map<MultiIndex, AsymptoticFit> per_alpha_growth;
  std::string notes;
};

namespace detail {

/// Per-eps spectral convolution arrays for density-type atoms: the atom's
/// samples filtered by the symbol coeff * (i xi)^gamma * chi(eps xi).
/// Exact for band-limited data even when eps is far below the grid spacing.
struct ConvolvedAtom {
  Box box;
  std::map<double, std::array<std::vector<cplx>, 3>> per_eps;  // orders 0..2
};

/// Evaluation points for sup estimates of an embedded net at one eps:
/// a coarsened working grid plus, around every point atom, the eps-scaled
/// mollifier grid (where the kernel's fine structure actually lives).
inline std::vector<Point> embedding_sup_points(const DistributionExpr& T, const Mollifier& moll,
                                               const Box& working_box, double eps) {
  std::vector<Point> pts;
  const long stride = std::max<long>(1, working_box.total_samples() / 2048);
  for (long idx = 0; idx < working_box.total_samples(); idx += stride)
    pts.push_back(working_box.point_at(idx));
  for (const auto& a : T.atoms) {
    if (a.kind != Atom::DeltaDeriv && a.kind != Atom::Jump) continue;
    const int n = moll.box.n[0];
    for (int j = 0; j < n; j += 2) {
      const double t = moll.box.coord(0, j);
      Point p = a.location;
      p[0] += eps * t;
      if (working_box.contains(p)) pts.push_back(p);
      if (T.dim == 2) {
        Point q = a.location;
        q[1] += eps * t;
        if (working_box.contains(q)) pts.push_back(q);
      }
    }
  }
  return pts;
}

template <class ValueAt>
inline void fill_growth_report(EmbeddingReport& report, const DistributionExpr& T,
                               const Mollifier& moll, const EpsGrid& grid,
                               const Box& working_box, int growth_orders,
                               const ValueAt& value_at) {
  const ScaleModel model = scale_exponent(moll.sigma);
  const FitPolicy policy;
  for (const auto& al : multi_indices_upto(T.dim, growth_orders)) {
    std::vector<ScalarSample> sups;
    try {
      for (double eps : grid.values) {
        double sup = 0.0;
        for (const Point& p : embedding_sup_points(T, moll, working_box, eps)) {
          if (report.net.support && !report.net.support->contains(p)) continue;
          sup = std::max(sup, std::abs(value_at(al, eps, p)));
        }
        sups.push_back({eps, sup});
      }
    } catch (const DerivativeUnavailable&) {
      continue;  // 2D density atoms carry axis-0 derivatives only
    }
    auto fit = fit_or_saturated(sups, model, policy);
    if (fit) report.per_alpha_growth[al] = *fit;
  }
}

inline ConvolvedAtom convolve_density(const Atom& atom, const Mollifier& moll,
                                      const EpsGrid& grid) {
  ConvolvedAtom out;
  out.box = atom.sample_box;
  const auto& chi = moll.freq_profile;
  for (double eps : grid.values) {
    auto& slots = out.per_eps[eps];
    for (int q = 0; q <= 2; ++q) {
      const int g0 = atom.order[0] + q;
      if (atom.sample_box.dim == 1) {
        slots[q] = apply_fourier_symbol_1d(
            atom.sample_box, atom.samples, [&](double xi) {
              return std::pow(cplx(0.0, xi), g0) * chi.value_radial(std::abs(eps * xi));
            });
      } else {
        // 2D: the evaluation-time derivative applies along axis 0 only
        slots[q] = apply_fourier_symbol_2d(
            atom.sample_box, atom.samples, [&](double xi0, double xi1) {
              return std::pow(cplx(0.0, xi0), atom.order[0] + q) *
                     std::pow(cplx(0.0, xi1), atom.order[1]) *
                     chi.value_radial(std::abs(eps * xi0)) *
                     chi.value_radial(std::abs(eps * xi1));
            });
      }
    }
  }
  return out;
}

}  // namespace detail

/// T * phi_eps as a net. Delta derivatives and jumps are evaluated
/// semi-analytically from the mollifier profile; densities and series terms
/// by spectral convolution on their sample grids.
inline EmbeddingReport embed_compact(const DistributionExpr& T,
                                     std::shared_ptr<const Mollifier> moll, const EpsGrid& grid,
                                     const Box& working_box,
                                     int growth_orders = 2) {
  T.validate();
  if (!working_box.contains(T.support_box))
    throw SupportError("embed_compact: support box must lie inside the working box");

  struct AtomEval {
    Atom atom;
    std::shared_ptr<detail::ConvolvedAtom> conv;  // density-type only
  };
  auto evals = std::make_shared<std::vector<AtomEval>>();
  for (const auto& a : T.atoms) {
    AtomEval ae;
    ae.atom = a;
    if (a.kind == Atom::Density || a.kind == Atom::SeriesTerm)
      ae.conv = std::make_shared<detail::ConvolvedAtom>(detail::convolve_density(a, *moll, grid));
    evals->push_back(std::move(ae));
  }

  const int dim = T.dim;
  auto value_at = [moll, evals, dim](const MultiIndex& al, double eps, const Point& x) -> cplx {
    cplx sum = 0.0;
    for (const auto& ae : *evals) {
      const Atom& a = ae.atom;
      switch (a.kind) {
        case Atom::DeltaDeriv: {
          cplx v = a.coeff * std::pow(eps, -dim - a.order.order() - al.order());
          for (int ax = 0; ax < dim; ++ax)
            v *= moll->value((x[ax] - a.location[ax]) / eps, a.order[ax] + al[ax]);
          sum += v;
          break;
        }
        case Atom::Jump: {
          // 1D step: CDF of the mollifier; derivatives shift down to phi
          const double t = (x[0] - a.location[0]) / eps;
          if (al.order() == 0) {
            sum += a.coeff * moll->cdf_value(t);
          } else {
            sum += a.coeff * std::pow(eps, -double(al.order())) * moll->value(t, al.order() - 1);
          }
          break;
        }
        case Atom::Density:
        case Atom::SeriesTerm: {
          auto it = ae.conv->per_eps.find(eps);
          if (it == ae.conv->per_eps.end())
            throw OutOfDomain("embedded net: eps not in the embedding grid");
          if (al.order() > 2 || (dim == 2 && al[1] > 0))
            throw DerivativeUnavailable("embedded density: derivative order not precomputed");
          sum += a.coeff * interp_cubic(ae.conv->box, it->second[al.order()], x);
          break;
        }
      }
    }
    return sum;
  };

  EmbeddingReport report;
  report.method = "J0";
  Net& net = report.net;
  net.id = "embedded";
  net.dim = dim;
  net.provenance = "embed:J0";
  net.max_analytic_order = 2;
  Box supp = T.support_box;
  for (int ax = 0; ax < dim; ++ax) {
    supp.lo[ax] = std::max(working_box.lo[ax], supp.lo[ax] + moll->box.lo[0]);
    supp.hi[ax] = std::min(working_box.hi[ax], supp.hi[ax] + moll->box.hi[0]);
  }
  net.support = supp;
  net.sample_grid = working_box;
  net.evaluator = [value_at](double eps, const Point& x) { return value_at(MultiIndex{0}, eps, x); };
  net.derivative_provider = value_at;

  detail::fill_growth_report(report, T, *moll, grid, working_box, growth_orders, value_at);
  return report;
}

/// T * rho_eps with the log-cutoff mollifier net. Deltas and jumps are
/// semi-analytic from the cutoff net and its scaled cumulative integral;
/// densities fall back to direct quadrature on the mollifier grid.
inline EmbeddingReport embed_cutoff(const DistributionExpr& T,
                                    std::shared_ptr<const Mollifier> moll,
                                    std::shared_ptr<const CutoffProfile> cut, const EpsGrid& grid,
                                    const Box& working_box, int growth_orders = 2) {
  T.validate();
  if (!working_box.contains(T.support_box))
    throw SupportError("embed_cutoff: support box must lie inside the working box");
  const Net rho = cutoff_mollifier_net(moll, cut, T.dim);

  // per-eps cumulative of rho on the eps-scaled mollifier grid (1D jumps)
  auto rho_cdf = std::make_shared<std::map<double, std::vector<cplx>>>();
  if (T.dim == 1) {
    for (double eps : grid.values) {
      const int n = moll->box.n[0];
      const double dt = moll->box.dx(0);
      std::vector<cplx> cdf(n);
      cplx acc = 0.0;
      cplx prev = rho.eval(eps, {moll->box.coord(0, 0) * eps, 0.0});
      cdf[0] = 0.0;
      for (int j = 1; j < n; ++j) {
        const cplx cur = rho.eval(eps, {moll->box.coord(0, j) * eps, 0.0});
        acc += 0.5 * (prev + cur) * dt * eps;
        cdf[j] = acc;
        prev = cur;
      }
      (*rho_cdf)[eps] = std::move(cdf);
    }
  }

  auto evals = std::make_shared<std::vector<Atom>>(T.atoms);
  const int dim = T.dim;
  const Box moll_box = moll->box;
  auto value_at = [rho, evals, rho_cdf, dim, moll_box](const MultiIndex& al, double eps,
                                                       const Point& x) -> cplx {
    cplx sum = 0.0;
    for (const auto& a : *evals) {
      switch (a.kind) {
        case Atom::DeltaDeriv: {
          MultiIndex total{a.order[0] + al[0], a.order[1] + al[1]};
          Point sh{x[0] - a.location[0], dim == 2 ? x[1] - a.location[1] : 0.0};
          sum += a.coeff * (total.order() == 0 ? rho.eval(eps, sh)
                                               : rho.eval_derivative(total, eps, sh));
          break;
        }
        case Atom::Jump: {
          const double t = (x[0] - a.location[0]) / eps;
          if (al.order() == 0) {
            auto& cdf = rho_cdf->at(eps);
            const double dx2 = moll_box.dx(0);
            if (t <= moll_box.lo[0] + 2 * dx2) break;
            if (t >= moll_box.hi[0] - 3 * dx2) {
              sum += a.coeff * cdf.back();
            } else {
              sum += a.coeff * interp_cubic_1d(moll_box, cdf, t);
            }
          } else {
            MultiIndex down{al[0] - 1, 0};
            Point sh{x[0] - a.location[0], 0.0};
            sum += a.coeff *
                   (down.order() == 0 ? rho.eval(eps, sh) : rho.eval_derivative(down, eps, sh));
          }
          break;
        }
        case Atom::Density:
        case Atom::SeriesTerm: {
          // direct quadrature sum_j f(x - eps t_j) d^gamma rho_eps(eps t_j) eps dt
          cplx acc = 0.0;
          const int n = moll_box.n[0];
          const double dt = moll_box.dx(0);
          for (int j = 0; j < n; ++j) {
            const double t = moll_box.coord(0, j);
            const Point y{x[0] - eps * t, 0.0};
            const cplx fv = interp_cubic(a.sample_box, a.samples, y);
            if (fv == 0.0) continue;
            const MultiIndex g{a.order[0] + al[0], 0};
            const cplx kv = g.order() == 0 ? rho.eval(eps, {eps * t, 0.0})
                                           : rho.eval_derivative(g, eps, {eps * t, 0.0});
            acc += fv * kv;
          }
          sum += a.coeff * acc * dt * eps;
          break;
        }
      }
    }
    return sum;
  };

  EmbeddingReport report;
  report.method = "J";
  Net& net = report.net;
  net.id = "embedded_cutoff";
  net.dim = dim;
  net.provenance = "embed:J";
  net.max_analytic_order = dim == 1 ? 2 : 1;
  Box supp = T.support_box;
  for (int ax = 0; ax < dim; ++ax) {
    supp.lo[ax] = std::max(working_box.lo[ax], supp.lo[ax] + moll->box.lo[0]);
    supp.hi[ax] = std::min(working_box.hi[ax], supp.hi[ax] + moll->box.hi[0]);
  }
  net.support = supp;
  net.sample_grid = working_box;
  net.evaluator = [value_at](double eps, const Point& x) { return value_at(MultiIndex{0}, eps, x); };
  net.derivative_provider = value_at;

  detail::fill_growth_report(report, T, *moll, grid, working_box, growth_orders, value_at);
  return report;
}

/// Decay fit of sup |f * phi_eps - f| for a smooth compactly supported f
/// sampled on `box`; optional derivative orders up to 2.
inline std::map<MultiIndex, AsymptoticFit> embedding_error(const std::vector<cplx>& f_samples,
                                                           const Box& box,
                                                           const Mollifier& moll,
                                                           const EpsGrid& grid, int max_order = 0) {
  if (long(f_samples.size()) != box.total_samples())
    throw InsufficientData("embedding_error: sample count mismatch");
  const auto& chi = moll.freq_profile;
  const ScaleModel model = scale_exponent(moll.sigma);
  std::map<MultiIndex, AsymptoticFit> out;
  bool all_zero = true;
  for (const auto& v : f_samples)
    if (v != 0.0) all_zero = false;
  for (const auto& al : multi_indices_upto(box.dim, max_order)) {
    std::vector<ScalarSample> sups;
    for (double eps : grid.values) {
      std::vector<cplx> err;
      if (box.dim == 1) {
        err = apply_fourier_symbol_1d(box, f_samples, [&](double xi) {
          return std::pow(cplx(0.0, xi), al[0]) * (chi.value_radial(std::abs(eps * xi)) - 1.0);
        });
      } else {
        err = apply_fourier_symbol_2d(box, f_samples, [&](double xi0, double xi1) {
          return std::pow(cplx(0.0, xi0), al[0]) * std::pow(cplx(0.0, xi1), al[1]) *
                 (chi.value_radial(std::abs(eps * xi0)) * chi.value_radial(std::abs(eps * xi1)) -
                  1.0);
        });
      }
      double sup = 0.0;
      for (const auto& v : err) sup = std::max(sup, std::abs(v));
      sups.push_back({eps, sup});
    }
    if (all_zero) {
      AsymptoticFit fit;
      fit.k = kInfRate;
      fit.sign = -1;
      out[al] = fit;
      continue;
    }
    // spectral-noise floor: differences below it are numerically zero
    double scale = 0.0;
    for (const auto& v : f_samples) scale = std::max(scale, std::abs(v));
    FitPolicy policy;
    policy.floor = std::max(kNumericFloor, 1e-12 * scale);
    auto fit = detail::fit_or_saturated(sups, model, policy);
    if (!fit) throw InsufficientData("embedding_error: too few usable sup values");
    out[al] = *fit;
  }
  return out;
}

struct SeriesNetResult {
  Net net;
  double tail_bound = 0.0;  ///< estimated truncation tail at the smallest eps
  int terms_used = 0;
};

/// Truncated structure-series sum_{|gamma| <= cap} a_gamma (f_gamma * D^gamma phi_eps),
/// with the declared-coefficient tail estimate.
inline SeriesNetResult series_net(const DistributionExpr& T,
                                  std::shared_ptr<const Mollifier> moll, const EpsGrid& grid,
                                  const Box& working_box, int gamma_cap = 8) {
  T.validate();
  DistributionExpr truncated = T;
  truncated.atoms.clear();
  int used = 0;
  for (const auto& a : T.atoms) {
    if (a.kind != Atom::SeriesTerm)
      throw DomainError("series_net: expression must contain series terms only");
    if (a.order.order() <= gamma_cap) {
      truncated.atoms.push_back(a);
      ++used;
    }
  }
  auto report = embed_compact(truncated, moll, grid, working_box, 0);

  // tail: sum over |gamma| > cap of |a_gamma| eps^-|gamma| M int |d^gamma phi|,
  // with int |d^gamma phi| taken from the samples up to the stored order and
  // extrapolated through the S^sigma norm beyond it
  const double eps_min = grid.values.back();
  const double norm1 = s_sigma_norm(*moll, 1.0, 6);
  double tail = 0.0;
  for (int g = gamma_cap + 1; g <= gamma_cap + 40; ++g) {
    const double a_bound =
        T.series_c * std::pow(T.series_h, g) / std::pow(factorial(g), T.sigma_order);
    double dphi_l1;
    if (g <= kMollDerivCap) {
      dphi_l1 = 0.0;
      for (int j = 0; j < moll->box.n[0]; ++j) dphi_l1 += std::abs(moll->deriv_samples[g][j]);
      dphi_l1 *= moll->box.dx(0);
    } else {
      dphi_l1 = norm1 * std::pow(factorial(g), moll->sigma);
    }
    tail += a_bound * std::pow(eps_min, -double(g)) * T.series_M * dphi_l1;
  }
  SeriesNetResult out;
  out.net = report.net;
  out.net.id = "series";
  out.tail_bound = tail;
  out.terms_used = used;
  return out;
}

}  // namespace ultraglab
