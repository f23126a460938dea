#pragma once

/// The built-in acceptance battery: one function per criterion, each
/// returning a pass/fail record with measured details. `selftest` runs them
/// all and prints one line per criterion.

#include <chrono>
#include <functional>

#include "ultraglab/rng.hpp"
#include "ultraglab/scenario.hpp"

namespace ultraglab {

/// Threshold for the embedding-error decay rate, fixed from an oracle run of
/// the same computation at n = 8192 (observed rate 10.16; half of it is
/// recorded here so grid-resolution differences cannot flip the verdict).
inline constexpr double kEmbeddingErrorMinRate = 5.0;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string details;
  double seconds = 0.0;
};

namespace selftest_detail {

struct Env {
  std::shared_ptr<const Mollifier> moll2;  // sigma = 2 mollifier
  Box box1d = Box::make1d(-2.0, 2.0, 4096);
  Box box2d = Box::make2d(-2.0, 2.0, 256, -2.0, 2.0, 256);
  EpsGrid grid = EpsGrid::standard();

  static Env& instance() {
    static Env env = [] {
      Env e;
      e.moll2 = std::make_shared<Mollifier>(build_mollifier(2.0, Box::make1d(-8, 8, 4096)));
      return e;
    }();
    return env;
  }
};

inline std::vector<Point> probes_1d() {
  std::vector<Point> p;
  for (double x : {-1.5, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 1.5}) p.push_back({x, 0.0});
  return p;
}

inline std::vector<Point> probes_2d() {
  std::vector<Point> p;
  for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0})
    for (double y : {-1.0, -0.5, 0.0, 0.5, 1.0}) p.push_back({x, y});
  return p;
}

/// eps-amplitude net: amp(eps) in x, flat derivatives. Used to manufacture
/// negligible representatives with a prescribed decay rate.
inline Net amplitude_net(double k, double s) {
  Net n;
  n.id = "amp";
  n.dim = 1;
  n.provenance = "synthetic";
  n.max_analytic_order = 99;
  n.evaluator = [k, s](double eps, const Point&) {
    return cplx(std::exp(-k * std::pow(eps, -s)), 0.0);
  };
  n.derivative_provider = [](const MultiIndex&, double, const Point&) { return cplx(0.0); };
  return n;
}

/// sin(x / eps) with exact derivatives; pairs with amplitude_net for the
/// oscillatory negligible battery entries.
inline Net fast_oscillation_net() {
  Net n;
  n.id = "osc";
  n.dim = 1;
  n.provenance = "synthetic";
  n.max_analytic_order = 99;
  n.evaluator = [](double eps, const Point& x) { return cplx(std::sin(x[0] / eps), 0.0); };
  n.derivative_provider = [](const MultiIndex& al, double eps, const Point& x) {
    const int q = al[0];
    return cplx(std::pow(eps, -q) * std::sin(x[0] / eps + q * kPi / 2.0), 0.0);
  };
  return n;
}

inline std::string verdict_str(const Classification& c) { return to_string(c.verdict); }

}  // namespace selftest_detail

// ---------------------------------------------------------------------------

inline CriterionResult criterion_scale_fit_recovery(std::uint64_t seed) {
  using namespace selftest_detail;
  CriterionResult r{1, "scale-fit recovery (60 synthetic nets)"};
  const auto model = scale_exponent(2.0);
  const auto grid = EpsGrid::standard();
  CounterRng rng{seed};
  int fails = 0;
  double worst_clean = 0.0, worst_noisy = 0.0;
  std::uint64_t ctr = 0;
  for (int i = 0; i < 30; ++i) {
    const double c = 0.1 * std::pow(100.0, rng.uniform(ctr++));
    const double k = 0.5 + 9.5 * rng.uniform(ctr++);
    const int sign = rng.uniform(ctr++) < 0.5 ? +1 : -1;
    std::vector<ScalarSample> clean, noisy;
    for (double eps : grid.values) {
      const double v = c * std::exp(sign * k * model.eps_feature(eps));
      clean.push_back({eps, v});
      noisy.push_back({eps, v * (1.0 + 0.05 * rng.normal(ctr++))});
    }
    const auto f1 = fit_single_scale(clean, model);
    const double e1 = std::abs(f1.k - k) / k;
    worst_clean = std::max(worst_clean, e1);
    if (e1 > 1e-6 || f1.sign != sign) ++fails;
    const auto f2 = fit_single_scale(noisy, model);
    const double e2 = std::abs(f2.k - k) / k;
    worst_noisy = std::max(worst_noisy, e2);
    if (e2 > 0.10) ++fails;
  }
  r.passed = fails == 0;
  r.details = "worst rel err: clean " + format_double(worst_clean) + ", noisy " +
              format_double(worst_noisy);
  return r;
}

inline CriterionResult criterion_mollifier_moments() {
  using namespace selftest_detail;
  CriterionResult r{2, "mollifier moments (unit mass, flat to order 6)"};
  const auto& m = *Env::instance().moll2;
  const double mass_err = m.diagnostics.moment_errors.at(0);
  double worst_high = 0.0;
  for (int q = 1; q <= 6; ++q)
    worst_high = std::max(worst_high, m.diagnostics.moment_errors.at(q));
  r.passed = mass_err <= 1e-8 && worst_high <= 1e-6;
  r.details = "mass err " + format_double(mass_err) + ", worst moment " +
              format_double(worst_high);
  return r;
}

inline CriterionResult criterion_embedding_error() {
  using namespace selftest_detail;
  CriterionResult r{3, "embedding consistency (bump smoothing error decay)"};
  auto& env = Env::instance();
  // measurable regime: narrow taper, eps range where the symbol is active
  const auto grid = EpsGrid::geometric(0.3, 0.02, 10);
  CutoffProfile prof;
  prof.sigma = 2.0;
  prof.r_inner = 0.95;
  prof.r_outer = 1.0;
  std::vector<cplx> f(env.box1d.n[0]);
  for (int j = 0; j < env.box1d.n[0]; ++j)
    f[j] = prof.value_radial(std::abs(env.box1d.coord(0, j)));
  const auto fits = embedding_error(f, env.box1d, *env.moll2, grid, 1);
  const auto& f0 = fits.at(MultiIndex{0});
  const auto& f1 = fits.at(MultiIndex{1});
  const bool measured_ok = f0.sign < 0 && f0.k >= kEmbeddingErrorMinRate && f1.sign < 0;

  // standard grid: the error underflows to exact zero, which classifies as
  // decay at the rate cap
  const auto fits_std = embedding_error(f, env.box1d, *env.moll2, env.grid, 0);
  const auto& s0 = fits_std.at(MultiIndex{0});
  const bool saturated_ok = s0.sign < 0 && s0.k >= 2.0;

  r.passed = measured_ok && saturated_ok;
  r.details = "measured k_hat " + format_double(f0.k) + " (threshold " +
              format_double(kEmbeddingErrorMinRate) + "), standard-grid k_hat " +
              format_double(s0.k);
  return r;
}

inline CriterionResult criterion_j_vs_j0() {
  using namespace selftest_detail;
  CriterionResult r{4, "log-cutoff vs plain embedding discrepancy"};
  auto& env = Env::instance();
  auto cut = std::make_shared<CutoffProfile>();
  cut->sigma = 2.0;
  cut->r_inner = 1.0;
  cut->r_outer = 2.0;
  const auto model = scale_exponent(2.0);
  FitPolicy pol;
  pol.floor = 1e-9;  // double-precision noise floor for O(1/eps) differences
  bool ok = true;
  std::string det;
  for (auto kind : {Atom::DeltaDeriv, Atom::Jump}) {
    DistributionExpr T;
    T.dim = 1;
    T.support_box = Box::make1d(-0.1, 0.1, 2);
    T.atoms.push_back({kind, MultiIndex{0}, {0.0, 0.0}, 1.0, {}, {}});
    const auto r0 = embed_compact(T, env.moll2, env.grid, env.box1d, 0);
    const auto r1 = embed_cutoff(T, env.moll2, cut, env.grid, env.box1d, 0);
    std::vector<std::pair<double, cplx>> sup_net;
    for (double eps : env.grid.values) {
      double sup = 0.0;
      for (long j = 0; j < env.box1d.total_samples(); ++j) {
        const Point p = env.box1d.point_at(j);
        sup = std::max(sup, std::abs(r0.net.eval(eps, p) - r1.net.eval(eps, p)));
      }
      sup_net.push_back({eps, sup});
    }
    const auto c = classify_scalar_net(sup_net, model, pol);
    const bool this_ok = (c.verdict == Verdict::Negligible || c.verdict == Verdict::ExactZero) &&
                         c.is_negligible_at(1.0);
    ok = ok && this_ok;
    det += std::string(kind == Atom::Jump ? "H" : "delta") + ": " + verdict_str(c) + " k_hat " +
           (c.k_hat == kInfRate ? "inf" : format_double(c.k_hat)) + "; ";
  }
  r.passed = ok;
  r.details = det;
  return r;
}

inline CriterionResult criterion_algebra_laws() {
  using namespace selftest_detail;
  CriterionResult r{5, "algebra laws and null characterization (20-net battery)"};
  auto& env = Env::instance();
  const auto model = scale_exponent(2.0);
  const double s = model.s;
  BuiltinParams bp;
  bp.mollifier = env.moll2;

  std::vector<Net> moderate = {
      builtin_net("gaussian"),
      builtin_net("gevrey_bump"),
      builtin_net("cauchy"),
      builtin_net("mollified_delta", bp),
      builtin_net("mollified_heaviside", bp),
      combine(builtin_net("mollified_delta", bp), builtin_net("mollified_delta", bp),
              CombineOp::Mul),
      combine(builtin_net("gaussian"), builtin_net("cauchy"), CombineOp::Mul),
      compose_polynomial(builtin_net("gaussian"), {0.0, -2.0, 0.0, 1.0}),
      derivative(builtin_net("mollified_delta", bp), MultiIndex{1}),
      constant_net(1, 1.0),
  };
  std::vector<Net> negligible;
  int i = 0;
  for (double k : {2.0, 2.5, 3.0, 4.0, 5.0, 6.0}) {
    const Net profile = (i++ % 2 == 0) ? builtin_net("gaussian") : builtin_net("gevrey_bump");
    negligible.push_back(combine(amplitude_net(k, s), profile, CombineOp::Mul));
  }
  negligible.push_back(combine(amplitude_net(2.0, s), fast_oscillation_net(), CombineOp::Mul));
  negligible.push_back(combine(amplitude_net(3.0, s), fast_oscillation_net(), CombineOp::Mul));
  negligible.push_back(combine(amplitude_net(2.5, s), builtin_net("cauchy"), CombineOp::Mul));
  negligible.push_back(
      combine(amplitude_net(4.0, s), builtin_net("mollified_heaviside", bp), CombineOp::Mul));

  FunctionClassOptions fast, full;
  fast.max_order = 2;
  full.max_order = 2;
  full.full_per_alpha = true;

  int checks = 0, fails = 0;
  auto expect = [&](const Classification& c, Verdict want) {
    ++checks;
    if (c.verdict != want) ++fails;
  };
  // product closure: moderate x moderate stays moderate
  for (size_t j = 0; j < moderate.size(); ++j) {
    const Net prod =
        combine(moderate[j], moderate[(j + 3) % moderate.size()], CombineOp::Mul);
    expect(classify_function_net(prod, env.box1d, env.grid, model, {}, fast), Verdict::Moderate);
  }
  // ideal property: moderate x negligible is negligible
  for (size_t j = 0; j < negligible.size(); ++j) {
    const Net prod = combine(moderate[j], negligible[j], CombineOp::Mul);
    const auto c = classify_function_net(prod, env.box1d, env.grid, model, {}, fast);
    ++checks;
    if (!(c.verdict == Verdict::Negligible || c.verdict == Verdict::ExactZero)) ++fails;
  }
  // null characterization: fast path agrees with the full per-order check
  int carn_checks = 0, carn_fails = 0;
  auto carn = [&](const Net& n) {
    ++carn_checks;
    const auto a = classify_function_net(n, env.box1d, env.grid, model, {}, fast);
    const auto b = classify_function_net(n, env.box1d, env.grid, model, {}, full);
    if (a.verdict != b.verdict) ++carn_fails;
  };
  for (const auto& n : moderate) carn(n);
  for (const auto& n : negligible) carn(n);

  r.passed = fails == 0 && carn_fails == 0;
  r.details = std::to_string(checks) + " product checks, " + std::to_string(fails) +
              " failures; null-characterization agreement " +
              std::to_string(carn_checks - carn_fails) + "/" + std::to_string(carn_checks);
  return r;
}

inline CriterionResult criterion_point_values() {
  using namespace selftest_detail;
  CriterionResult r{6, "point-value battery (vanishing-points net)"};
  auto& env = Env::instance();
  const double sigma = 1.5;  // mild eps-prefactor keeps the fitted rate near 1
  const auto model = scale_exponent(sigma);
  BuiltinParams bp;
  bp.sigma = sigma;
  const Net f = builtin_net("paper_sec3_counterexample", bp);

  bool ok = true;
  std::string det;
  // classical off-origin points: the factor phi(x0/eps) vanishes identically
  for (double x0 : {-0.5, -0.25, 0.15, 0.25, 0.5}) {
    const auto v = point_value(f, GenPoint::classical(1, {x0, 0.0}), env.grid, model);
    if (v.classification.verdict != Verdict::ExactZero) {
      ok = false;
      det += "x0=" + format_double(x0) + " not ExactZero; ";
    }
  }
  // generalized point eps * x*: finite decay rate near 1
  GenPoint scaled;
  scaled.dim = 1;
  scaled.compactly_supported = true;
  scaled.witness = env.box1d;
  scaled.path = [](double eps) { return Point{0.75 * eps, 0.0}; };
  const auto v = point_value(f, scaled, env.grid, model);
  det += "scaled-point k_hat " + format_double(v.classification.k_hat);
  if (!(v.classification.verdict == Verdict::Negligible && std::abs(v.classification.k_hat - 1.0) <= 0.2))
    ok = false;
  if (v.classification.is_negligible_at(2.0)) ok = false;

  // the argmax witness carries the same non-negligibility; its values are
  // meaningful only where the shrinking profile is still grid-resolved
  EpsGrid resolved;
  for (double eps : env.grid.values)
    if (eps >= 8.0 * env.box1d.dx(0)) resolved.values.push_back(eps);
  const auto witness = argmax_witness_path(f, env.box1d, resolved);
  const auto w = point_value(f, witness, resolved, model);
  det += ", witness k_hat " + format_double(w.classification.k_hat);
  if (w.classification.is_negligible_at(2.0)) ok = false;
  if (w.classification.verdict == Verdict::ExactZero) ok = false;

  r.passed = ok;
  r.details = det;
  return r;
}

inline CriterionResult criterion_regularity_battery() {
  using namespace selftest_detail;
  CriterionResult r{7, "regularity battery (4 cases at sigma 2 and 3)"};
  auto& env = Env::instance();
  BuiltinParams bp;
  bp.mollifier = env.moll2;
  const auto part = cone_partition(1, 2);
  const MicrolocalPolicy pol;
  const Net delta = builtin_net("mollified_delta", bp);
  const Net delta2 = combine(delta, delta, CombineOp::Mul);

  bool ok = true;
  std::string det;
  for (double sigma : {2.0, 3.0}) {
    const auto model = scale_exponent(sigma);
    // masks and bumps taper in the class matching the analysis order
    BuiltinParams maskp;
    maskp.sigma = sigma;
    maskp.r_inner = 1.0;
    maskp.r_outer = 1.8;
    const Net masked_gauss =
        combine(builtin_net("gaussian"), builtin_net("gevrey_bump", maskp), CombineOp::Mul);
    BuiltinParams bumpp;
    bumpp.sigma = sigma;
    const Net bump = builtin_net("gevrey_bump", bumpp);
    const auto vg = regularity_test(masked_gauss, env.box1d, env.grid, part, model, pol);
    const auto vb = regularity_test(bump, env.box1d, env.grid, part, model, pol);
    const auto vd = regularity_test(delta, env.box1d, env.grid, part, model, pol);
    const auto v2 = regularity_test(delta2, env.box1d, env.grid, part, model, pol);
    const bool this_ok = vg.regular && vb.regular && !vd.regular && !v2.regular &&
                         vg.fit.k2 >= 0.5 && vb.fit.k2 >= 0.5 && vd.fit.k2 <= 0.1 &&
                         v2.fit.k2 <= 0.1;
    ok = ok && this_ok;
    det += "sigma " + format_double(sigma) + ": k2 g=" + format_double(vg.fit.k2) +
           " b=" + format_double(vb.fit.k2) + " d=" + format_double(vd.fit.k2) +
           " d2=" + format_double(v2.fit.k2) + "; ";
  }
  r.passed = ok;
  r.details = det;
  return r;
}

inline CriterionResult criterion_wavefront_battery() {
  using namespace selftest_detail;
  CriterionResult r{8, "wave-front battery (delta, step, boundary value, gaussian)"};
  auto& env = Env::instance();
  const auto model = scale_exponent(2.0);
  const auto part = cone_partition(1, 2);
  const MicrolocalPolicy pol;
  BuiltinParams bp;
  bp.mollifier = env.moll2;
  const auto probes = probes_1d();
  const int zero_idx = 4;  // probe at x = 0
  const double cell = env.box1d.dx(0);

  auto run = [&](const Net& n) { return wave_front(n, probes, env.box1d, env.grid, part, model, pol); };
  auto points_near_zero = [&](const WaveFrontEstimate& wf) {
    for (int p : wf.points())
      if (std::abs(wf.probes[p][0]) > 2.0 * cell + 1e-12) return false;
    return true;
  };

  bool ok = true;
  std::string det;
  {
    const auto wf = run(builtin_net("mollified_delta", bp));
    ok = ok && points_near_zero(wf) && wf.bins_at(zero_idx) == std::set<int>{0, 1} &&
         wf.points().size() == 1;
    det += "delta " + std::to_string(wf.entries.size()) + " entries; ";
  }
  {
    const auto wf = run(builtin_net("mollified_heaviside", bp));
    ok = ok && points_near_zero(wf) && wf.bins_at(zero_idx) == std::set<int>{0, 1} &&
         wf.points().size() == 1;
    det += "step " + std::to_string(wf.entries.size()) + "; ";
  }
  {
    const auto wf = run(builtin_net("cauchy"));
    ok = ok && points_near_zero(wf) && wf.bins_at(zero_idx) == std::set<int>{0} &&
         wf.points().size() == 1;
    det += "cauchy " + std::to_string(wf.entries.size()) + "; ";
  }
  {
    const auto wf = run(builtin_net("gaussian"));
    ok = ok && wf.entries.empty();
    det += "gaussian " + std::to_string(wf.entries.size());
  }
  r.passed = ok;
  r.details = det;
  return r;
}

inline CriterionResult criterion_monotonicity() {
  using namespace selftest_detail;
  CriterionResult r{9, "derivative and regular-factor monotonicity"};
  auto& env = Env::instance();
  const auto model = scale_exponent(2.0);
  const auto part = cone_partition(1, 2);
  const MicrolocalPolicy pol;
  BuiltinParams bp;
  bp.mollifier = env.moll2;
  const auto probes = probes_1d();

  auto included = [&](const WaveFrontEstimate& inner, const WaveFrontEstimate& outer) {
    std::map<int, std::set<int>> rhs;
    for (const auto& [p, b] : outer.entries) rhs[p].insert(b);
    return detail::check_inclusion(inner, rhs, part, pol, env.box1d).empty();
  };

  int checks = 0, fails = 0;
  std::vector<Net> battery = {builtin_net("mollified_delta", bp),
                              builtin_net("mollified_heaviside", bp), builtin_net("cauchy"),
                              builtin_net("gaussian")};
  for (const auto& f : battery) {
    const auto wf = wave_front(f, probes, env.box1d, env.grid, part, model, pol);
    const auto wfd =
        wave_front(derivative(f, MultiIndex{1}), probes, env.box1d, env.grid, part, model, pol);
    ++checks;
    if (!included(wfd, wf)) ++fails;
  }
  // regular factors: one unbounded-support, one compactly supported whose
  // taper lies beyond the probe range (probes on a factor's support edge
  // would test the factor, not the theorem)
  BuiltinParams widep;
  widep.r_inner = 1.6;
  widep.r_outer = 1.9;
  for (const auto& g : {builtin_net("gaussian"), builtin_net("gevrey_bump", widep)}) {
    for (const auto& f : {builtin_net("mollified_delta", bp), builtin_net("cauchy")}) {
      const auto wf = wave_front(f, probes, env.box1d, env.grid, part, model, pol);
      const auto wfg =
          wave_front(combine(g, f, CombineOp::Mul), probes, env.box1d, env.grid, part, model, pol);
      ++checks;
      if (!included(wfg, wf)) ++fails;
    }
  }
  r.passed = fails == 0;
  r.details = std::to_string(checks - fails) + "/" + std::to_string(checks) + " inclusions hold";
  return r;
}

inline CriterionResult criterion_product_theorem() {
  using namespace selftest_detail;
  CriterionResult r{10, "product wave-front theorem (1D and 2D)"};
  auto& env = Env::instance();
  const MicrolocalPolicy pol;
  BuiltinParams bp;
  bp.mollifier = env.moll2;
  bool ok = true;
  std::string det;
  {
    const auto model = scale_exponent(2.0);
    const auto part = cone_partition(1, 2);
    const Net c = builtin_net("cauchy");
    const auto res = product_wavefront_check(c, c, probes_1d(), env.box1d, env.grid, part, model, pol);
    ok = ok && res.status == CheckStatus::Passed;
    det += std::string("cauchy^2: ") + to_string(res.status) + "; ";
  }
  {
    const auto model = scale_exponent(2.0);
    const auto part = cone_partition(1, 2);
    const Net d = builtin_net("mollified_delta", bp);
    const auto res = product_wavefront_check(d, d, probes_1d(), env.box1d, env.grid, part, model, pol);
    ok = ok && res.status == CheckStatus::HypothesisFailed;
    det += std::string("delta^2: ") + to_string(res.status) + "; ";
  }
  const auto t0 = std::chrono::steady_clock::now();
  {
    const auto model = scale_exponent(2.0);
    const auto part = cone_partition(2, 16);
    const Net f = builtin_net("heaviside_x1", bp);
    const Net g = builtin_net("heaviside_x2", bp);
    const auto res = product_wavefront_check(f, g, probes_2d(), env.box2d, env.grid, part, model, pol);
    ok = ok && res.status == CheckStatus::Passed && !res.wf_f.entries.empty() &&
         !res.wf_g.entries.empty() && !res.wf_fg.entries.empty();
    det += std::string("2D steps: ") + to_string(res.status);
  }
  const double secs_2d =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ok = ok && secs_2d < 120.0;
  det += " (" + format_double(secs_2d) + " s)";
  r.passed = ok;
  r.details = det;
  return r;
}

inline CriterionResult criterion_strict_inclusion() {
  using namespace selftest_detail;
  CriterionResult r{11, "negligible at one order stays negligible at higher order"};
  auto& env = Env::instance();
  const double s15 = scale_exponent(1.5).s;
  const Net n = combine(selftest_detail::amplitude_net(1.5, s15), builtin_net("gaussian"),
                        CombineOp::Mul);
  FunctionClassOptions opt;
  opt.max_order = 1;
  bool ok = true;
  std::string det;
  for (double sigma : {1.5, 3.0}) {
    const auto c =
        classify_function_net(n, env.box1d, env.grid, scale_exponent(sigma), {}, opt);
    ok = ok && c.is_negligible_at(1.0);
    det += "sigma " + format_double(sigma) + ": " + verdict_str(c) + " k_hat " +
           format_double(c.k_hat) + "; ";
  }
  r.passed = ok;
  r.details = det;
  return r;
}

/// The shipped demonstration scenario, also used by the determinism check.
inline json delta_battery_scenario() {
  return json::parse(R"({
    "sigma": 2.0,
    "dim": 1,
    "box": {"lo": [-2.0], "hi": [2.0], "n": [4096]},
    "eps_grid": {"start": 0.1, "end": 1e-4, "count": 10},
    "seed": 20240811,
    "nets": [
      {"id": "delta", "builtin": "mollified_delta"},
      {"id": "step", "builtin": "mollified_heaviside"},
      {"id": "cauchy", "builtin": "cauchy"},
      {"id": "gauss", "builtin": "gaussian"},
      {"id": "mask", "builtin": "gevrey_bump", "params": {"r_inner": 1.0, "r_outer": 1.8}},
      {"id": "gauss_c", "combine": {"op": "mul", "a": "gauss", "b": "mask"}},
      {"id": "emb_delta", "embed": {"method": "J0", "atoms": [
          {"kind": "delta_deriv", "order": [0], "location": [0.0], "coeff": 1.0}]}}
    ],
    "analyses": [
      {"type": "classify", "net": "delta", "max_order": 2},
      {"type": "classify", "net": "gauss", "max_order": 2},
      {"type": "regularity", "net": "gauss_c"},
      {"type": "sigma_cone", "net": "delta"},
      {"type": "wave_front", "net": "delta"},
      {"type": "wave_front", "net": "cauchy"},
      {"type": "sing_support", "net": "delta"},
      {"type": "point_value", "net": "gauss", "point": {"kind": "classical", "x": [0.0]}},
      {"type": "equality", "f": "delta", "g": "emb_delta", "mode": "associated",
       "tests": [{"center": [0.0], "r_inner": 0.25, "r_outer": 0.5}]},
      {"type": "spectrum", "net": "delta", "center": [0.0]}
    ]
  })");
}

inline CriterionResult criterion_determinism() {
  CriterionResult r{12, "byte-identical reports across runs and thread counts"};
  const json doc = delta_battery_scenario();
  std::vector<std::string> dumps;
  json first_report;
  for (int threads : {1, 4, 8}) {
    const auto rr = run_scenario_doc(doc, threads);
    if (rr.exit_code != 0) {
      r.details = "scenario exit code " + std::to_string(rr.exit_code);
      return r;
    }
    if (dumps.empty()) first_report = rr.report;
    dumps.push_back(rr.report.dump(2) + "\n" + rr.fits_csv + "\n" + rr.spectra_csv);
  }
  const auto rr2 = run_scenario_doc(doc, 4);
  dumps.push_back(rr2.report.dump(2) + "\n" + rr2.fits_csv + "\n" + rr2.spectra_csv);
  bool ok = true;
  for (size_t i = 1; i < dumps.size(); ++i) ok = ok && dumps[i] == dumps[0];

  // the battery scenario must actually find the full delta wave front
  const json& rep = first_report;
  bool wf_ok = false;
  for (const auto& rec : rep.at("analyses")) {
    if (rec.value("status", "") != "ok") continue;
    const auto& a = rec.at("analysis");
    if (a.value("type", "") == "wave_front" && a.value("net", "") == "delta") {
      std::set<int> bins;
      bool at_zero = true;
      for (const auto& e : a.at("entries")) {
        bins.insert(e.at("bin").get<int>());
        at_zero = at_zero && std::abs(e.at("x")[0].get<double>()) < 1e-9;
      }
      wf_ok = at_zero && bins == std::set<int>{0, 1};
    }
  }
  r.passed = ok && wf_ok;
  r.details = ok ? (wf_ok ? "4 runs identical, delta wave front correct"
                          : "reports identical but delta wave front wrong")
                 : "report bytes differ across runs";
  return r;
}

inline std::vector<CriterionResult> run_all_criteria(std::uint64_t seed = 20240811) {
  std::vector<std::function<CriterionResult()>> fns = {
      [seed] { return criterion_scale_fit_recovery(seed); },
      [] { return criterion_mollifier_moments(); },
      [] { return criterion_embedding_error(); },
      [] { return criterion_j_vs_j0(); },
      [] { return criterion_algebra_laws(); },
      [] { return criterion_point_values(); },
      [] { return criterion_regularity_battery(); },
      [] { return criterion_wavefront_battery(); },
      [] { return criterion_monotonicity(); },
      [] { return criterion_product_theorem(); },
      [] { return criterion_strict_inclusion(); },
      [] { return criterion_determinism(); },
  };
  std::vector<CriterionResult> results;
  const auto t0 = std::chrono::steady_clock::now();
  for (auto& fn : fns) {
    const auto s0 = std::chrono::steady_clock::now();
    CriterionResult res = fn();
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
    results.push_back(std::move(res));
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  CriterionResult wall{13, "total wall clock under 300 s"};
  wall.passed = total < 300.0;
  wall.seconds = total;
  wall.details = format_double(total) + " s";
  results.push_back(wall);

  // per-criterion runtime limits
  for (auto& res : results) {
    if (res.id == 1 && res.seconds >= 5.0) {
      res.passed = false;
      res.details += " (over the 5 s budget)";
    }
    if (res.id == 8 && res.seconds >= 60.0) {
      res.passed = false;
      res.details += " (over the 60 s budget)";
    }
  }
  return results;
}

inline int print_selftest(const std::vector<CriterionResult>& results, std::ostream& os) {
  int failures = 0;
  for (const auto& r : results) {
    os << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " — " << r.details
       << " (" << format_double(r.seconds) << " s)\n";
    if (!r.passed) ++failures;
  }
  os << (failures == 0 ? "all criteria passed\n"
                       : std::to_string(failures) + " criteria failed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace ultraglab
