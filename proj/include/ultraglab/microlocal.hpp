#pragma once

/// Regularity testing, singular cones, singular support, wave-front
/// estimation, cone arithmetic, and the product / differential-operator
/// inclusion checkers.

#include <set>

#include "ultraglab/spectral.hpp"

namespace ultraglab {

struct MicrolocalPolicy {
  double k2_min = 0.2;     ///< minimal frequency-decay rate for a passing bin
  double r_max = 0.5;      ///< residual ceiling (log units)
  double k1_null = 0.5;    ///< content decaying in eps at this rate is null
  double lambda_window = 0.75;  ///< fraction of the window's own rate a passing bin must reach
  double resolution_cells = 8.0;  ///< rows with eps below this many cells are unresolved
  int min_bin_samples = 6;
  int bin_count_2d = 16;
  int bin_dilation = 1;    ///< set-inclusion tolerance, in bins
  int cell_dilation = 2;   ///< set-inclusion tolerance, in grid cells
  std::optional<double> window_outer;  ///< base window outer radius (physical)

  double resolve_window_outer(const Box& box) const {
    if (window_outer) return *window_outer;
    // calibrated so that smooth content clears k2_min with about 2x margin
    // at sigma = 2 on the reference grids
    return box.dim == 1 ? 96.0 * box.dx(0) : 16.0 * std::min(box.dx(0), box.dx(1));
  }

  double resolution_floor(const Box& box) const {
    double min_dx = box.dx(0);
    if (box.dim == 2) min_dx = std::min(min_dx, box.dx(1));
    return resolution_cells * min_dx;
  }
};

/// Fitted decay rate of the window's own spectrum: the best rate any content
/// seen through this window can exhibit. Passing bins are held to a fixed
/// fraction of it.
inline double window_benchmark_rate(const Window& w, const Box& box, const ScaleModel& model) {
  std::vector<cplx> samples(box.total_samples());
  for (long idx = 0; idx < box.total_samples(); ++idx)
    samples[idx] = w.value(box.point_at(idx));
  const auto F = dft_forward(box, samples);
  const ShellSet shells = ShellSet::standard(box);
  std::vector<double> red(shells.bounds.size(), 0.0);
  if (box.dim == 1) {
    for (int idx = 0; idx < box.n[0]; ++idx) {
      const int sh = shells.shell_of(std::abs(xi_of_index(idx, box.n[0], box.dx(0))));
      if (sh >= 0) red[sh] = std::max(red[sh], std::abs(F[idx]));
    }
  } else {
    for (int i = 0; i < box.n[0]; ++i) {
      const double xi0 = xi_of_index(i, box.n[0], box.dx(0));
      for (int j = 0; j < box.n[1]; ++j) {
        const double xi1 = xi_of_index(j, box.n[1], box.dx(1));
        const int sh = shells.shell_of(std::hypot(xi0, xi1));
        if (sh >= 0) red[sh] = std::max(red[sh], std::abs(F[long(i) * box.n[1] + j]));
      }
    }
  }
  double maxmag = 0.0;
  for (double v : red) maxmag = std::max(maxmag, v);
  std::vector<double> feat, logv;
  for (size_t i = 0; i < red.size(); ++i) {
    if (red[i] < kSpectralRelFloor * maxmag || red[i] <= 0.0) continue;
    feat.push_back(model.xi_feature(shells.rep(int(i))));
    logv.push_back(std::log(red[i]));
  }
  if (feat.size() < 3) return 0.0;
  return std::max(0.0, -detail::least_squares(feat, logv).b);
}

struct BinVerdict {
  int bin = 0;
  bool fails = false;
  bool vacuous = false;  ///< no significant content reached the fit
  TwoScaleFit fit;       ///< pooled fit, kept as the reported diagnostic
  std::string reason;
};

namespace detail {

struct RowFit {
  double k2 = 0.0;        ///< frequency-decay rate of this eps-row
  double resid_gevrey = 0.0;
  double resid_power = 0.0;
  double power = 0.0;     ///< exponent of the competing |xi|^-p fit
};

/// Fits the monotone tail envelope of one eps-row (samples in ascending
/// |xi| order). The criterion is an upper bound, so ripples and nulls of an
/// oscillatory spectrum must not count against the fit.
inline RowFit fit_row(const std::vector<std::pair<double, double>>& shell_mags,
                      const ScaleModel& model) {
  std::vector<double> env(shell_mags.size());
  double running = 0.0;
  for (int i = int(shell_mags.size()) - 1; i >= 0; --i) {
    running = std::max(running, shell_mags[i].second);
    env[i] = running;
  }
  std::vector<double> fg, fp, y;
  for (size_t i = 0; i < shell_mags.size(); ++i) {
    fg.push_back(model.xi_feature(shell_mags[i].first));
    fp.push_back(std::log(shell_mags[i].first));
    y.push_back(std::log(env[i]));
  }
  const auto a = least_squares(fg, y);
  const auto b = least_squares(fp, y);
  RowFit r;
  r.k2 = -a.b;
  r.resid_gevrey = a.residual_rms;
  r.resid_power = b.residual_rms;
  r.power = -b.b;
  return r;
}

}  // namespace detail

/// Core verdict policy. A bin passes when its windowed content is absent or
/// decays in eps (null content). Otherwise the smallest grid-resolved
/// eps-rows must each show frequency decay at a rate >= max(k2_min,
/// lambda * window rate) in the |xi|^(1/sigma) feature, with a trustworthy
/// residual, and must not be better explained by a power law |xi|^-p (the
/// signature of a genuine singularity). Rows with eps below the resolution
/// floor sample an unresolved spike and are excluded from the verdict.
inline BinVerdict judge_bin(const WindowedSpectrumResult& spec, int bin, const ScaleModel& model,
                            const MicrolocalPolicy& pol, const Box& box,
                            double window_rate = 0.0) {
  BinVerdict v;
  v.bin = bin;
  const auto& all = spec.per_bin.at(bin).samples;
  // resolution floor, capped so the four largest-eps rows always survive
  // (on coarse grids they are the least aliased data available)
  double eps_floor = pol.resolution_floor(box);
  {
    std::set<double, std::greater<double>> eps_seen;
    for (const auto& s : all) eps_seen.insert(s.eps);
    if (eps_seen.size() >= 4) {
      auto it = eps_seen.begin();
      std::advance(it, 3);
      eps_floor = std::min(eps_floor, *it);
    } else if (!eps_seen.empty()) {
      eps_floor = std::min(eps_floor, *eps_seen.rbegin());
    }
  }

  // eps-trend of per-row maxima decides the null-content escape; rows below
  // the resolution floor sample between grid points and are excluded here too
  std::map<double, double, std::greater<double>> row_max;
  std::map<double, std::vector<std::pair<double, double>>, std::greater<double>> rows;
  for (const auto& s : all) {
    if (s.eps < eps_floor) continue;
    row_max[s.eps] = std::max(row_max[s.eps], s.magnitude);
    if (!s.saturated && s.magnitude > 0.0) rows[s.eps].push_back({s.xi_rep, s.magnitude});
  }
  if (row_max.empty()) {
    v.vacuous = true;
    v.reason = "no-content";
    return v;
  }
  {
    std::vector<ScalarSample> trend;
    for (const auto& [eps, m] : row_max) trend.push_back({eps, m});
    FitPolicy fp;
    fp.floor = std::max(kNumericFloor, kSpectralRelFloor * spec.max_magnitude);
    bool all_zero = true;
    for (const auto& t : trend)
      if (t.value != 0.0) all_zero = false;
    if (all_zero) {
      v.vacuous = true;
      v.reason = "no-content";
      return v;
    }
    const auto fit = detail::fit_or_saturated(trend, model, fp);
    if (fit && fit->sign < 0 && fit->k >= pol.k1_null) {
      v.reason = "null-content";
      return v;
    }
  }

  // pooled fit over resolved rows, kept as the diagnostic record
  std::vector<TwoScaleSample> pooled;
  for (const auto& [eps, row] : rows)
    for (const auto& [xi, m] : row) pooled.push_back({eps, xi, m});
  if (int(pooled.size()) < pol.min_bin_samples) {
    v.vacuous = true;
    v.reason = "sparse-content";
    return v;
  }
  try {
    v.fit = fit_two_scale_signed(pooled, model);
  } catch (const std::exception&) {
    v.vacuous = true;
    v.reason = "sparse-content";
    return v;
  }

  // verdict from the smallest resolved rows with enough shells
  const double k2_bar = std::max(pol.k2_min, pol.lambda_window * window_rate);
  std::vector<detail::RowFit> eval;
  for (auto it = rows.rbegin(); it != rows.rend() && eval.size() < 3; ++it) {
    if (int(it->second.size()) < 4) continue;
    eval.push_back(detail::fit_row(it->second, model));
  }
  if (eval.empty()) {
    v.vacuous = true;
    v.reason = "sparse-content";
    return v;
  }
  int failing = 0;
  std::string why = "gevrey-decay";
  for (const auto& r : eval) {
    const bool power_takeover = r.resid_power + 0.05 < r.resid_gevrey && r.resid_power <= pol.r_max;
    if (r.k2 < k2_bar) {
      ++failing;
      why = "k2-below-min";
    } else if (r.resid_gevrey > pol.r_max) {
      ++failing;
      why = "residual";
    } else if (power_takeover) {
      ++failing;
      why = "power-law";
    }
  }
  if (2 * failing > int(eval.size())) {
    v.fails = true;
    v.reason = why;
  } else {
    v.reason = "gevrey-decay";
  }
  return v;
}

struct RegularityVerdict {
  bool regular = false;
  TwoScaleFit fit;  ///< fit of the worst (smallest k2) non-vacuous bin
  std::vector<int> failing_bins;
  std::vector<BinVerdict> per_bin;
};

/// Global (unwindowed) two-scale test of a compactly supported net.
inline RegularityVerdict regularity_test(const Net& f, const Box& box, const EpsGrid& grid,
                                         const ConePartition& part, const ScaleModel& model,
                                         const MicrolocalPolicy& pol = {}) {
  if (!f.support) throw SupportError("regularity_test: net must declare compact support");
  const auto spec = windowed_spectrum(f, nullptr, box, grid, part);
  RegularityVerdict out;
  out.regular = true;
  bool have_fit = false;
  for (int b = 0; b < part.bin_count(); ++b) {
    auto v = judge_bin(spec, b, model, pol, box);
    if (v.fails) {
      out.regular = false;
      out.failing_bins.push_back(b);
    }
    if (!v.vacuous && (!have_fit || v.fit.k2 < out.fit.k2)) {
      out.fit = v.fit;
      have_fit = true;
    }
    out.per_bin.push_back(std::move(v));
  }
  return out;
}

struct ConeSet {
  int dim = 1;
  int bin_count = 2;
  std::set<int> members;

  bool empty() const { return members.empty(); }
};

/// Directions along which a compactly supported net fails the two-scale
/// decay; empty exactly when the net is regular.
inline ConeSet sigma_cone(const Net& f, const Box& box, const EpsGrid& grid,
                          const ConePartition& part, const ScaleModel& model,
                          const MicrolocalPolicy& pol = {}) {
  const auto verdict = regularity_test(f, box, grid, part, model, pol);
  ConeSet cs;
  cs.dim = part.dim;
  cs.bin_count = part.bin_count();
  cs.members.insert(verdict.failing_bins.begin(), verdict.failing_bins.end());
  return cs;
}

struct LocalConeResult {
  ConeSet cone;
  std::map<int, TwoScaleFit> base_window_fits;  ///< bin -> fit at the widest window
};

/// Shared state for a probe sweep: per-eps net samples and per-radius window
/// benchmark rates (both independent of the probe point).
struct MicrolocalContext {
  std::optional<NetSampleCache> samples;
  std::map<double, double> window_rates;

  static MicrolocalContext for_net(const Net& f, const Box& box, const EpsGrid& grid) {
    MicrolocalContext ctx;
    ctx.samples = NetSampleCache::build(f, box, grid);
    return ctx;
  }

  double benchmark(double r_out, const Box& box, const ScaleModel& model) {
    auto it = window_rates.find(r_out);
    if (it != window_rates.end()) return it->second;
    Window w;
    w.dim = box.dim;
    for (int ax = 0; ax < box.dim; ++ax) w.center[ax] = 0.5 * (box.lo[ax] + box.hi[ax]);
    w.profile.sigma = model.sigma;
    w.profile.r_inner = r_out / 3.0;
    w.profile.r_outer = r_out;
    const double rate = window_benchmark_rate(w, box, model);
    window_rates[r_out] = rate;
    return rate;
  }
};

/// Cone of singular directions at x0, realizing the intersection over
/// cutoffs by a nested three-window family (radii r, r/3, r/9). The widest
/// window has the best frequency resolution and decides the shape verdict;
/// the narrower windows contribute localization only: a bin leaves the cone
/// when some narrower window shows the content is absent or eps-null there
/// (the singularity lives elsewhere), never on the strength of their
/// resolution-limited decay fits.
inline LocalConeResult local_cone(const Net& f, const Point& x0, const Box& box,
                                  const EpsGrid& grid, const ConePartition& part,
                                  const ScaleModel& model, const MicrolocalPolicy& pol = {},
                                  MicrolocalContext* ctx = nullptr) {
  const double r_base = pol.resolve_window_outer(box);
  for (int ax = 0; ax < box.dim; ++ax)
    if (x0[ax] - r_base < box.lo[ax] || x0[ax] + r_base > box.hi[ax])
      throw GeometryError("local_cone: base window leaves the box");

  LocalConeResult out;
  out.cone.dim = part.dim;
  out.cone.bin_count = part.bin_count();
  std::vector<bool> candidate(part.bin_count(), false);
  for (int j = 0; j < 3; ++j) {
    const double r_out = r_base / std::pow(3.0, j);
    Window w;
    w.dim = box.dim;
    w.center = x0;
    w.profile.sigma = model.sigma;
    w.profile.r_inner = r_out / 3.0;
    w.profile.r_outer = r_out;
    const double wrate = ctx ? ctx->benchmark(r_out, box, model)
                             : window_benchmark_rate(w, box, model);
    const auto spec = windowed_spectrum(f, &w, box, grid, part,
                                        ctx && ctx->samples ? &*ctx->samples : nullptr);
    for (int b = 0; b < part.bin_count(); ++b) {
      const auto v = judge_bin(spec, b, model, pol, box, wrate);
      if (j == 0) {
        out.base_window_fits[b] = v.fit;
        candidate[b] = v.fails;
      } else {
        const bool content_pass = v.vacuous || v.reason == "null-content";
        if (content_pass) candidate[b] = false;
      }
    }
  }
  for (int b = 0; b < part.bin_count(); ++b)
    if (candidate[b]) out.cone.members.insert(b);
  return out;
}

/// Probe points whose local cone is nonempty.
inline std::vector<int> sing_support(const Net& f, const std::vector<Point>& probes,
                                     const Box& box, const EpsGrid& grid,
                                     const ConePartition& part, const ScaleModel& model,
                                     const MicrolocalPolicy& pol = {}) {
  auto ctx = MicrolocalContext::for_net(f, box, grid);
  std::vector<int> out;
  for (size_t i = 0; i < probes.size(); ++i) {
    if (!local_cone(f, probes[i], box, grid, part, model, pol, &ctx).cone.empty())
      out.push_back(int(i));
  }
  return out;
}

struct WaveFrontEstimate {
  std::vector<Point> probes;
  ConePartition partition;
  std::set<std::pair<int, int>> entries;                 ///< (probe index, bin)
  std::map<std::pair<int, int>, TwoScaleFit> diagnostics;

  std::set<int> points() const {
    std::set<int> s;
    for (const auto& [p, b] : entries) s.insert(p);
    return s;
  }

  std::set<int> bins_at(int probe) const {
    std::set<int> s;
    for (const auto& [p, b] : entries)
      if (p == probe) s.insert(b);
    return s;
  }
};

inline WaveFrontEstimate wave_front(const Net& f, const std::vector<Point>& probes,
                                    const Box& box, const EpsGrid& grid,
                                    const ConePartition& part, const ScaleModel& model,
                                    const MicrolocalPolicy& pol = {}) {
  WaveFrontEstimate wf;
  wf.probes = probes;
  wf.partition = part;
  auto ctx = MicrolocalContext::for_net(f, box, grid);
  for (size_t i = 0; i < probes.size(); ++i) {
    const auto lc = local_cone(f, probes[i], box, grid, part, model, pol, &ctx);
    for (int b : lc.cone.members) {
      wf.entries.insert({int(i), b});
      wf.diagnostics[{int(i), b}] = lc.base_window_fits.at(b);
    }
  }
  return wf;
}

// ---------------------------------------------------------------------------
// Cone arithmetic

namespace detail {

inline std::set<int> dilate_bins(const std::set<int>& bins, const ConePartition& part, int by) {
  if (part.dim == 1 || by == 0) return bins;  // 1D sign bins are not adjacent
  std::set<int> out;
  const int n = part.bin_count();
  for (int b : bins)
    for (int d = -by; d <= by; ++d) out.insert(((b + d) % n + n) % n);
  return out;
}

/// Minkowski sum of two direction-bin sets; flags a cancelling (opposite)
/// pair. Directions are enumerated on dilated bin boundaries with several
/// radius ratios, which covers the sum cone up to the bin resolution.
inline std::pair<std::set<int>, bool> bin_minkowski_sum(const std::set<int>& A,
                                                        const std::set<int>& B,
                                                        const ConePartition& part,
                                                        int dilation) {
  std::set<int> sum;
  bool zero = false;
  if (part.dim == 1) {
    for (int a : A) {
      for (int b : B) {
        const double sa = part.bins[a].sign, sb = part.bins[b].sign;
        if (sa * sb < 0) {
          zero = true;
          sum.insert(0);
          sum.insert(1);
        } else {
          sum.insert(sa > 0 ? 0 : 1);
        }
      }
    }
    return {sum, zero};
  }
  const int n = part.bin_count();
  const double dth = 2.0 * kPi / n;
  // half a bin of slack per set: opposite-direction detection tolerates one
  // bin in total, matching the advertised dilation
  const double pad = 0.5 * dilation * dth;
  const std::array<double, 5> ratios = {0.125, 0.5, 1.0, 2.0, 8.0};
  auto arc_angles = [&](int bin) {
    std::vector<double> th;
    const double lo = part.bins[bin].theta_lo - pad;
    const double hi = part.bins[bin].theta_hi + pad;
    for (int i = 0; i <= 8; ++i) th.push_back(lo + (hi - lo) * i / 8.0);
    return th;
  };
  for (int a : A) {
    for (int b : B) {
      for (double tha : arc_angles(a)) {
        for (double thb : arc_angles(b)) {
          // opposite directions within resolution cancel
          double gap = std::remainder(tha - thb - kPi, 2.0 * kPi);
          if (std::abs(gap) < 1e-9) {
            zero = true;
            continue;
          }
          for (double r : ratios) {
            const double ux = std::cos(tha) + r * std::cos(thb);
            const double uy = std::sin(tha) + r * std::sin(thb);
            if (std::hypot(ux, uy) < 1e-12) {
              zero = true;
              continue;
            }
            sum.insert(part.bin_of({ux, uy}));
          }
        }
      }
    }
  }
  return {dilate_bins(sum, part, dilation), zero};
}

}  // namespace detail

struct ConeSumResult {
  std::map<int, std::set<int>> bins_by_point;  ///< probe index -> closed union bins
  std::map<int, bool> zero_flag_by_point;
  bool any_zero_flag = false;
};

/// Pointwise sum-of-wave-fronts set: at shared points the Minkowski sum of
/// the direction sets (computed on dilated bin representatives), closed by
/// taking the union with both inputs. zero_flag marks a point where
/// opposite directions combine.
inline ConeSumResult cone_sum(const WaveFrontEstimate& A, const WaveFrontEstimate& B,
                              const MicrolocalPolicy& pol = {}) {
  if (A.probes.size() != B.probes.size() ||
      A.partition.bin_count() != B.partition.bin_count() || A.partition.dim != B.partition.dim)
    throw PartitionMismatch("cone_sum: probe grids / partitions differ");
  for (size_t i = 0; i < A.probes.size(); ++i)
    for (int ax = 0; ax < A.partition.dim; ++ax)
      if (A.probes[i][ax] != B.probes[i][ax])
        throw PartitionMismatch("cone_sum: probe points differ");

  ConeSumResult out;
  for (size_t i = 0; i < A.probes.size(); ++i) {
    const auto binsA = A.bins_at(int(i));
    const auto binsB = B.bins_at(int(i));
    std::set<int> rhs = binsA;
    rhs.insert(binsB.begin(), binsB.end());
    bool zero = false;
    if (!binsA.empty() && !binsB.empty()) {
      auto [sum, z] = detail::bin_minkowski_sum(binsA, binsB, A.partition, pol.bin_dilation);
      rhs.insert(sum.begin(), sum.end());
      zero = z;
    }
    if (!rhs.empty()) out.bins_by_point[int(i)] = rhs;
    out.zero_flag_by_point[int(i)] = zero;
    out.any_zero_flag = out.any_zero_flag || zero;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theorem checkers

enum class CheckStatus { Passed, HypothesisFailed, InclusionFailed };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Passed: return "Passed";
    case CheckStatus::HypothesisFailed: return "HypothesisFailed";
    case CheckStatus::InclusionFailed: return "InclusionFailed";
  }
  return "?";
}

struct InclusionViolation {
  int probe = 0;
  int bin = 0;
};

struct ProductCheckResult {
  CheckStatus status = CheckStatus::Passed;
  WaveFrontEstimate wf_f, wf_g, wf_fg;
  ConeSumResult rhs;
  std::vector<InclusionViolation> violations;
};

namespace detail {

/// Entry-wise inclusion with bin and spatial dilation on the probe grid.
inline std::vector<InclusionViolation> check_inclusion(
    const WaveFrontEstimate& lhs, const std::map<int, std::set<int>>& rhs_bins,
    const ConePartition& part, const MicrolocalPolicy& pol, const Box& box) {
  std::vector<InclusionViolation> out;
  double min_dx = box.dx(0);
  if (box.dim == 2) min_dx = std::min(min_dx, box.dx(1));
  const double spatial_tol = pol.cell_dilation * min_dx + 1e-12;
  for (const auto& [p, b] : lhs.entries) {
    bool ok = false;
    for (const auto& [q, bins] : rhs_bins) {
      double dist = 0.0;
      for (int ax = 0; ax < box.dim; ++ax)
        dist = std::max(dist, std::abs(lhs.probes[p][ax] - lhs.probes[q][ax]));
      if (dist > spatial_tol) continue;
      if (dilate_bins(bins, part, pol.bin_dilation).count(b)) {
        ok = true;
        break;
      }
    }
    if (!ok) out.push_back({p, b});
  }
  return out;
}

}  // namespace detail

/// Wave front of the product: checks the hypothesis (no cancelling pair of
/// directions at any point) and the inclusion
///   WF(fg) within (WF(f) + WF(g)) union WF(f) union WF(g),
/// up to the policy's bin / cell dilation. A failed hypothesis is a
/// first-class result: the inclusion is then not asserted.
inline ProductCheckResult product_wavefront_check(const Net& f, const Net& g,
                                                  const std::vector<Point>& probes,
                                                  const Box& box, const EpsGrid& grid,
                                                  const ConePartition& part,
                                                  const ScaleModel& model,
                                                  const MicrolocalPolicy& pol = {}) {
  ProductCheckResult out;
  out.wf_f = wave_front(f, probes, box, grid, part, model, pol);
  out.wf_g = wave_front(g, probes, box, grid, part, model, pol);
  out.rhs = cone_sum(out.wf_f, out.wf_g, pol);
  if (out.rhs.any_zero_flag) {
    out.status = CheckStatus::HypothesisFailed;
    return out;
  }
  const Net fg = combine(f, g, CombineOp::Mul);
  out.wf_fg = wave_front(fg, probes, box, grid, part, model, pol);
  out.violations = detail::check_inclusion(out.wf_fg, out.rhs.bins_by_point, part, pol, box);
  out.status = out.violations.empty() ? CheckStatus::Passed : CheckStatus::InclusionFailed;
  return out;
}

struct PdoCheckResult {
  CheckStatus status = CheckStatus::Passed;
  WaveFrontEstimate wf_f, wf_pf;
  std::vector<InclusionViolation> violations;
};

/// Builds a compactly supported stand-in for regularity checks by masking
/// with a wide Gevrey bump when the net has no declared support.
inline Net masked_for_support(const Net& f, const Box& box, double sigma) {
  if (f.support && box.contains(*f.support)) return f;
  double half = kInfRate;
  for (int ax = 0; ax < box.dim; ++ax)
    half = std::min(half, 0.5 * (box.hi[ax] - box.lo[ax]));
  Net mask = detail::bump_net(sigma, 0.5 * half, 0.9 * half, 0.0);
  if (box.dim == 2) mask = tensor_product(mask, mask);
  return combine(f, mask, CombineOp::Mul);
}

/// WF(P(x,D) f) within WF(f) for operators with regular coefficients.
inline PdoCheckResult pdo_wavefront_check(const Net& f,
                                          const std::vector<std::pair<MultiIndex, Net>>& coeffs,
                                          const std::vector<Point>& probes, const Box& box,
                                          const EpsGrid& grid, const ConePartition& part,
                                          const ScaleModel& model,
                                          const MicrolocalPolicy& pol = {}) {
  for (const auto& [al, a] : coeffs) {
    const Net masked = masked_for_support(a, box, model.sigma);
    const auto verdict = regularity_test(masked, box, grid, part, model, pol);
    if (!verdict.regular)
      throw CoefficientNotRegular("pdo_wavefront_check: coefficient '" + a.id +
                                  "' fails the regularity test");
  }
  std::optional<Net> pf;
  for (const auto& [al, a] : coeffs) {
    const Net term =
        al.order() == 0 ? combine(a, f, CombineOp::Mul) : combine(a, derivative(f, al), CombineOp::Mul);
    pf = pf ? combine(*pf, term, CombineOp::Add) : term;
  }
  if (!pf) throw DomainError("pdo_wavefront_check: empty operator");

  PdoCheckResult out;
  out.wf_f = wave_front(f, probes, box, grid, part, model, pol);
  out.wf_pf = wave_front(*pf, probes, box, grid, part, model, pol);
  std::map<int, std::set<int>> rhs;
  for (const auto& [p, b] : out.wf_f.entries) rhs[p].insert(b);
  out.violations = detail::check_inclusion(out.wf_pf, rhs, part, pol, box);
  out.status = out.violations.empty() ? CheckStatus::Passed : CheckStatus::InclusionFailed;
  return out;
}

}  // namespace ultraglab
