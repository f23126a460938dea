#include <gtest/gtest.h>

#include "ultraglab/spectral.hpp"

using namespace ultraglab;

namespace {

std::shared_ptr<const Mollifier> shared_moll() {
  static auto m = std::make_shared<Mollifier>(build_mollifier(2.0, Box::make1d(-8, 8, 4096)));
  return m;
}

const Box kBox = Box::make1d(-2.0, 2.0, 4096);

}  // namespace

TEST(ConePartition, OneDimensionalSignBins) {
  const auto part = cone_partition(1, 2);
  ASSERT_EQ(part.bin_count(), 2);
  EXPECT_EQ(part.bin_of({3.0, 0.0}), 0);
  EXPECT_EQ(part.bin_of({-0.5, 0.0}), 1);
  EXPECT_THROW(cone_partition(1, 4), BadBinCount);
}

TEST(ConePartition, EqualSectorsInTwoDimensions) {
  const auto part = cone_partition(2, 8);
  ASSERT_EQ(part.bin_count(), 8);
  for (int b = 0; b < 8; ++b)
    EXPECT_NEAR(part.bins[b].theta_hi - part.bins[b].theta_lo, kPi / 4.0, 1e-12);
  // the diagonal lands in the bin whose closed lower edge is 45 degrees
  EXPECT_EQ(part.bin_of({1.0, 1.0}), 1);
  EXPECT_EQ(part.bin_of({1.0, 0.0}), 0);
  EXPECT_EQ(part.bin_of({0.0, -1.0}), 6);
  EXPECT_THROW(cone_partition(2, 5), BadBinCount);
}

TEST(WindowedSpectrum, ZeroNetHasNoContent) {
  const Net zero = constant_net(1, 0.0);
  const auto part = cone_partition(1, 2);
  const auto spec = windowed_spectrum(zero, nullptr, kBox, EpsGrid::standard(), part);
  EXPECT_EQ(spec.max_magnitude, 0.0);
  for (const auto& prof : spec.per_bin)
    for (const auto& s : prof.samples) EXPECT_EQ(s.magnitude, 0.0);
}

TEST(WindowedSpectrum, NarrowGaussianMatchesTheClosedFormTransform) {
  BuiltinParams p;
  p.width = 0.25;
  const Net g = builtin_net("gaussian", p);
  const auto part = cone_partition(1, 2);
  EpsGrid one;
  one.values = {0.1, 0.05, 0.025, 0.0125};
  const auto spec = windowed_spectrum(g, nullptr, kBox, one, part);
  const ShellSet shells = ShellSet::standard(kBox);
  // F(exp(-x^2/(2 w^2)))(xi) = w sqrt(2 pi) exp(-w^2 xi^2 / 2); expected
  // per-shell max from the closed form over the same dual-grid points
  auto closed_form = [](double xi) {
    return 0.25 * std::sqrt(2.0 * kPi) * std::exp(-0.5 * 0.25 * 0.25 * xi * xi);
  };
  std::vector<double> expected(shells.bounds.size(), 0.0);
  for (int idx = 0; idx < kBox.n[0]; ++idx) {
    const double xi = std::abs(xi_of_index(idx, kBox.n[0], kBox.dx(0)));
    const int sh = shells.shell_of(xi);
    if (sh >= 0) expected[sh] = std::max(expected[sh], closed_form(xi));
  }
  for (const auto& s : spec.per_bin[0].samples) {
    if (expected[s.shell] < 1e-8) continue;
    EXPECT_NEAR(s.magnitude, expected[s.shell], 2e-6 * expected[s.shell]) << "shell " << s.shell;
  }
}

TEST(WindowedSpectrum, SpikeProfileIsFlatUpToTheScaleBreak) {
  const Net d = mollifier_net(shared_moll(), 1);
  const auto part = cone_partition(1, 2);
  EpsGrid one;
  one.values = {0.1, 0.05, 0.025, 0.0125};
  const auto spec = windowed_spectrum(d, nullptr, kBox, one, part);
  const double plateau_end = shared_moll()->freq_profile.r_inner / 0.1;  // for eps = 0.1
  double lo = kInfRate, hi = 0.0;
  for (const auto& s : spec.per_bin[0].samples) {
    if (s.eps != 0.1 || s.xi_rep * std::sqrt(2.0) > plateau_end) continue;
    lo = std::min(lo, s.magnitude);
    hi = std::max(hi, s.magnitude);
  }
  ASSERT_GT(hi, 0.0);
  // flat to the accuracy of the profile interpolation (a few percent at the
  // profile's own sampling rate)
  EXPECT_NEAR(hi / lo, 1.0, 0.05);
}

TEST(WindowedSpectrum, ParsevalIdentityPerEps) {
  const Net g = builtin_net("gaussian", [] {
    BuiltinParams p;
    p.width = 0.3;
    return p;
  }());
  for (double eps : {0.1, 0.01}) {
    const auto samples = sample_net(g, kBox, eps);
    const auto F = dft_forward(kBox, samples);
    double space = 0.0, freq = 0.0;
    for (const auto& v : samples) space += std::norm(v);
    space *= kBox.dx(0);
    const double dxi = 2.0 * kPi / (kBox.n[0] * kBox.dx(0));
    for (const auto& v : F) freq += std::norm(v);
    freq *= dxi / (2.0 * kPi);
    EXPECT_NEAR(freq / space, 1.0, 1e-10);
  }
}

TEST(WindowedSpectrum, LinearityOfTheTransform) {
  const Net a = builtin_net("gaussian");
  const Net b = builtin_net("cauchy");
  const double eps = 0.05;
  const auto Fa = dft_forward(kBox, sample_net(a, kBox, eps));
  const auto Fb = dft_forward(kBox, sample_net(b, kBox, eps));
  const auto Fab = dft_forward(kBox, sample_net(combine(a, b, CombineOp::Add), kBox, eps));
  double scale = 0.0;
  for (const auto& v : Fab) scale = std::max(scale, std::abs(v));
  for (int idx = 0; idx < kBox.n[0]; idx += 7)
    EXPECT_NEAR(std::abs(Fab[idx] - (Fa[idx] + Fb[idx])), 0.0, 1e-12 * scale);
}

TEST(WindowedSpectrum, ShiftingWindowAndContentPreservesMagnitudes) {
  const Net g = builtin_net("gaussian");
  const double h = kBox.dx(0);
  Net shifted = g;
  shifted.evaluator = [g, h](double eps, const Point& x) { return g.eval(eps, {x[0] - h, 0.0}); };
  Window w0;
  w0.dim = 1;
  w0.center = {0.25, 0.0};
  w0.profile.sigma = 2.0;
  w0.profile.r_inner = 0.03125;
  w0.profile.r_outer = 0.09375;
  Window w1 = w0;
  w1.center[0] += h;
  const auto part = cone_partition(1, 2);
  EpsGrid one;
  one.values = {0.1, 0.05, 0.025, 0.0125};
  const auto s0 = windowed_spectrum(g, &w0, kBox, one, part);
  const auto s1 = windowed_spectrum(shifted, &w1, kBox, one, part);
  for (int b = 0; b < 2; ++b) {
    ASSERT_EQ(s0.per_bin[b].samples.size(), s1.per_bin[b].samples.size());
    for (size_t i = 0; i < s0.per_bin[b].samples.size(); ++i) {
      const double m0 = s0.per_bin[b].samples[i].magnitude;
      const double m1 = s1.per_bin[b].samples[i].magnitude;
      EXPECT_NEAR(m0, m1, 1e-12 * std::max(1.0, s0.max_magnitude));
    }
  }
}

TEST(WindowedSpectrum, WindowMustStayInsideTheBox) {
  Window w;
  w.dim = 1;
  w.center = {1.95, 0.0};
  w.profile.r_inner = 0.05;
  w.profile.r_outer = 0.2;
  const auto part = cone_partition(1, 2);
  EXPECT_THROW(
      windowed_spectrum(builtin_net("gaussian"), &w, kBox, EpsGrid::standard(), part),
      GeometryError);
}

TEST(DirectionalProfile, ReductionAndErrors) {
  const Net d = mollifier_net(shared_moll(), 1);
  const auto part = cone_partition(1, 2);
  const auto spec = windowed_spectrum(d, nullptr, kBox, EpsGrid::standard(), part);
  const auto samples = directional_profile(spec, 0);
  EXPECT_FALSE(samples.empty());
  for (const auto& s : samples) EXPECT_GT(s.value, 0.0);
  EXPECT_THROW(directional_profile(spec, 7), EmptyBin);
}

TEST(DirectionalProfile, OneSidedTransformLeaksOnlyWindowTails) {
  // boundary value 1/(x + i eps): the negative-frequency side carries only
  // window leakage, orders of magnitude below the positive side
  const Net c = builtin_net("cauchy");
  Window w;
  w.dim = 1;
  w.center = {0.0, 0.0};
  w.profile.sigma = 2.0;
  w.profile.r_inner = 0.03125;
  w.profile.r_outer = 0.09375;
  const auto part = cone_partition(1, 2);
  EpsGrid one;
  one.values = {0.1, 0.05, 0.025, 0.0125};
  const auto spec = windowed_spectrum(c, &w, kBox, one, part);
  // beyond the window's first lobes the negative side holds only Gevrey
  // leakage, decaying with |xi| while the positive side carries the content
  double pos = 0.0, neg_mid = 0.0, neg_deep = 0.0;
  for (const auto& s : spec.per_bin[0].samples)
    if (s.eps == 0.0125) pos = std::max(pos, s.magnitude);
  for (const auto& s : spec.per_bin[1].samples) {
    if (s.eps != 0.0125) continue;
    if (s.xi_rep >= 100.0 && s.xi_rep < 1000.0) neg_mid = std::max(neg_mid, s.magnitude);
    if (s.xi_rep >= 1000.0) neg_deep = std::max(neg_deep, s.magnitude);
  }
  ASSERT_GT(pos, 0.0);
  ASSERT_GT(neg_mid, 0.0);
  EXPECT_LT(neg_mid, 0.05 * pos);
  EXPECT_LT(neg_deep, 0.003 * pos);
}
