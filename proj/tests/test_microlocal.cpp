#include <gtest/gtest.h>

#include "ultraglab/microlocal.hpp"

using namespace ultraglab;

namespace {

std::shared_ptr<const Mollifier> shared_moll() {
  static auto m = std::make_shared<Mollifier>(build_mollifier(2.0, Box::make1d(-8, 8, 4096)));
  return m;
}

BuiltinParams with_moll() {
  BuiltinParams p;
  p.mollifier = shared_moll();
  return p;
}

const Box kBox = Box::make1d(-2.0, 2.0, 4096);
const ScaleModel kModel{2.0, 1.0 / 3.0};

std::vector<Point> probes_1d() {
  std::vector<Point> p;
  for (double x : {-1.5, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 1.5}) p.push_back({x, 0.0});
  return p;
}

Net masked_gaussian() {
  BuiltinParams maskp;
  maskp.r_inner = 1.0;
  maskp.r_outer = 1.8;
  return combine(builtin_net("gaussian"), builtin_net("gevrey_bump", maskp), CombineOp::Mul);
}

Net masked_cauchy() {
  BuiltinParams maskp;
  maskp.r_inner = 1.0;
  maskp.r_outer = 1.8;
  return combine(builtin_net("cauchy"), builtin_net("gevrey_bump", maskp), CombineOp::Mul);
}

}  // namespace

TEST(Regularity, BatteryVerdictsAndRates) {
  const auto part = cone_partition(1, 2);
  const MicrolocalPolicy pol;
  const Net delta = builtin_net("mollified_delta", with_moll());
  const auto vg = regularity_test(masked_gaussian(), kBox, EpsGrid::standard(), part, kModel, pol);
  EXPECT_TRUE(vg.regular);
  EXPECT_GE(vg.fit.k2, 0.5);
  const auto vd = regularity_test(delta, kBox, EpsGrid::standard(), part, kModel, pol);
  EXPECT_FALSE(vd.regular);
  EXPECT_LE(vd.fit.k2, 0.1);
  const Net delta2 = combine(delta, delta, CombineOp::Mul);
  EXPECT_FALSE(regularity_test(delta2, kBox, EpsGrid::standard(), part, kModel, pol).regular);
}

TEST(Regularity, RequiresDeclaredSupport) {
  const auto part = cone_partition(1, 2);
  EXPECT_THROW(
      regularity_test(builtin_net("gaussian"), kBox, EpsGrid::standard(), part, kModel),
      SupportError);
}

TEST(SigmaCone, DirectionalSingularities) {
  const auto part = cone_partition(1, 2);
  const auto grid = EpsGrid::standard();
  const auto cs_delta =
      sigma_cone(builtin_net("mollified_delta", with_moll()), kBox, grid, part, kModel);
  EXPECT_EQ(cs_delta.members, (std::set<int>{0, 1}));
  const auto cs_cauchy = sigma_cone(masked_cauchy(), kBox, grid, part, kModel);
  EXPECT_EQ(cs_cauchy.members, (std::set<int>{0}));
  const auto cs_gauss = sigma_cone(masked_gaussian(), kBox, grid, part, kModel);
  EXPECT_TRUE(cs_gauss.empty());
}

TEST(LocalCone, LocalizationOfTheSpike) {
  const auto part = cone_partition(1, 2);
  const auto grid = EpsGrid::standard();
  const Net delta = builtin_net("mollified_delta", with_moll());
  EXPECT_EQ(local_cone(delta, {0.0, 0.0}, kBox, grid, part, kModel).cone.members,
            (std::set<int>{0, 1}));
  EXPECT_TRUE(local_cone(delta, {0.5, 0.0}, kBox, grid, part, kModel).cone.empty());
  EXPECT_EQ(local_cone(builtin_net("cauchy"), {0.0, 0.0}, kBox, grid, part, kModel).cone.members,
            (std::set<int>{0}));
  EXPECT_THROW(local_cone(delta, {1.99, 0.0}, kBox, grid, part, kModel), GeometryError);
}

TEST(SingSupport, PointsWithNonemptyCones) {
  const auto part = cone_partition(1, 2);
  const auto grid = EpsGrid::standard();
  const auto probes = probes_1d();
  const Net delta = builtin_net("mollified_delta", with_moll());
  const auto s1 = sing_support(delta, probes, kBox, grid, part, kModel);
  ASSERT_EQ(s1.size(), 1u);
  EXPECT_EQ(probes[s1[0]][0], 0.0);
  EXPECT_TRUE(sing_support(builtin_net("gaussian"), probes, kBox, grid, part, kModel).empty());
  const Net mix = combine(delta, builtin_net("gaussian"), CombineOp::Add);
  const auto s3 = sing_support(mix, probes, kBox, grid, part, kModel);
  ASSERT_EQ(s3.size(), 1u);
  EXPECT_EQ(probes[s3[0]][0], 0.0);
}

TEST(WaveFront, ProjectionOntoPointsMatchesTheSingularSupport) {
  const auto part = cone_partition(1, 2);
  const auto grid = EpsGrid::standard();
  const auto probes = probes_1d();
  for (const Net& f : {builtin_net("mollified_delta", with_moll()), builtin_net("cauchy"),
                       builtin_net("mollified_heaviside", with_moll())}) {
    const auto wf = wave_front(f, probes, kBox, grid, part, kModel);
    const auto ss = sing_support(f, probes, kBox, grid, part, kModel);
    EXPECT_EQ(wf.points(), std::set<int>(ss.begin(), ss.end())) << f.id;
  }
}

TEST(WaveFront, CompactSupportProjectionOntoDirections) {
  // for a compactly supported net the union of wave-front bins matches the
  // global singular cone up to one bin
  const auto part = cone_partition(1, 2);
  const auto grid = EpsGrid::standard();
  const Net delta = builtin_net("mollified_delta", with_moll());
  const auto wf = wave_front(delta, probes_1d(), kBox, grid, part, kModel);
  std::set<int> wf_bins;
  for (const auto& [p, b] : wf.entries) wf_bins.insert(b);
  const auto cone = sigma_cone(delta, kBox, grid, part, kModel);
  EXPECT_EQ(wf_bins, cone.members);
}

TEST(ConeSum, OneDimensionalArithmetic) {
  const auto part = cone_partition(1, 2);
  WaveFrontEstimate A, B;
  A.partition = B.partition = part;
  A.probes = B.probes = {{0.0, 0.0}};
  A.entries = {{0, 0}};
  B.entries = {{0, 0}};
  const auto same = cone_sum(A, B);
  EXPECT_FALSE(same.any_zero_flag);
  EXPECT_EQ(same.bins_by_point.at(0), (std::set<int>{0}));

  B.entries = {{0, 0}, {0, 1}};
  const auto opposite = cone_sum(A, B);
  EXPECT_TRUE(opposite.any_zero_flag);
}

TEST(ConeSum, MatchesBruteForceEnumerationInTwoDimensions) {
  const auto part = cone_partition(2, 16);
  const double dth = 2.0 * kPi / 16;
  auto brute = [&](const std::set<int>& A, const std::set<int>& B) {
    // fine enumeration over pairs of directions on the (half-bin padded)
    // member arcs, all radius ratios
    std::set<int> bins;
    bool zero = false;
    for (int a : A) {
      for (int b : B) {
        for (int i = 0; i <= 40; ++i) {
          const double tha = part.bins[a].theta_lo - 0.5 * dth + (dth * 2.0) * i / 40.0;
          for (int j = 0; j <= 40; ++j) {
            const double thb = part.bins[b].theta_lo - 0.5 * dth + (dth * 2.0) * j / 40.0;
            for (double r : {0.1, 0.3, 1.0, 3.0, 10.0}) {
              const double ux = std::cos(tha) + r * std::cos(thb);
              const double uy = std::sin(tha) + r * std::sin(thb);
              if (std::hypot(ux, uy) < 1e-9) {
                zero = true;
                continue;
              }
              bins.insert(part.bin_of({ux, uy}));
            }
          }
        }
      }
    }
    return std::pair(bins, zero);
  };
  auto dilate = [&](std::set<int> s, int by) {
    std::set<int> out;
    for (int b : s)
      for (int d = -by; d <= by; ++d) out.insert(((b + d) % 16 + 16) % 16);
    return out;
  };
  const std::vector<std::pair<std::set<int>, std::set<int>>> cases = {
      {{0}, {4}}, {{0, 1}, {3, 4}}, {{2}, {2}}, {{0, 8}, {4, 12}}, {{15}, {0}}};
  for (const auto& [A, B] : cases) {
    const auto [expect_bins, expect_zero] = brute(A, B);
    const auto [got_bins, got_zero] = ultraglab::detail::bin_minkowski_sum(A, B, part, 1);
    EXPECT_EQ(got_zero, expect_zero);
    // agreement up to one bin of dilation in both directions
    for (int b : expect_bins) EXPECT_TRUE(dilate(got_bins, 1).count(b)) << "missing " << b;
    for (int b : got_bins) EXPECT_TRUE(dilate(expect_bins, 1).count(b)) << "extra " << b;
  }
}

TEST(ConeSum, MismatchedProbesRejected) {
  const auto part = cone_partition(1, 2);
  WaveFrontEstimate A, B;
  A.partition = B.partition = part;
  A.probes = {{0.0, 0.0}};
  B.probes = {{0.5, 0.0}};
  EXPECT_THROW(cone_sum(A, B), PartitionMismatch);
}

TEST(ProductCheck, BoundaryValueSquaredPassesTheInclusion) {
  const auto part = cone_partition(1, 2);
  const Net c = builtin_net("cauchy");
  const auto res =
      product_wavefront_check(c, c, probes_1d(), kBox, EpsGrid::standard(), part, kModel);
  EXPECT_EQ(res.status, CheckStatus::Passed);
  EXPECT_TRUE(res.violations.empty());
}

TEST(ProductCheck, OppositeDirectionsFailTheHypothesis) {
  const auto part = cone_partition(1, 2);
  const Net d = builtin_net("mollified_delta", with_moll());
  const auto res =
      product_wavefront_check(d, d, probes_1d(), kBox, EpsGrid::standard(), part, kModel);
  EXPECT_EQ(res.status, CheckStatus::HypothesisFailed);
}

TEST(PdoCheck, DerivativeIdentityAndRegularCoefficients) {
  const auto part = cone_partition(1, 2);
  const auto grid = EpsGrid::standard();
  const Net delta = builtin_net("mollified_delta", with_moll());
  // P = d/dx
  {
    std::vector<std::pair<MultiIndex, Net>> coeffs = {{MultiIndex{1}, constant_net(1, 1.0)}};
    const auto res = pdo_wavefront_check(delta, coeffs, probes_1d(), kBox, grid, part, kModel);
    EXPECT_EQ(res.status, CheckStatus::Passed);
    EXPECT_EQ(res.wf_pf.entries, res.wf_f.entries);  // equality observed for the spike
  }
  // P = multiplication by a gaussian
  {
    std::vector<std::pair<MultiIndex, Net>> coeffs = {{MultiIndex{0}, builtin_net("gaussian")}};
    const auto res = pdo_wavefront_check(delta, coeffs, probes_1d(), kBox, grid, part, kModel);
    EXPECT_EQ(res.status, CheckStatus::Passed);
  }
  // P = identity
  {
    std::vector<std::pair<MultiIndex, Net>> coeffs = {{MultiIndex{0}, constant_net(1, 1.0)}};
    const auto res = pdo_wavefront_check(delta, coeffs, probes_1d(), kBox, grid, part, kModel);
    EXPECT_EQ(res.status, CheckStatus::Passed);
    EXPECT_EQ(res.wf_pf.entries, res.wf_f.entries);
  }
  // a singular coefficient is rejected
  {
    std::vector<std::pair<MultiIndex, Net>> coeffs = {{MultiIndex{0}, delta}};
    EXPECT_THROW(pdo_wavefront_check(delta, coeffs, probes_1d(), kBox, grid, part, kModel),
                 CoefficientNotRegular);
  }
}
