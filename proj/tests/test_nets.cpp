#include <gtest/gtest.h>

#include "ultraglab/builtins.hpp"

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

}  // namespace

TEST(Builtins, CatalogValuesMatchClosedForms) {
  const Net g = builtin_net("gaussian");
  EXPECT_EQ(g.eval(0.3, {0.0, 0.0}), cplx(1.0));
  const Net c = builtin_net("cauchy");
  EXPECT_NEAR(std::abs(c.eval(0.1, {0.0, 0.0}) - cplx(0.0, -10.0)), 0.0, 1e-12);
  BuiltinParams p;
  p.sigma = 2.0;
  const Net f = builtin_net("paper_sec3_counterexample", p);
  EXPECT_EQ(f.eval(0.1, {0.0, 0.0}), cplx(0.0));
  EXPECT_THROW(builtin_net("no_such_net"), UnknownBuiltin);
  EXPECT_THROW(builtin_net("mollified_delta"), UnknownBuiltin);  // needs a mollifier
}

TEST(Builtins, CatalogListingIsStable) {
  const auto a = builtin_catalog();
  const auto b = builtin_catalog();
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].first, b[i].first);
  bool has_cauchy = false, has_counterexample = false;
  for (const auto& [name, desc] : a) {
    has_cauchy = has_cauchy || name == "cauchy";
    has_counterexample = has_counterexample || name == "paper_sec3_counterexample";
  }
  EXPECT_TRUE(has_cauchy);
  EXPECT_TRUE(has_counterexample);
}

TEST(Combine, AddZeroIsIdentity) {
  const Net g = builtin_net("gaussian");
  const Net zero = constant_net(1, 0.0);
  const Net sum = combine(g, zero, CombineOp::Add);
  for (double x : {-1.3, 0.0, 0.4}) EXPECT_EQ(sum.eval(0.1, {x, 0.0}), g.eval(0.1, {x, 0.0}));
}

TEST(Combine, DeltaSquaredIsPointwiseSquare) {
  const Net d = builtin_net("mollified_delta", with_moll());
  const Net dd = combine(d, d, CombineOp::Mul);
  for (double x : {0.0, 0.05, -0.31}) {
    const cplx v = d.eval(0.1, {x, 0.0});
    EXPECT_EQ(dd.eval(0.1, {x, 0.0}), v * v);
  }
}

TEST(Combine, DimensionMismatchThrows) {
  EXPECT_THROW(combine(builtin_net("gaussian"), builtin_net("gaussian2d"), CombineOp::Add),
               DimMismatch);
}

TEST(Combine, GaussianTimesCauchyIsModerate) {
  const Net fg = combine(builtin_net("gaussian"), builtin_net("cauchy"), CombineOp::Mul);
  FunctionClassOptions opt;
  opt.max_order = 1;
  const auto c = classify_function_net(fg, kBox, EpsGrid::standard(), scale_exponent(2.0), {}, opt);
  EXPECT_EQ(c.verdict, Verdict::Moderate);
}

TEST(Derivative, OddDerivativeVanishesAtTheGaussianPeak) {
  const Net dg = derivative(builtin_net("gaussian"), MultiIndex{1});
  EXPECT_NEAR(std::abs(dg.eval(0.1, {0.0, 0.0})), 0.0, 1e-15);
}

TEST(Derivative, SmoothedStepDifferentiatesToTheSpike) {
  const Net h = builtin_net("mollified_heaviside", with_moll());
  const Net dh = derivative(h, MultiIndex{1});
  const Net d = builtin_net("mollified_delta", with_moll());
  const double eps = 0.05;
  double max_gap = 0.0;
  for (long j = 0; j < kBox.total_samples(); j += 3) {
    const Point p = kBox.point_at(j);
    max_gap = std::max(max_gap, std::abs(dh.eval(eps, p) - d.eval(eps, p)));
  }
  EXPECT_LE(max_gap, 1e-6);
}

TEST(Derivative, FiniteDifferencesAgreeWithAnalyticOnTheGaussian) {
  Net g = builtin_net("gaussian");
  Net sampled = g;
  sampled.derivative_provider = nullptr;  // force the stencil path
  sampled.max_analytic_order = 0;
  sampled.sample_grid = kBox;
  const Net fd = derivative(sampled, MultiIndex{1});
  const Net an = derivative(g, MultiIndex{1});
  EXPECT_NE(fd.provenance.find("finite-difference"), std::string::npos);
  double max_gap = 0.0;
  for (double x = -1.5; x <= 1.5; x += 0.013)
    max_gap = std::max(max_gap, std::abs(fd.eval(0.1, {x, 0.0}) - an.eval(0.1, {x, 0.0})));
  EXPECT_LE(max_gap, 1e-6);
}

TEST(Derivative, FdOrderCapAndMissingGrid) {
  Net g = builtin_net("gaussian");
  g.derivative_provider = nullptr;
  g.max_analytic_order = 0;
  EXPECT_THROW(derivative(g, MultiIndex{1}), DerivativeUnavailable);  // no grid
  g.sample_grid = kBox;
  EXPECT_THROW(derivative(g, MultiIndex{5}), DerivativeUnavailable);  // beyond the cap
}

TEST(Derivative, LeibnizRuleConsistency) {
  const Net f = builtin_net("gaussian");
  const Net g = builtin_net("cauchy");
  const Net prod = combine(f, g, CombineOp::Mul);
  const Net dprod = derivative(prod, MultiIndex{2});
  const double eps = 0.1;
  for (double x : {-0.7, 0.0, 0.23, 1.1}) {
    const Point p{x, 0.0};
    const cplx expect = f.eval_derivative(MultiIndex{2}, eps, p) * g.eval(eps, p) +
                        2.0 * f.eval_derivative(MultiIndex{1}, eps, p) *
                            g.eval_derivative(MultiIndex{1}, eps, p) +
                        f.eval(eps, p) * g.eval_derivative(MultiIndex{2}, eps, p);
    EXPECT_NEAR(std::abs(dprod.eval(eps, p) - expect), 0.0, 1e-8);
  }
}

TEST(ComposePolynomial, SquareMatchesSelfProduct) {
  const Net d = builtin_net("mollified_delta", with_moll());
  const Net sq = compose_polynomial(d, {0.0, 0.0, 1.0});
  const Net prod = combine(d, d, CombineOp::Mul);
  for (double x : {0.0, 0.02, -0.4})
    EXPECT_NEAR(std::abs(sq.eval(0.1, {x, 0.0}) - prod.eval(0.1, {x, 0.0})), 0.0, 1e-12);
}

TEST(ComposePolynomial, ConstantPolynomial) {
  const Net one = compose_polynomial(builtin_net("gaussian"), {1.0});
  EXPECT_EQ(one.eval(0.3, {0.77, 0.0}), cplx(1.0));
}

TEST(ComposePolynomial, CubicOfGaussianIsModerate) {
  const Net p = compose_polynomial(builtin_net("gaussian"), {0.0, -2.0, 0.0, 1.0});
  FunctionClassOptions opt;
  opt.max_order = 1;
  const auto c = classify_function_net(p, kBox, EpsGrid::standard(), scale_exponent(2.0), {}, opt);
  EXPECT_EQ(c.verdict, Verdict::Moderate);
}

TEST(Builtins, TensorProductsFactorAcrossAxes) {
  const Net d2 = builtin_net("mollified_delta2d", with_moll());
  const Net d1 = builtin_net("mollified_delta", with_moll());
  for (double eps : {0.1, 0.03}) {
    for (const Point p : {Point{0.01, -0.02}, Point{0.0, 0.05}}) {
      const cplx expect = d1.eval(eps, {p[0], 0.0}) * d1.eval(eps, {p[1], 0.0});
      EXPECT_NEAR(std::abs(d2.eval(eps, p) - expect), 0.0, 1e-9 * std::abs(expect) + 1e-12);
    }
  }
  const Net h1 = builtin_net("heaviside_x1", with_moll());
  // constant along the second axis, a smoothed step along the first
  EXPECT_EQ(h1.eval(0.05, {0.5, -1.0}), h1.eval(0.05, {0.5, 1.3}));
  EXPECT_NEAR(std::abs(h1.eval(0.05, {1.0, 0.0}) - cplx(1.0)), 0.0, 1e-7);
  EXPECT_NEAR(std::abs(h1.eval(0.05, {-1.0, 0.0})), 0.0, 1e-7);
}

TEST(Nets, EvaluationIsDeterministic) {
  const Net d = builtin_net("mollified_delta", with_moll());
  const cplx a = d.eval(0.0137, {0.01234, 0.0});
  for (int i = 0; i < 5; ++i) EXPECT_EQ(d.eval(0.0137, {0.01234, 0.0}), a);
}

TEST(ClassifyFunctionNet, MollifiedDeltaIsModerateToOrderTwo) {
  const Net d = builtin_net("mollified_delta", with_moll());
  FunctionClassOptions opt;
  opt.max_order = 2;
  const auto c = classify_function_net(d, kBox, EpsGrid::standard(), scale_exponent(2.0), {}, opt);
  EXPECT_EQ(c.verdict, Verdict::Moderate);
  for (const auto& [al, fit] : c.per_alpha) EXPECT_EQ(fit.sign, +1) << al.str();
}

TEST(ClassifyFunctionNet, OscillatorySmallNetIsNegligibleWithOrderedRates) {
  // exp(-2 eps^(-1/3)) sin(x/eps): first-order rate below zeroth, above k_min
  const double s = scale_exponent(2.0).s;
  Net amp;
  amp.id = "amp";
  amp.dim = 1;
  amp.max_analytic_order = 99;
  amp.evaluator = [s](double eps, const Point&) {
    return cplx(std::exp(-2.0 * std::pow(eps, -s)), 0.0);
  };
  amp.derivative_provider = [](const MultiIndex&, double, const Point&) { return cplx(0.0); };
  Net osc;
  osc.id = "osc";
  osc.dim = 1;
  osc.max_analytic_order = 99;
  osc.evaluator = [](double eps, const Point& x) { return cplx(std::sin(x[0] / eps), 0.0); };
  osc.derivative_provider = [](const MultiIndex& al, double eps, const Point& x) {
    return cplx(std::pow(eps, -al[0]) * std::sin(x[0] / eps + al[0] * kPi / 2.0), 0.0);
  };
  const Net net = combine(amp, osc, CombineOp::Mul);
  FunctionClassOptions opt;
  opt.max_order = 1;
  opt.full_per_alpha = true;
  const auto c = classify_function_net(net, kBox, EpsGrid::standard(), scale_exponent(2.0), {}, opt);
  EXPECT_EQ(c.verdict, Verdict::Negligible);
  const double k0 = c.per_alpha.at(MultiIndex{0}).k;
  const double k1 = c.per_alpha.at(MultiIndex{1}).k;
  EXPECT_LT(k1, k0);
  EXPECT_GE(k1, 0.5);
}

TEST(PointValue, VanishingPointsNetAtClassicalAndScaledPoints) {
  BuiltinParams p;
  p.sigma = 1.5;
  const Net f = builtin_net("paper_sec3_counterexample", p);
  const auto model = scale_exponent(1.5);
  const auto grid = EpsGrid::standard();
  const auto v0 = point_value(f, GenPoint::classical(1, {0.5, 0.0}), grid, model);
  EXPECT_EQ(v0.classification.verdict, Verdict::ExactZero);

  GenPoint scaled;
  scaled.dim = 1;
  scaled.compactly_supported = true;
  scaled.witness = kBox;
  scaled.path = [](double eps) { return Point{0.75 * eps, 0.0}; };
  const auto v1 = point_value(f, scaled, grid, model);
  EXPECT_EQ(v1.classification.verdict, Verdict::Negligible);
  EXPECT_NEAR(v1.classification.k_hat, 1.0, 0.2);
  EXPECT_FALSE(v1.classification.is_negligible_at(2.0));
}

TEST(PointValue, GaussianAtTheCenterIsConstantOne) {
  const auto v = point_value(builtin_net("gaussian"), GenPoint::classical(1, {0.0, 0.0}),
                             EpsGrid::standard(), scale_exponent(2.0));
  for (const auto& [eps, val] : v.values) EXPECT_EQ(val, cplx(1.0));
  EXPECT_EQ(v.classification.verdict, Verdict::Moderate);
  EXPECT_NEAR(v.classification.k_hat, 0.0, 1e-9);
}

TEST(PointValue, RequiresCompactSupport) {
  GenPoint free;
  free.dim = 1;
  free.compactly_supported = false;
  free.path = [](double) { return Point{0.0, 0.0}; };
  EXPECT_THROW(point_value(builtin_net("gaussian"), free, EpsGrid::standard(), scale_exponent(2.0)),
               OutOfDomain);
}

TEST(GenPointEquiv, EquivalenceByDecayRate) {
  const auto grid = EpsGrid::standard();
  const auto model = scale_exponent(2.0);
  GenPoint x = GenPoint::classical(1, {0.25, 0.0});
  auto [same, c0] = gen_point_equiv(x, x, grid, model);
  EXPECT_TRUE(same);
  EXPECT_EQ(c0.verdict, Verdict::ExactZero);

  GenPoint y;
  y.dim = 1;
  y.compactly_supported = true;
  y.witness = kBox;
  y.path = [model](double eps) {
    return Point{0.25 + std::exp(-3.0 * model.eps_feature(eps)), 0.0};
  };
  auto [equiv, c1] = gen_point_equiv(x, y, grid, model);
  EXPECT_TRUE(equiv);
  EXPECT_NEAR(c1.k_hat, 3.0, 1e-3);  // cancellation-limited near 0.25 + 1e-16

  GenPoint z;
  z.dim = 1;
  z.compactly_supported = true;
  z.witness = kBox;
  z.path = [](double eps) { return Point{0.25 + eps, 0.0}; };
  auto [equiv2, c2] = gen_point_equiv(x, z, grid, model);
  EXPECT_FALSE(equiv2);
}

TEST(PointValue, EquivalentPointsGiveEquivalentValues) {
  // the point value only depends on the class of the generalized point
  const Net g = builtin_net("gaussian");
  const auto grid = EpsGrid::standard();
  const auto model = scale_exponent(2.0);
  const GenPoint x = GenPoint::classical(1, {0.25, 0.0});
  GenPoint y;
  y.dim = 1;
  y.compactly_supported = true;
  y.witness = kBox;
  y.path = [model](double eps) {
    return Point{0.25 + std::exp(-3.0 * model.eps_feature(eps)), 0.0};
  };
  ASSERT_TRUE(gen_point_equiv(x, y, grid, model).first);
  const auto vx = point_value(g, x, grid, model);
  const auto vy = point_value(g, y, grid, model);
  std::vector<std::pair<double, cplx>> diff;
  for (size_t i = 0; i < vx.values.size(); ++i)
    diff.push_back({vx.values[i].first, vx.values[i].second - vy.values[i].second});
  const auto c = classify_scalar_net(diff, model);
  EXPECT_TRUE(c.verdict == Verdict::Negligible || c.verdict == Verdict::ExactZero);
}

TEST(ArgmaxWitness, DeterministicTieBreakTowardTheSmallestCoordinate) {
  // two equal peaks; the scan must settle on the left one
  Net twin = make_analytic_net("twin", 1, [](double, const Point& x) {
    const double a = std::exp(-50.0 * (x[0] + 0.5) * (x[0] + 0.5));
    const double b = std::exp(-50.0 * (x[0] - 0.5) * (x[0] - 0.5));
    return cplx(a + b, 0.0);
  });
  const auto witness = argmax_witness_path(twin, Box::make1d(-2, 2, 1024), EpsGrid::standard());
  EXPECT_NEAR(witness.path(0.1)[0], -0.5, 1e-2);
}

TEST(EqualityTest, StrongEqualityOfANetWithItself) {
  const Net d = builtin_net("mollified_delta", with_moll());
  const auto v = equality_test(d, d, EqualityMode::strong(), {}, kBox, EpsGrid::standard(),
                               scale_exponent(2.0));
  EXPECT_TRUE(v.holds);
  EXPECT_EQ(v.strong_class.verdict, Verdict::ExactZero);
}

namespace {

std::vector<PairTest> bump_tests() {
  std::vector<PairTest> tests;
  for (double c : {0.0, 0.2, -0.3}) {
    CutoffProfile prof;
    prof.sigma = 2.0;
    prof.r_inner = 0.25;
    prof.r_outer = 0.5;
    tests.push_back({"bump@" + std::to_string(c), [prof, c](const Point& p) {
                       return prof.value_radial(std::abs(p[0] - c));
                     }});
  }
  return tests;
}

}  // namespace

TEST(EqualityTest, TwoMollifierSpikesAssociatedButNotStronglyEqual) {
  const auto m1 = shared_moll();
  MollifierOptions narrower;
  narrower.xi1_frac = 0.10;
  narrower.xi2_frac = 0.30;
  const auto m2 = std::make_shared<Mollifier>(
      build_mollifier(2.0, Box::make1d(-8, 8, 4096), 6, narrower));
  const Net d1 = mollifier_net(m1, 1);
  const Net d2 = mollifier_net(m2, 1);
  const auto grid = EpsGrid::standard();
  const auto model = scale_exponent(2.0);

  const auto assoc =
      equality_test(d1, d2, EqualityMode::associated(), bump_tests(), kBox, grid, model);
  EXPECT_TRUE(assoc.holds);

  const auto strong = equality_test(d1, d2, EqualityMode::strong(), {}, kBox, grid, model);
  EXPECT_FALSE(strong.holds);
}

TEST(EqualityTest, HierarchyOfEqualities) {
  // strong implies the ultradistributional senses implies association
  const auto m = shared_moll();
  const Net d = mollifier_net(m, 1);
  const Net g = builtin_net("gaussian");
  const auto grid = EpsGrid::standard();
  const auto model = scale_exponent(2.0);
  const auto tests = bump_tests();
  for (const auto& [f, h] : std::vector<std::pair<Net, Net>>{{d, d}, {g, g}, {d, g}}) {
    const bool strong = equality_test(f, h, EqualityMode::strong(), tests, kBox, grid, model).holds;
    const bool t_hi =
        equality_test(f, h, EqualityMode::t_sense(3.0 * 2.0 - 1.0), tests, kBox, grid, model).holds;
    const bool t_lo = equality_test(f, h, EqualityMode::t_sense(2.0), tests, kBox, grid, model).holds;
    const bool assoc =
        equality_test(f, h, EqualityMode::associated(), tests, kBox, grid, model).holds;
    if (strong) EXPECT_TRUE(t_hi);
    if (t_hi) EXPECT_TRUE(t_lo);
    if (t_lo) EXPECT_TRUE(assoc);
  }
  EXPECT_THROW(
      equality_test(d, d, EqualityMode::t_sense(10.0), tests, kBox, grid, model),
      DomainError);
  EXPECT_THROW(equality_test(d, d, EqualityMode::associated(), {}, kBox, grid, model),
               InsufficientData);
}

TEST(ClassifyFunctionNet, MonotoneScaleInclusion) {
  // generated negligible at order 1.5, still negligible at order 3
  const double s = scale_exponent(1.5).s;
  Net amp = make_analytic_net(
      "amp", 1,
      [s](double eps, const Point&) { return cplx(std::exp(-2.0 * std::pow(eps, -s)), 0.0); },
      [](const MultiIndex&, double, const Point&) { return cplx(0.0); }, 99);
  const Net net = combine(amp, builtin_net("gaussian"), CombineOp::Mul);
  FunctionClassOptions opt;
  opt.max_order = 1;
  for (double tau : {1.5, 2.0, 3.0}) {
    const auto c = classify_function_net(net, kBox, EpsGrid::standard(), scale_exponent(tau), {}, opt);
    EXPECT_EQ(c.verdict, Verdict::Negligible) << "tau=" << tau;
    EXPECT_GE(c.k_hat, 1.0);
  }
}
