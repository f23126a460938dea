#include <gtest/gtest.h>

#include "ultraglab/fft.hpp"

using namespace ultraglab;

namespace {

std::vector<cplx> sample_1d(const Box& box, const std::function<double(double)>& f) {
  std::vector<cplx> out(box.n[0]);
  for (int j = 0; j < box.n[0]; ++j) out[j] = f(box.coord(0, j));
  return out;
}

}  // namespace

TEST(Fft, GaussianTransformMatchesClosedForm) {
  // F(exp(-x^2/2))(xi) = sqrt(2 pi) exp(-xi^2/2) under the dx-weighted convention
  const Box box = Box::make1d(-16.0, 16.0, 2048);
  const auto f = sample_1d(box, [](double x) { return std::exp(-0.5 * x * x); });
  const auto F = dft_forward(box, f);
  const double s2pi = std::sqrt(2.0 * kPi);
  for (int idx = 0; idx < box.n[0]; ++idx) {
    const double xi = xi_of_index(idx, box.n[0], box.dx(0));
    if (std::abs(xi) > 8.0) continue;
    const double expected = s2pi * std::exp(-0.5 * xi * xi);
    EXPECT_NEAR(std::abs(F[idx]), expected, 1e-10 + 1e-9 * expected);
  }
}

TEST(Fft, RoundTripIsIdentity) {
  const Box box = Box::make1d(-2.0, 2.0, 512);
  const auto f = sample_1d(box, [](double x) { return std::exp(-8.0 * x * x) * std::cos(3 * x); });
  const auto back = dft_inverse(box, dft_forward(box, f));
  for (int j = 0; j < box.n[0]; ++j) EXPECT_NEAR(std::abs(back[j] - f[j]), 0.0, 1e-12);
}

TEST(Fft, ParsevalIdentity) {
  const Box box = Box::make1d(-2.0, 2.0, 1024);
  const auto f = sample_1d(box, [](double x) { return std::exp(-4.0 * x * x) * std::sin(9 * x); });
  const auto F = dft_forward(box, f);
  double space = 0.0, freq = 0.0;
  for (const auto& v : f) space += std::norm(v);
  space *= box.dx(0);
  const double dxi = 2.0 * kPi / (box.n[0] * box.dx(0));
  for (const auto& v : F) freq += std::norm(v);
  freq *= dxi / (2.0 * kPi);
  EXPECT_NEAR(freq / space, 1.0, 1e-12);
}

TEST(Fft, SpectralDerivativeMatchesAnalytic) {
  const Box box = Box::make1d(-8.0, 8.0, 1024);
  const auto f = sample_1d(box, [](double x) { return std::exp(-0.5 * x * x); });
  const auto df = spectral_derivative(box, f, MultiIndex{1});
  for (int j = 0; j < box.n[0]; ++j) {
    const double x = box.coord(0, j);
    if (std::abs(x) > 6.0) continue;
    EXPECT_NEAR(df[j].real(), -x * std::exp(-0.5 * x * x), 1e-9);
    EXPECT_NEAR(df[j].imag(), 0.0, 1e-9);
  }
}

TEST(Fft, TwoDimensionalRoundTripAndSeparability) {
  const Box box = Box::make2d(-4.0, 4.0, 64, -4.0, 4.0, 64);
  std::vector<cplx> f(box.total_samples());
  for (long idx = 0; idx < box.total_samples(); ++idx) {
    const Point p = box.point_at(idx);
    f[idx] = std::exp(-(p[0] * p[0] + 2.0 * p[1] * p[1]));
  }
  const auto F = dft_forward(box, f);
  const auto back = dft_inverse(box, F);
  for (long idx = 0; idx < box.total_samples(); ++idx)
    EXPECT_NEAR(std::abs(back[idx] - f[idx]), 0.0, 1e-12);
}

TEST(Fft, FourierSymbolActsAsDerivative) {
  const Box box = Box::make1d(-8.0, 8.0, 1024);
  const auto f = sample_1d(box, [](double x) { return std::exp(-x * x); });
  const auto df = apply_fourier_symbol_1d(box, f, [](double xi) { return cplx(0.0, xi); });
  for (int j = 0; j < box.n[0]; ++j) {
    const double x = box.coord(0, j);
    if (std::abs(x) > 6.0) continue;
    EXPECT_NEAR(df[j].real(), -2.0 * x * std::exp(-x * x), 1e-8);
  }
}

TEST(Interp, CubicHitsSamplesAndInterpolatesSmoothly) {
  const Box box = Box::make1d(-1.0, 1.0, 256);
  std::vector<cplx> s(box.n[0]);
  auto g = [](double x) { return std::sin(4.0 * x); };
  for (int j = 0; j < box.n[0]; ++j) s[j] = g(box.coord(0, j));
  for (int j = 2; j < box.n[0] - 2; ++j)
    EXPECT_NEAR(interp_cubic_1d(box, s, box.coord(0, j)).real(), g(box.coord(0, j)), 1e-14);
  for (double x : {-0.513, -0.0077, 0.1993, 0.717})
    EXPECT_NEAR(interp_cubic_1d(box, s, x).real(), g(x), 1e-6);
}
