#pragma once

/// Radix-2 FFT and the project-wide discrete Fourier transform convention:
///
///   forward:  F(f)(xi_k) = dx * sum_j f(x_j) exp(-i x_j xi_k)
///   inverse:  f(x_j) = (1/(n dx)) * sum_k F(xi_k) exp(+i x_j xi_k)
///
/// with x_j = lo + j dx and xi_k = 2 pi k / (n dx), k in [-n/2, n/2).
/// Bin k is stored at index (k mod n), i.e. standard DFT order.

#include "ultraglab/grid.hpp"

namespace ultraglab {

namespace detail {

/// In-place iterative radix-2 Cooley-Tukey. n must be a power of two.
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const int n = int(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / len * (inverse ? 1.0 : -1.0);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cplx w(1.0);
      for (int j = 0; j < len / 2; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / n;
    for (auto& x : a) x *= inv;
  }
}

}  // namespace detail

/// Signed frequency of DFT-order index idx on an n-point grid of spacing dx.
inline double xi_of_index(int idx, int n, double dx) {
  const int k = idx < n / 2 ? idx : idx - n;
  return 2.0 * kPi * k / (n * dx);
}

/// Largest dual-grid magnitude, pi/dx.
inline double xi_max(int n, double dx) {
  (void)n;
  return kPi / dx;
}

/// Forward transform of samples on a 1D box grid; result in DFT order.
inline std::vector<cplx> dft_forward_1d(const Box& box, const std::vector<cplx>& f) {
  const int n = box.n[0];
  const double dx = box.dx(0);
  std::vector<cplx> a = f;
  detail::fft_pow2(a, false);
  std::vector<cplx> out(n);
  for (int idx = 0; idx < n; ++idx) {
    const double xi = xi_of_index(idx, n, dx);
    const cplx phase(std::cos(-box.lo[0] * xi), std::sin(-box.lo[0] * xi));
    out[idx] = dx * phase * a[idx];
  }
  return out;
}

/// Inverse of dft_forward_1d.
inline std::vector<cplx> dft_inverse_1d(const Box& box, const std::vector<cplx>& F) {
  const int n = box.n[0];
  const double dx = box.dx(0);
  std::vector<cplx> a(n);
  for (int idx = 0; idx < n; ++idx) {
    const double xi = xi_of_index(idx, n, dx);
    const cplx phase(std::cos(box.lo[0] * xi), std::sin(box.lo[0] * xi));
    a[idx] = F[idx] * phase / dx;
  }
  detail::fft_pow2(a, true);
  return a;
}

/// Forward transform on a 2D box grid (row-major, axis 1 fast); DFT order
/// along both axes.
inline std::vector<cplx> dft_forward_2d(const Box& box, const std::vector<cplx>& f) {
  const int n0 = box.n[0], n1 = box.n[1];
  std::vector<cplx> a = f;
  std::vector<cplx> row(n1), col(n0);
  for (int i = 0; i < n0; ++i) {
    std::copy(a.begin() + long(i) * n1, a.begin() + long(i + 1) * n1, row.begin());
    detail::fft_pow2(row, false);
    std::copy(row.begin(), row.end(), a.begin() + long(i) * n1);
  }
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n0; ++i) col[i] = a[long(i) * n1 + j];
    detail::fft_pow2(col, false);
    for (int i = 0; i < n0; ++i) a[long(i) * n1 + j] = col[i];
  }
  const double dx0 = box.dx(0), dx1 = box.dx(1);
  for (int i = 0; i < n0; ++i) {
    const double xi0 = xi_of_index(i, n0, dx0);
    for (int j = 0; j < n1; ++j) {
      const double xi1 = xi_of_index(j, n1, dx1);
      const double ph = -(box.lo[0] * xi0 + box.lo[1] * xi1);
      a[long(i) * n1 + j] *= dx0 * dx1 * cplx(std::cos(ph), std::sin(ph));
    }
  }
  return a;
}

inline std::vector<cplx> dft_inverse_2d(const Box& box, const std::vector<cplx>& F) {
  const int n0 = box.n[0], n1 = box.n[1];
  const double dx0 = box.dx(0), dx1 = box.dx(1);
  std::vector<cplx> a(F.size());
  for (int i = 0; i < n0; ++i) {
    const double xi0 = xi_of_index(i, n0, dx0);
    for (int j = 0; j < n1; ++j) {
      const double xi1 = xi_of_index(j, n1, dx1);
      const double ph = box.lo[0] * xi0 + box.lo[1] * xi1;
      a[long(i) * n1 + j] = F[long(i) * n1 + j] * cplx(std::cos(ph), std::sin(ph)) / (dx0 * dx1);
    }
  }
  std::vector<cplx> row(n1), col(n0);
  for (int i = 0; i < n0; ++i) {
    std::copy(a.begin() + long(i) * n1, a.begin() + long(i + 1) * n1, row.begin());
    detail::fft_pow2(row, true);
    std::copy(row.begin(), row.end(), a.begin() + long(i) * n1);
  }
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n0; ++i) col[i] = a[long(i) * n1 + j];
    detail::fft_pow2(col, true);
    for (int i = 0; i < n0; ++i) a[long(i) * n1 + j] = col[i];
  }
  return a;
}

inline std::vector<cplx> dft_forward(const Box& box, const std::vector<cplx>& f) {
  return box.dim == 1 ? dft_forward_1d(box, f) : dft_forward_2d(box, f);
}

inline std::vector<cplx> dft_inverse(const Box& box, const std::vector<cplx>& F) {
  return box.dim == 1 ? dft_inverse_1d(box, F) : dft_inverse_2d(box, F);
}

/// Spectral derivative d^alpha applied to samples on a box grid.
inline std::vector<cplx> spectral_derivative(const Box& box, const std::vector<cplx>& f,
                                             const MultiIndex& alpha) {
  std::vector<cplx> F = dft_forward(box, f);
  const int n0 = box.n[0];
  if (box.dim == 1) {
    for (int idx = 0; idx < n0; ++idx) {
      const double xi = xi_of_index(idx, n0, box.dx(0));
      F[idx] *= std::pow(cplx(0.0, xi), alpha[0]);
    }
  } else {
    const int n1 = box.n[1];
    for (int i = 0; i < n0; ++i) {
      const double xi0 = xi_of_index(i, n0, box.dx(0));
      for (int j = 0; j < n1; ++j) {
        const double xi1 = xi_of_index(j, n1, box.dx(1));
        F[long(i) * n1 + j] *= std::pow(cplx(0.0, xi0), alpha[0]) * std::pow(cplx(0.0, xi1), alpha[1]);
      }
    }
  }
  return dft_inverse(box, F);
}

/// Applies a Fourier multiplier to samples on a box grid: returns the grid
/// samples of F^{-1}[ symbol(xi) * F(f) ]. The spectrum is taken on a
/// zero-padded grid (length >= pad_factor * n per axis) so that convolution
/// kernels with compact-support data never wrap around.
inline std::vector<cplx> apply_fourier_symbol_1d(const Box& box, const std::vector<cplx>& f,
                                                 const std::function<cplx(double)>& symbol,
                                                 int pad_factor = 2) {
  const int n = box.n[0];
  const double dx = box.dx(0);
  int m = 1;
  while (m < pad_factor * n) m <<= 1;
  std::vector<cplx> a(m, 0.0);
  std::copy(f.begin(), f.end(), a.begin());
  detail::fft_pow2(a, false);
  for (int idx = 0; idx < m; ++idx) a[idx] *= symbol(xi_of_index(idx, m, dx));
  detail::fft_pow2(a, true);
  a.resize(n);
  return a;
}

inline std::vector<cplx> apply_fourier_symbol_2d(const Box& box, const std::vector<cplx>& f,
                                                 const std::function<cplx(double, double)>& symbol,
                                                 int pad_factor = 2) {
  const int n0 = box.n[0], n1 = box.n[1];
  const double dx0 = box.dx(0), dx1 = box.dx(1);
  int m0 = 1, m1 = 1;
  while (m0 < pad_factor * n0) m0 <<= 1;
  while (m1 < pad_factor * n1) m1 <<= 1;
  std::vector<cplx> a(long(m0) * m1, 0.0);
  for (int i = 0; i < n0; ++i)
    std::copy(f.begin() + long(i) * n1, f.begin() + long(i + 1) * n1, a.begin() + long(i) * m1);
  std::vector<cplx> row(m1), col(m0);
  for (int i = 0; i < m0; ++i) {
    std::copy(a.begin() + long(i) * m1, a.begin() + long(i + 1) * m1, row.begin());
    detail::fft_pow2(row, false);
    std::copy(row.begin(), row.end(), a.begin() + long(i) * m1);
  }
  for (int j = 0; j < m1; ++j) {
    for (int i = 0; i < m0; ++i) col[i] = a[long(i) * m1 + j];
    detail::fft_pow2(col, false);
    for (int i = 0; i < m0; ++i) a[long(i) * m1 + j] = col[i];
  }
  for (int i = 0; i < m0; ++i) {
    const double xi0 = xi_of_index(i, m0, dx0);
    for (int j = 0; j < m1; ++j) a[long(i) * m1 + j] *= symbol(xi0, xi_of_index(j, m1, dx1));
  }
  for (int i = 0; i < m0; ++i) {
    std::copy(a.begin() + long(i) * m1, a.begin() + long(i + 1) * m1, row.begin());
    detail::fft_pow2(row, true);
    std::copy(row.begin(), row.end(), a.begin() + long(i) * m1);
  }
  for (int j = 0; j < m1; ++j) {
    for (int i = 0; i < m0; ++i) col[i] = a[long(i) * m1 + j];
    detail::fft_pow2(col, true);
    for (int i = 0; i < m0; ++i) a[long(i) * m1 + j] = col[i];
  }
  std::vector<cplx> out(long(n0) * n1);
  for (int i = 0; i < n0; ++i)
    std::copy(a.begin() + long(i) * m1, a.begin() + long(i) * m1 + n1, out.begin() + long(i) * n1);
  return out;
}

}  // namespace ultraglab
