#pragma once

/// Shared basics: complex alias, multi-indices, error types, small helpers.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ultraglab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Values with |v| below this are clamped and flagged saturated before
/// any log-domain fit.
inline constexpr double kNumericFloor = 1e-280;

/// Relative floor for spectral magnitudes: below max * this, a sample is
/// treated as transform noise and flagged saturated.
inline constexpr double kSpectralRelFloor = 1e-13;

inline constexpr double kInfRate = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Errors

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateDesign : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DerivativeUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownBuiltin : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SeriesBoundViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadBinCount : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyBin : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PartitionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CoefficientNotRegular : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Points and multi-indices (dimension 1 or 2; unused slots stay 0)

using Point = std::array<double, 2>;

struct MultiIndex {
  std::array<int, 2> a{0, 0};

  MultiIndex() = default;
  MultiIndex(int a0) : a{a0, 0} {}
  MultiIndex(int a0, int a1) : a{a0, a1} {}

  int order() const { return a[0] + a[1]; }
  int operator[](int i) const { return a[i]; }
  int& operator[](int i) { return a[i]; }
  bool operator==(const MultiIndex& o) const { return a == o.a; }
  bool operator<(const MultiIndex& o) const {
    if (order() != o.order()) return order() < o.order();
    return a < o.a;
  }

  std::string str() const {
    if (a[1] == 0) return "(" + std::to_string(a[0]) + ")";
    return "(" + std::to_string(a[0]) + "," + std::to_string(a[1]) + ")";
  }
};

/// All multi-indices of total order <= max_order in `dim` variables,
/// sorted by (order, lexicographic). Deterministic enumeration order.
inline std::vector<MultiIndex> multi_indices_upto(int dim, int max_order) {
  std::vector<MultiIndex> out;
  for (int total = 0; total <= max_order; ++total) {
    if (dim == 1) {
      out.push_back(MultiIndex{total});
    } else {
      for (int a0 = 0; a0 <= total; ++a0) out.push_back(MultiIndex{a0, total - a0});
    }
  }
  return out;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline double multi_factorial(const MultiIndex& m) {
  return factorial(m[0]) * factorial(m[1]);
}

inline double norm2(const Point& p, int dim) {
  return dim == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]);
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace ultraglab
