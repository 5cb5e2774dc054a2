#pragma once

#include <cmath>

#include "gapbound/numerics.hpp"

namespace gapbound::bessel {

/// Argument magnitude at which j1() switches from the power series to the
/// Hankel asymptotic expansion.
inline constexpr double kSeriesLimit = 12.0;

/// J1 by its power series; accurate to ~1e-13 absolute for |z| <= 12.
inline double j1_series(double z) {
  const double half = 0.5 * z;
  const double q = -half * half;
  double term = half;  // k = 0
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

/// J1 by the Hankel asymptotic expansion, truncated at the smallest term.
/// Intended for |z| >= 12, where the truncation error is below ~1e-11.
inline double j1_asymptotic(double z) {
  const double sign = z < 0.0 ? -1.0 : 1.0;
  const double x = std::abs(z);
  constexpr double mu = 4.0;  // 4 nu^2 with nu = 1
  double p = 1.0, q = 0.0;
  double ak = 1.0;  // a_k(nu) / z^k, running
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = ak * (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(next) >= std::abs(last)) break;
    ak = next;
    last = next;
    // a_k enters P for even k, Q for odd k, with alternating signs.
    switch (k % 4) {
      case 1: q += ak; break;
      case 2: p -= ak; break;
      case 3: q -= ak; break;
      case 0: p += ak; break;
    }
    if (std::abs(ak) < 1e-17) break;
  }
  const double chi = x - 0.75 * kPi;
  return sign * std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

/// Bessel function of the first kind, order one.
inline double j1(double z) {
  return std::abs(z) <= kSeriesLimit ? j1_series(z) : j1_asymptotic(z);
}

}  // namespace gapbound::bessel
