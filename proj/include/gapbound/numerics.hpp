#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gapbound {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;
using Vec = std::vector<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sin(pi x) and cos(pi x) with exact argument reduction, so integer and
// half-integer arguments produce exact zeros.
inline double sin_pi(double x) {
  if (!std::isfinite(x)) return std::nan("");
  double r = std::fmod(x, 2.0);  // exact
  if (r <= -1.0) r += 2.0;
  if (r > 1.0) r -= 2.0;
  // r in (-1, 1]
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  if (r > 0.5) return std::sin(kPi * (1.0 - r));
  if (r < -0.5) return -std::sin(kPi * (1.0 + r));
  return std::sin(kPi * r);
}

inline double cos_pi(double x) { return sin_pi(x + 0.5); }

/// e^{-i pi x}
inline Complex expi_pi_neg(double x) { return {cos_pi(x), -sin_pi(x)}; }

/// sin(pi x) / (pi x), equal to 1 at x = 0.
inline double sinc_pi(double x) {
  if (std::abs(x) < 1e-8) {
    const double px = kPi * x;
    return 1.0 - px * px / 6.0;
  }
  return sin_pi(x) / (kPi * x);
}

/// Compensated (Neumaier) summation; order of additions fixes the result.
class NeumaierSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;
};

/// Ordinary least squares y ~ intercept + slope * x.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error("fit_line: need at least two paired samples");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("fit_line: abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    rr += r * r;
  }
  f.residual_norm = std::sqrt(rr);
  return f;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int order) {
  if (order < 1) throw Error("gauss_legendre: order must be positive");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(order - 1 - i);
    rule.nodes[lo] = -z;
    rule.nodes[hi] = z;
    rule.weights[lo] = rule.weights[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

/// Cached rule for the common orders used by the composite quadratures.
inline const GaussRule& gauss_legendre_cached(int order) {
  static const GaussRule r8 = gauss_legendre(8);
  static const GaussRule r16 = gauss_legendre(16);
  static const GaussRule r32 = gauss_legendre(32);
  switch (order) {
    case 8: return r8;
    case 16: return r16;
    case 32: return r32;
    default: throw Error("gauss_legendre_cached: unsupported order");
  }
}

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` panels.
template <class F>
auto integrate_panels(F&& f, double a, double b, int panels, int order = 16) {
  const GaussRule& rule = gauss_legendre_cached(order);
  using R = decltype(f(a));
  R total{};
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    R part{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      part += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    total += part * (0.5 * width);
  }
  return total;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_inf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

/// Volume of the unit ball in R^m.
inline double unit_ball_volume(int m) {
  return std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

}  // namespace gapbound
