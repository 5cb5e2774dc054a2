#pragma once

// Fourier transforms of indicator functions under the convention
//   f^(xi) = integral of e^{-2 pi i x.xi} f(x) dx.

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <variant>

#include "gapbound/bessel.hpp"
#include "gapbound/domains.hpp"
#include "gapbound/numerics.hpp"
#include "gapbound/profile.hpp"

namespace gapbound {

struct FourierValue {
  double re = 0.0;
  double im = 0.0;
  double abs_error_bound = 0.0;

  [[nodiscard]] Complex value() const { return {re, im}; }
  [[nodiscard]] double abs() const { return std::hypot(re, im); }
  [[nodiscard]] double norm() const { return re * re + im * im; }
};

inline FourierValue make_value(Complex z, double err = 0.0) { return {z.real(), z.imag(), err}; }

/// Truncation depth used when the Cantor transform is reached through chi_hat().
inline constexpr int kDefaultCantorTruncation = 40;

namespace detail {

/// integral over [lo, hi] of e^{-2 pi i x xi} dx
inline Complex interval_transform(double lo, double hi, double xi) {
  const double len = hi - lo;
  if (len <= 0.0) return {0.0, 0.0};
  return len * sinc_pi(len * xi) * expi_pi_neg((lo + hi) * xi);
}

/// e^{-2 pi i theta}
inline Complex cis_neg(double theta) { return expi_pi_neg(2.0 * theta); }

/// integral over [0, 1] of s e^{-2 pi i kappa s} ds
inline Complex first_moment(double kappa) {
  if (std::abs(kappa) < 1e-3) {
    // sum_m (-2 pi i kappa)^m / (m! (m + 2))
    const Complex z(0.0, -kTwoPi * kappa);
    Complex term(1.0, 0.0), sum(0.5, 0.0);
    for (int m = 1; m < 12; ++m) {
      term *= z / static_cast<double>(m);
      sum += term / static_cast<double>(m + 2);
    }
    return sum;
  }
  const Complex e0 = sinc_pi(kappa) * expi_pi_neg(kappa);
  const Complex e1 = cis_neg(kappa);
  return (e1 - e0) / Complex(0.0, -kTwoPi * kappa);
}

/// integral over [u, v] of e^{-2 pi i (c + kappa x)} dx
inline Complex linear_phase_integral(double u, double v, double c, double kappa) {
  const double len = v - u;
  if (len <= 0.0) return {0.0, 0.0};
  return len * sinc_pi(kappa * len) * cis_neg(c + kappa * 0.5 * (u + v));
}

/// Transform of the trapezoid {u <= x <= v, lower(x) <= y <= upper(x)}.
inline Complex trapezoid_transform(double u, double v, const LinearPiece& lower, const LinearPiece& upper,
                                   double xi1, double xi2) {
  const double len = v - u;
  if (len <= 0.0) return {0.0, 0.0};
  if (xi2 == 0.0) {
    const double p = upper.at(u) - lower.at(u);
    const double q = (upper.at(v) - lower.at(v)) - p;
    const double kappa = xi1 * len;
    const Complex e0 = sinc_pi(kappa) * expi_pi_neg(kappa);
    return len * cis_neg(xi1 * u) * (p * e0 + q * first_moment(kappa));
  }
  auto edge = [&](const LinearPiece& piece) {
    const double c = xi2 * (piece.y0 - piece.slope * piece.x0);
    return linear_phase_integral(u, v, c, xi1 + xi2 * piece.slope);
  };
  return (edge(lower) - edge(upper)) / Complex(0.0, kTwoPi * xi2);
}

inline bool near_integer(double v) {
  return std::abs(v - std::round(v)) <= 1e-12 * std::max(1.0, std::abs(v));
}

}  // namespace detail

/// Transform of the box [0, a_1] x ... x [0, a_n]; exact.
inline FourierValue chi_hat_box(std::span<const double> sides, std::span<const double> xi) {
  if (sides.size() != xi.size()) throw Error("chi_hat_box: dimension mismatch");
  Complex z(1.0, 0.0);
  for (std::size_t j = 0; j < sides.size(); ++j) {
    if (!(sides[j] > 0.0)) throw Error("chi_hat_box: sides must be positive");
    z *= detail::interval_transform(0.0, sides[j], xi[j]);
  }
  return make_value(z);
}

/// Transform of an arbitrary axis-aligned box [lo_j, hi_j]; empty boxes give 0.
inline FourierValue chi_hat_interval_box(std::span<const double> lo, std::span<const double> hi,
                                         std::span<const double> xi) {
  Complex z(1.0, 0.0);
  for (std::size_t j = 0; j < xi.size(); ++j) z *= detail::interval_transform(lo[j], hi[j], xi[j]);
  return make_value(z);
}

/// Transform of the disk of radius r centered at `center`:
/// r J1(2 pi r |xi|) / |xi|, and pi r^2 at xi = 0.
inline FourierValue chi_hat_disk(double r, std::span<const double> xi, std::span<const double> center = {}) {
  if (!(r > 0.0)) throw Error("chi_hat_disk: radius must be positive");
  if (xi.size() != 2) throw Error("chi_hat_disk: frequency must be planar");
  const double rho = std::hypot(xi[0], xi[1]);
  double mag;
  if (rho < 1e-14)
    mag = kPi * r * r;
  else
    mag = r * bessel::j1(kTwoPi * r * rho) / rho;
  Complex z(mag, 0.0);
  if (center.size() == 2) z *= detail::cis_neg(center[0] * xi[0] + center[1] * xi[1]);
  return make_value(z);
}

/// Transform of a graph domain. Exact for sawtooth profiles; composite
/// Gauss quadrature in x (with a doubling error estimate) for Weierstrass
/// profiles. Exactly zero at the lattice points of Z^2 other than 0.
inline FourierValue chi_hat_graph(const GraphDomain& g, std::span<const double> xi) {
  if (xi.size() != 2) throw Error("chi_hat_graph: frequency must be planar");
  const double xi1 = xi[0], xi2 = xi[1];
  if (xi2 != 0.0 && detail::near_integer(xi2)) return {};
  if (xi2 == 0.0) return make_value(detail::interval_transform(0.0, 1.0, xi1));
  // vertical fiber factor: integral over [0, 1] of e^{-2 pi i xi2 v} dv
  const Complex fiber = detail::interval_transform(0.0, 1.0, xi2);

  if (is_piecewise_linear(g.profile)) {
    const Polyline pl = profile_polyline(g.profile);
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < pl.size(); ++i) {
      const double x0 = pl.x[i], x1 = pl.x[i + 1];
      if (x1 <= x0) continue;
      const double m = (pl.y[i + 1] - pl.y[i]) / (x1 - x0);
      acc += detail::linear_phase_integral(x0, x1, xi2 * (pl.y[i] - m * x0), xi1 + xi2 * m);
    }
    return make_value(fiber * acc);
  }

  const auto& w = std::get<Weierstrass>(g.profile);
  double slope_bound = 0.0;
  for (int j = 0; j < w.depth; ++j)
    slope_bound += kTwoPi * std::pow(static_cast<double>(w.base), j * (1.0 - w.gamma));
  slope_bound *= w.amplitude;
  const double oscillations = std::abs(xi1) + std::abs(xi2) * slope_bound;
  const double wavelengths = std::pow(static_cast<double>(w.base), w.depth - 1);
  const int panels = static_cast<int>(std::ceil(std::max({8.0, oscillations, 2.0 * wavelengths})));
  auto integrand = [&](double x) { return detail::cis_neg(xi1 * x + xi2 * profile_value(g.profile, x)); };
  const Complex coarse = integrate_panels(integrand, 0.0, 1.0, panels);
  const Complex fine = integrate_panels(integrand, 0.0, 1.0, 2 * panels);
  return make_value(fiber * fine, std::abs(fiber) * std::abs(fine - coarse));
}

/// Fourier transform of the base-4 Cantor measure,
/// e^{-2 pi i t / 3} prod_{j=0}^{J} cos(pi t / (2 * 4^j)).
inline FourierValue cantor_mhat(double t, int truncation) {
  if (truncation < 1) throw Error("cantor_mhat: truncation must be >= 1");
  double prod = 1.0;
  double scale = 0.5;  // 1 / (2 * 4^j)
  for (int j = 0; j <= truncation; ++j) {
    prod *= cos_pi(t * scale);
    scale *= 0.25;
  }
  // tail: 1 - prod_{j > J} cos(x_j) <= sum_{j > J} x_j^2 / 2 once x_{J+1} < 1
  const double next = kPi * std::abs(t) * scale;
  double err;
  if (next < 1.0) {
    const double x0 = kPi * t * 0.5;
    err = 0.5 * x0 * x0 * std::pow(16.0, -(truncation + 1)) * 16.0 / 15.0;
  } else {
    err = 2.0;
  }
  return make_value(prod * detail::cis_neg(t / 3.0), err);
}

/// Transform of any domain or measure, dispatching on its variant.
inline FourierValue chi_hat(const DomainSpec& d, std::span<const double> xi) {
  struct V {
    std::span<const double> xi;
    FourierValue operator()(const Box& b) const { return chi_hat_box(b.sides, xi); }
    FourierValue operator()(const Disk& c) const { return chi_hat_disk(c.radius, xi, c.center); }
    FourierValue operator()(const GraphDomain& g) const { return chi_hat_graph(g, xi); }
    FourierValue operator()(const ScaledDomain& s) const {
      double buf[4];
      if (xi.size() > 4) throw Error("chi_hat: dimension too large");
      for (std::size_t j = 0; j < xi.size(); ++j) buf[j] = s.t * xi[j];
      const FourierValue base = chi_hat(*s.base, std::span<const double>(buf, xi.size()));
      const double scale = std::pow(s.t, static_cast<double>(xi.size()));
      return {scale * base.re, scale * base.im, scale * base.abs_error_bound};
    }
    FourierValue operator()(const CantorMeasure4&) const {
      if (xi.size() != 1) throw Error("chi_hat: the Cantor measure lives on the line");
      return cantor_mhat(xi[0], kDefaultCantorTruncation);
    }
  };
  if (static_cast<int>(xi.size()) != dimension(d)) throw Error("chi_hat: dimension mismatch");
  return std::visit(V{xi}, d.shape);
}

namespace detail {

/// Transform of the lens D intersect (D + h) for the disk D of radius r
/// centered at c, by composite Gauss quadrature across the lens.
inline FourierValue lens_transform(double r, std::span<const double> c, std::span<const double> h,
                                   std::span<const double> xi) {
  const double dist = std::hypot(h[0], h[1]);
  if (dist >= 2.0 * r) return {};
  const double ex = dist > 0.0 ? h[0] / dist : 1.0;
  const double ey = dist > 0.0 ? h[1] / dist : 0.0;
  const double p = xi[0] * ex + xi[1] * ey;    // frequency along h
  const double q = -xi[0] * ey + xi[1] * ex;   // frequency across h
  const double half_width = std::sqrt(r * r - 0.25 * dist * dist);
  auto integrand = [&](double theta) {
    const double v = half_width * std::sin(theta);
    const double root = std::sqrt(std::max(0.0, r * r - v * v));
    const Complex inner = interval_transform(dist - root, root, p);
    return inner * cis_neg(q * v) * (half_width * std::cos(theta));
  };
  const double oscill = (std::abs(p) + std::abs(q)) * 2.0 * r;
  const int panels = static_cast<int>(std::ceil(std::max(8.0, 2.0 * oscill)));
  const Complex coarse = integrate_panels(integrand, -0.5 * kPi, 0.5 * kPi, panels, 32);
  const Complex fine = integrate_panels(integrand, -0.5 * kPi, 0.5 * kPi, 2 * panels, 32);
  const double cx = c.size() == 2 ? c[0] : 0.0, cy = c.size() == 2 ? c[1] : 0.0;
  const Complex shift = cis_neg(cx * xi[0] + cy * xi[1]);
  return make_value(fine * shift, std::abs(fine - coarse));
}

}  // namespace detail

/// Transform of D intersect (D + h).
inline FourierValue chi_hat_intersection(const DomainSpec& d, std::span<const double> h, std::span<const double> xi) {
  require_lebesgue(d);
  if (static_cast<int>(h.size()) != dimension(d) || h.size() != xi.size())
    throw Error("chi_hat_intersection: dimension mismatch");
  struct V {
    std::span<const double> h, xi;
    FourierValue operator()(const Box& b) const {
      Vec lo(h.size()), hi(h.size());
      for (std::size_t j = 0; j < h.size(); ++j) {
        lo[j] = std::max(0.0, h[j]);
        hi[j] = std::min(b.sides[j], b.sides[j] + h[j]);
      }
      return chi_hat_interval_box(lo, hi, xi);
    }
    FourierValue operator()(const Disk& c) const { return detail::lens_transform(c.radius, c.center, h, xi); }
    FourierValue operator()(const GraphDomain& g) const {
      if (!is_piecewise_linear(g.profile))
        throw Error("chi_hat_intersection: graph domains need a polygonal profile");
      const Polyline pl = profile_polyline(g.profile);
      const std::array<ShiftedProfile, 2> copies{ShiftedProfile{0.0, 0.0}, ShiftedProfile{h[0], h[1]}};
      Complex acc(0.0, 0.0);
      for_each_intersection_trapezoid(pl, copies, [&](double u, double v, const LinearPiece& lo, const LinearPiece& hi) {
        acc += detail::trapezoid_transform(u, v, lo, hi, xi[0], xi[1]);
      });
      return make_value(acc);
    }
    FourierValue operator()(const ScaledDomain& s) const {
      Vec hs(h.begin(), h.end()), xs(xi.begin(), xi.end());
      for (double& v : hs) v /= s.t;
      for (double& v : xs) v *= s.t;
      const FourierValue base = chi_hat_intersection(*s.base, hs, xs);
      const double scale = std::pow(s.t, static_cast<double>(xi.size()));
      return {scale * base.re, scale * base.im, scale * base.abs_error_bound};
    }
    FourierValue operator()(const CantorMeasure4&) const { return {}; }
  };
  return std::visit(V{h, xi}, d.shape);
}

}  // namespace gapbound
