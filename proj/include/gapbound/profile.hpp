#pragma once

// Periodic boundary profiles for graph-bounded planar domains
// {(x, y) : s(x) <= y <= 1 + s(x), 0 <= x <= 1}, and the column-wise
// integration machinery that the domain functionals are built on.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "gapbound/numerics.hpp"

namespace gapbound {

enum class ToothShape {
  Triangle,  ///< symmetric triangular wave, rises and falls within each tooth
  Ramp,      ///< rising ramp with a vertical drop between teeth
};

/// k teeth of height `amplitude` on [0, 1].
struct Sawtooth {
  int tooth_count = 1;
  double amplitude = 0.5;
  ToothShape shape = ToothShape::Ramp;
};

/// amplitude * sum_{j < depth} base^{-gamma j} cos(2 pi base^j x).
/// The graph of the full series has box dimension 2 - gamma.
struct Weierstrass {
  double gamma = 0.5;
  int base = 2;
  int depth = 10;
  double amplitude = 0.25;
  int samples_per_wavelength = 16;
};

using Profile = std::variant<Sawtooth, Weierstrass>;

inline void validate(const Profile& p) {
  std::visit(
      [](const auto& q) {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, Sawtooth>) {
          if (q.tooth_count < 1) throw Error("sawtooth: tooth_count must be >= 1");
          if (!(q.amplitude >= 0.0)) throw Error("sawtooth: amplitude must be >= 0");
        } else {
          if (!(q.gamma > 0.0 && q.gamma < 1.0)) throw Error("weierstrass: gamma must lie in (0, 1)");
          if (q.base < 2) throw Error("weierstrass: base must be an integer >= 2");
          if (q.depth < 1) throw Error("weierstrass: depth must be >= 1");
          if (q.samples_per_wavelength < 4) throw Error("weierstrass: samples_per_wavelength must be >= 4");
        }
      },
      p);
}

inline bool is_piecewise_linear(const Profile& p) { return std::holds_alternative<Sawtooth>(p); }

/// Exact profile value at x in [0, 1].
inline double profile_value(const Profile& p, double x) {
  if (const auto* saw = std::get_if<Sawtooth>(&p)) {
    const double u = saw->tooth_count * x - std::floor(saw->tooth_count * x);
    if (saw->shape == ToothShape::Triangle) return saw->amplitude * (1.0 - std::abs(2.0 * u - 1.0));
    // the closing point x = 1 belongs to the last tooth
    if (x >= 1.0) return saw->amplitude;
    return saw->amplitude * u;
  }
  const auto& w = std::get<Weierstrass>(p);
  double s = 0.0, freq = 1.0;
  for (int j = 0; j < w.depth; ++j) {
    s += std::pow(static_cast<double>(w.base), -w.gamma * j) * std::cos(kTwoPi * std::fmod(freq * x, 1.0));
    freq *= w.base;
  }
  return w.amplitude * s;
}

/// x-monotone polyline with nondecreasing abscissae; repeated abscissae
/// encode vertical jumps.
struct Polyline {
  std::vector<double> x;
  std::vector<double> y;

  [[nodiscard]] std::size_t size() const { return x.size(); }
};

/// Polyline of the profile on [0, 1]; exact for sawtooth profiles, a
/// uniform sampling at `samples_per_wavelength` points per shortest
/// wavelength for Weierstrass profiles.
inline Polyline profile_polyline(const Profile& p) {
  Polyline pl;
  if (const auto* saw = std::get_if<Sawtooth>(&p)) {
    const int k = saw->tooth_count;
    if (saw->shape == ToothShape::Triangle) {
      for (int m = 0; m <= 2 * k; ++m) {
        pl.x.push_back(static_cast<double>(m) / (2.0 * k));
        pl.y.push_back(m % 2 == 0 ? 0.0 : saw->amplitude);
      }
    } else {
      pl.x.push_back(0.0);
      pl.y.push_back(0.0);
      for (int m = 1; m <= k; ++m) {
        const double xm = static_cast<double>(m) / k;
        pl.x.push_back(xm);
        pl.y.push_back(saw->amplitude);
        if (m < k) {
          pl.x.push_back(xm);
          pl.y.push_back(0.0);
        }
      }
    }
    return pl;
  }
  const auto& w = std::get<Weierstrass>(p);
  const double top = std::pow(static_cast<double>(w.base), w.depth - 1);
  const double count = std::min(top * w.samples_per_wavelength, static_cast<double>(1 << 22));
  const auto n = static_cast<std::size_t>(count);
  pl.x.resize(n + 1);
  pl.y.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double xi = static_cast<double>(i) / static_cast<double>(n);
    pl.x[i] = xi;
    pl.y[i] = profile_value(p, xi);
  }
  return pl;
}

/// Linear piece y = y0 + slope * (x - x0).
struct LinearPiece {
  double x0 = 0.0;
  double y0 = 0.0;
  double slope = 0.0;
  [[nodiscard]] double at(double x) const { return y0 + slope * (x - x0); }
};

/// The non-vertical segment of `pl` whose open x-interval contains `x`.
inline LinearPiece piece_containing(const Polyline& pl, double x) {
  auto it = std::upper_bound(pl.x.begin(), pl.x.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - pl.x.begin());
  hi = std::clamp<std::size_t>(hi, 1, pl.size() - 1);
  const std::size_t lo = hi - 1;
  const double dx = pl.x[hi] - pl.x[lo];
  if (dx <= 0.0) return {pl.x[hi], pl.y[hi], 0.0};
  return {pl.x[lo], pl.y[lo], (pl.y[hi] - pl.y[lo]) / dx};
}

/// A translated copy of the profile: o(x) = s(x - shift_x) + shift_y, defined
/// for x - shift_x in [0, 1].
struct ShiftedProfile {
  double shift_x = 0.0;
  double shift_y = 0.0;
};

/// Decomposes the intersection of vertically unit-thick graph domains
/// sharing the polyline profile `pl` into trapezoids
/// {u <= x <= v, lower(x) <= y <= upper(x)}, where lower = max_i o_i and
/// upper = min_i o_i + 1 are linear on each piece and upper >= lower.
template <class F>
void for_each_intersection_trapezoid(const Polyline& pl, std::span<const ShiftedProfile> copies, F&& fn) {
  double xlo = -std::numeric_limits<double>::infinity();
  double xhi = std::numeric_limits<double>::infinity();
  for (const auto& c : copies) {
    xlo = std::max(xlo, pl.x.front() + c.shift_x);
    xhi = std::min(xhi, pl.x.back() + c.shift_x);
  }
  if (!(xhi > xlo)) return;

  std::vector<double> breaks{xlo, xhi};
  for (const auto& c : copies)
    for (double v : pl.x) {
      const double b = v + c.shift_x;
      if (b > xlo && b < xhi) breaks.push_back(b);
    }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<LinearPiece> pieces(copies.size());
  std::vector<double> cuts;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double a = breaks[b], e = breaks[b + 1];
    if (e <= a) continue;
    const double mid = 0.5 * (a + e);
    for (std::size_t i = 0; i < copies.size(); ++i) {
      const LinearPiece p = piece_containing(pl, mid - copies[i].shift_x);
      pieces[i] = {mid, p.at(mid - copies[i].shift_x) + copies[i].shift_y, p.slope};
    }
    // split where the ordering of the copies changes
    cuts.assign({a, e});
    for (std::size_t i = 0; i < pieces.size(); ++i)
      for (std::size_t j = i + 1; j < pieces.size(); ++j) {
        const double ds = pieces[i].slope - pieces[j].slope;
        if (ds == 0.0) continue;
        const double xc = mid - (pieces[i].y0 - pieces[j].y0) / ds;
        if (xc > a && xc < e) cuts.push_back(xc);
      }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      double u = cuts[c], v = cuts[c + 1];
      if (v <= u) continue;
      const double um = 0.5 * (u + v);
      std::size_t imax = 0, imin = 0;
      for (std::size_t i = 1; i < pieces.size(); ++i) {
        if (pieces[i].at(um) > pieces[imax].at(um)) imax = i;
        if (pieces[i].at(um) < pieces[imin].at(um)) imin = i;
      }
      const LinearPiece lower = pieces[imax];
      const LinearPiece upper{pieces[imin].x0, pieces[imin].y0 + 1.0, pieces[imin].slope};
      // clip to where the column is nonempty
      const double gu = upper.at(u) - lower.at(u);
      const double gv = upper.at(v) - lower.at(v);
      if (gu <= 0.0 && gv <= 0.0) continue;
      if (gu < 0.0 || gv < 0.0) {
        const double xc = u + (v - u) * gu / (gu - gv);
        (gu < 0.0 ? u : v) = xc;
      }
      if (v > u) fn(u, v, lower, upper);
    }
  }
}

/// Exact area of the intersection of the graph-domain copies.
inline double graph_intersection_area(const Polyline& pl, std::span<const ShiftedProfile> copies) {
  NeumaierSum total;
  for_each_intersection_trapezoid(pl, copies, [&](double u, double v, const LinearPiece& lo, const LinearPiece& hi) {
    total.add(0.5 * ((hi.at(u) - lo.at(u)) + (hi.at(v) - lo.at(v))) * (v - u));
  });
  return total.value();
}

/// y-range on the vertical line x = c of the set of points within `eps` of
/// the segment P-Q, or nothing if the line misses it.
inline std::optional<std::pair<double, double>> capsule_section(double px, double py, double qx, double qy,
                                                                double eps, double c) {
  if (qx < px) {
    std::swap(px, qx);
    std::swap(py, qy);
  }
  const double lo = std::max(px, c - eps);
  const double hi = std::min(qx, c + eps);
  if (lo > hi) return std::nullopt;
  if (qx == px) {
    const double w = std::sqrt(std::max(0.0, eps * eps - (c - px) * (c - px)));
    return std::make_pair(std::min(py, qy) - w, std::max(py, qy) + w);
  }
  const double m = (qy - py) / (qx - px);
  const double shift = m * eps / std::sqrt(1.0 + m * m);
  auto y_at = [&](double xp) { return py + m * (xp - px); };
  auto w_at = [&](double xp) { return std::sqrt(std::max(0.0, eps * eps - (c - xp) * (c - xp))); };
  const double xu = std::clamp(c + shift, lo, hi);
  const double xl = std::clamp(c - shift, lo, hi);
  return std::make_pair(y_at(xl) - w_at(xl), y_at(xu) + w_at(xu));
}

/// Measure of a union of intervals.
inline double union_length(std::vector<std::pair<double, double>>& iv) {
  std::sort(iv.begin(), iv.end());
  double total = 0.0;
  double cur_lo = 0.0, cur_hi = 0.0;
  bool open = false;
  for (const auto& [a, b] : iv) {
    if (b <= a) continue;
    if (!open) {
      cur_lo = a;
      cur_hi = b;
      open = true;
    } else if (a <= cur_hi) {
      cur_hi = std::max(cur_hi, b);
    } else {
      total += cur_hi - cur_lo;
      cur_lo = a;
      cur_hi = b;
    }
  }
  if (open) total += cur_hi - cur_lo;
  return total;
}

struct ColumnTube {
  double area = 0.0;
  bool saturated = false;  ///< every column fiber of the domain lies inside the tube
};

/// Midpoint-rule area of the eps-tube around the boundary of the graph domain
/// with polyline profile `pl`, using `columns` vertical columns. Within each
/// column the tube section is computed exactly.
inline ColumnTube graph_tube_columns(const Polyline& pl, double eps, std::size_t columns) {
  const double x0 = pl.x.front() - eps;
  const double x1 = pl.x.back() + eps;
  const double dx = (x1 - x0) / static_cast<double>(columns);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lo(columns, inf), hi(columns, -inf);

  auto column_range = [&](double a, double b) {
    const double fa = std::ceil((a - x0) / dx - 0.5);
    const double fb = std::floor((b - x0) / dx - 0.5);
    const auto ia = static_cast<std::ptrdiff_t>(std::max(0.0, fa));
    const auto ib = static_cast<std::ptrdiff_t>(std::min(static_cast<double>(columns) - 1.0, fb));
    return std::make_pair(ia, ib);
  };

  for (std::size_t s = 0; s + 1 < pl.size(); ++s) {
    const double ax = pl.x[s], ay = pl.y[s], bx = pl.x[s + 1], by = pl.y[s + 1];
    const auto [ia, ib] = column_range(std::min(ax, bx) - eps, std::max(ax, bx) + eps);
    for (std::ptrdiff_t i = ia; i <= ib; ++i) {
      const double c = x0 + (static_cast<double>(i) + 0.5) * dx;
      if (auto sec = capsule_section(ax, ay, bx, by, eps, c)) {
        auto& l = lo[static_cast<std::size_t>(i)];
        auto& h = hi[static_cast<std::size_t>(i)];
        l = std::min(l, sec->first);
        h = std::max(h, sec->second);
      }
    }
  }

  const double left_y = pl.y.front(), right_y = pl.y.back();
  const double left_x = pl.x.front(), right_x = pl.x.back();
  NeumaierSum total;
  bool saturated = true;
  std::vector<std::pair<double, double>> iv;
  for (std::size_t i = 0; i < columns; ++i) {
    const double c = x0 + (static_cast<double>(i) + 0.5) * dx;
    iv.clear();
    if (lo[i] <= hi[i]) {
      iv.emplace_back(lo[i], hi[i]);
      iv.emplace_back(lo[i] + 1.0, hi[i] + 1.0);
    }
    if (auto sec = capsule_section(left_x, left_y, left_x, left_y + 1.0, eps, c)) iv.push_back(*sec);
    if (auto sec = capsule_section(right_x, right_y, right_x, right_y + 1.0, eps, c)) iv.push_back(*sec);
    const double len = union_length(iv);
    total.add(len * dx);
    if (c > left_x && c < right_x && saturated) {
      // fiber [s(c), s(c) + 1] covered iff the merged tube contains it
      const LinearPiece p = piece_containing(pl, c);
      const double fb = p.at(c), ft = fb + 1.0;
      bool covered = false;
      std::sort(iv.begin(), iv.end());
      double reach = -inf;
      for (const auto& [a, b] : iv) {
        if (a > std::max(reach, fb)) break;
        reach = std::max(reach, b);
      }
      covered = reach >= ft;
      saturated = covered;
    }
  }
  return {total.value(), saturated};
}

/// Tube area with column width <= eps / 8 and one Richardson step.
inline ColumnTube graph_tube_area(const Polyline& pl, double eps) {
  const double span = pl.x.back() - pl.x.front() + 2.0 * eps;
  const auto columns = static_cast<std::size_t>(std::ceil(span / (eps / 8.0)));
  const ColumnTube coarse = graph_tube_columns(pl, eps, columns);
  const ColumnTube fine = graph_tube_columns(pl, eps, 2 * columns);
  return {(4.0 * fine.area - coarse.area) / 3.0, fine.saturated};
}

/// Andrew's monotone chain; returns hull vertices in counter-clockwise order.
inline std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline double polyline_length(const Polyline& pl) {
  NeumaierSum s;
  for (std::size_t i = 0; i + 1 < pl.size(); ++i) s.add(std::hypot(pl.x[i + 1] - pl.x[i], pl.y[i + 1] - pl.y[i]));
  return s.value();
}

}  // namespace gapbound
