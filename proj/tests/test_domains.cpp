#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gapbound/domains.hpp"

using namespace gapbound;

namespace {

double seg_dist(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - ax - t * dx, py - ay - t * dy);
}

struct Seg {
  double ax, ay, bx, by;
};

/// Boundary of {s(x) <= y <= 1 + s(x)} as segments, from the vertex list.
std::vector<Seg> graph_boundary(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<Seg> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    out.push_back({xs[i], ys[i], xs[i + 1], ys[i + 1]});
    out.push_back({xs[i], ys[i] + 1.0, xs[i + 1], ys[i + 1] + 1.0});
  }
  out.push_back({xs.front(), ys.front(), xs.front(), ys.front() + 1.0});
  out.push_back({xs.back(), ys.back(), xs.back(), ys.back() + 1.0});
  return out;
}

/// Midpoint grid count of {dist(x, boundary) < eps}.
double grid_tube(const std::vector<Seg>& segs, double x0, double x1, double y0, double y1, double eps, double h) {
  const auto nx = static_cast<int>(std::ceil((x1 - x0) / h));
  const auto ny = static_cast<int>(std::ceil((y1 - y0) / h));
  double count = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double px = x0 + (i + 0.5) * h, py = y0 + (j + 0.5) * h;
      double d = 1e300;
      for (const auto& s : segs) d = std::min(d, seg_dist(px, py, s.ax, s.ay, s.bx, s.by));
      if (d < eps) count += 1.0;
    }
  return count * h * h;
}

/// Midpoint grid estimate of |{x : all indicators true}|.
template <class F>
double grid_area(F&& inside, double x0, double x1, double y0, double y1, int n) {
  const double hx = (x1 - x0) / n, hy = (y1 - y0) / n;
  double count = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p[2] = {x0 + (i + 0.5) * hx, y0 + (j + 0.5) * hy};
      if (inside(p)) count += 1.0;
    }
  return count * hx * hy;
}

}  // namespace

TEST(Volume, ClosedForms) {
  EXPECT_DOUBLE_EQ(volume(make_box({1.0, 1.0})), 1.0);
  EXPECT_DOUBLE_EQ(volume(make_disk(0.7)), kPi * 0.49);
  EXPECT_DOUBLE_EQ(volume(make_sawtooth(5)), 1.0);
  const DomainSpec w = make_graph(Weierstrass{});
  EXPECT_DOUBLE_EQ(volume(make_scaled(w, 3.0)), 9.0);
  EXPECT_DOUBLE_EQ(volume(make_scaled(make_box({1.0, 2.0, 3.0}), 2.0)), 48.0);
}

TEST(Volume, CantorMeasureHasNoVolume) {
  try {
    volume(make_cantor());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "measure has zero Lebesgue volume; use total mass");
  }
  EXPECT_DOUBLE_EQ(mass(make_cantor()), 1.0);
}

TEST(Box, SidesSortedDescending) {
  const DomainSpec d = make_box({0.5, 3.0, 1.0});
  EXPECT_EQ(std::get<Box>(d.shape).sides, (Vec{3.0, 1.0, 0.5}));
  EXPECT_THROW(make_box({1.0, 0.0}), Error);
  EXPECT_THROW(make_disk(-1.0), Error);
}

TEST(Indicator, Membership) {
  const double a[2] = {0.5, 0.5};
  EXPECT_TRUE(indicator(make_box({1.0, 1.0}), a));
  const double b[2] = {2.0, 0.0};
  EXPECT_FALSE(indicator(make_disk(1.0), b));
  const double edge[2] = {1.0, 0.0};
  EXPECT_TRUE(indicator(make_disk(1.0), edge));
  const double corner[2] = {1.0, 1.0};
  EXPECT_TRUE(indicator(make_box({1.0, 1.0}), corner));

  const DomainSpec saw = make_sawtooth(2, ToothShape::Triangle);
  const double s = profile_value(std::get<GraphDomain>(saw.shape).profile, 0.25);
  EXPECT_DOUBLE_EQ(s, 0.5);
  const double mid[2] = {0.25, s + 0.5};
  EXPECT_TRUE(indicator(saw, mid));
  const double below[2] = {0.25, s - 0.01};
  EXPECT_FALSE(indicator(saw, below));
  const double top[2] = {0.25, s + 1.0};
  EXPECT_TRUE(indicator(saw, top));
}

TEST(Indicator, CantorDigits) {
  const double zero[1] = {0.0};
  const double half[1] = {0.5};
  const double quarter[1] = {0.25};
  const double two_thirds[1] = {2.0 / 3.0};
  EXPECT_TRUE(indicator(make_cantor(), zero));
  EXPECT_TRUE(indicator(make_cantor(), half));
  EXPECT_FALSE(indicator(make_cantor(), quarter));
  EXPECT_TRUE(indicator(make_cantor(), two_thirds));
}

TEST(Tube, UnitSquareExact) {
  // outer 4 eps + pi eps^2 (rounded corners), inner 4 eps - 4 eps^2
  const double eps = 0.01;
  EXPECT_NEAR(boundary_neighborhood_volume(make_box({1.0, 1.0}), eps).value, 0.08 - (4.0 - kPi) * eps * eps, 1e-15);
  for (double e : {1e-2, 1e-4, 1e-6})
    EXPECT_NEAR(boundary_neighborhood_volume(make_box({1.0, 1.0}), e).value / e, 8.0, e);
}

TEST(Tube, SquareAgainstGridCount) {
  const std::vector<Seg> segs{{0, 0, 1, 0}, {1, 0, 1, 1}, {1, 1, 0, 1}, {0, 1, 0, 0}};
  const double eps = 0.05;
  const double grid = grid_tube(segs, -0.1, 1.1, -0.1, 1.1, eps, 0.002);
  EXPECT_NEAR(boundary_neighborhood_volume(make_box({1.0, 1.0}), eps).value, grid, 2e-3 * grid);
}

TEST(Tube, DiskAnnulus) {
  for (double r : {0.5, 1.0, 3.0})
    for (double eps : {0.01, 0.1})
      EXPECT_NEAR(boundary_neighborhood_volume(make_disk(r), eps).value, 4.0 * kPi * r * eps, 1e-12);
  EXPECT_TRUE(boundary_neighborhood_volume(make_disk(1.0), 1.5).saturated);
  EXPECT_TRUE(boundary_neighborhood_volume(make_box({1.0, 1.0}), 0.6).saturated);
}

TEST(Tube, BoxThreeDimensionalSteiner) {
  // outer: |D| + 2(ab+bc+ca) e + pi(a+b+c) e^2 + 4/3 pi e^3, inner: |D| - prod(a - 2e)
  const double a = 3.0, b = 2.0, c = 1.0, e = 0.05;
  const double outer = 2 * (a * b + b * c + c * a) * e + kPi * (a + b + c) * e * e + 4.0 / 3.0 * kPi * e * e * e;
  const double inner = a * b * c - (a - 2 * e) * (b - 2 * e) * (c - 2 * e);
  EXPECT_NEAR(boundary_neighborhood_volume(make_box({a, b, c}), e).value, outer + inner, 1e-13);
}

TEST(Tube, SawtoothAgainstGridCount) {
  const DomainSpec d = make_sawtooth(2, ToothShape::Triangle);
  const Polyline pl = profile_polyline(std::get<GraphDomain>(d.shape).profile);
  const auto segs = graph_boundary(pl.x, pl.y);
  for (double eps : {0.05, 0.02}) {
    const double grid = grid_tube(segs, -eps, 1.0 + eps, -eps, 1.5 + eps, eps, eps / 24.0);
    const double v = boundary_neighborhood_volume(d, eps).value;
    EXPECT_NEAR(v, grid, 0.01 * grid) << "eps=" << eps;
  }
}

TEST(Tube, RampSawtoothAgainstGridCount) {
  const DomainSpec d = make_sawtooth(3, ToothShape::Ramp);
  const Polyline pl = profile_polyline(std::get<GraphDomain>(d.shape).profile);
  const auto segs = graph_boundary(pl.x, pl.y);
  const double eps = 0.03;
  const double grid = grid_tube(segs, -eps, 1.0 + eps, -eps, 1.5 + eps, eps, eps / 24.0);
  EXPECT_NEAR(boundary_neighborhood_volume(d, eps).value, grid, 0.01 * grid);
}

TEST(Tube, MonotoneInEps) {
  const std::vector<DomainSpec> ds{make_box({2.0, 0.5}), make_disk(1.0), make_sawtooth(3), make_graph(Weierstrass{}),
                                   make_scaled(make_sawtooth(2), 2.0)};
  for (const auto& d : ds) {
    double prev = 0.0;
    for (double eps = 1e-4; eps < 0.3; eps *= 1.7) {
      const double v = boundary_neighborhood_volume(d, eps).value;
      EXPECT_GE(v, prev * (1.0 - 1e-12)) << kind_name(d) << " eps=" << eps;
      prev = v;
    }
  }
}

TEST(Tube, ScaledDomainIdentity) {
  const DomainSpec base = make_sawtooth(3);
  const double t = 2.5;
  EXPECT_NEAR(boundary_neighborhood_volume(make_scaled(base, t), 0.1).value,
              t * t * boundary_neighborhood_volume(base, 0.1 / t).value, 1e-12);
}

TEST(SymmetricDifference, BoxClosedForm) {
  const double h[2] = {0.1, 0.0};
  const auto sd = symmetric_difference_volume(make_box({1.0, 1.0}), h);
  EXPECT_NEAR(sd.one_sided, 0.1, 1e-15);
  EXPECT_NEAR(sd.two_sided, 0.2, 1e-15);
  // centered: D cap ((D - h) delta (D + h)) for the unit square is 2 * 0.1
  EXPECT_NEAR(sd.centered, 0.2, 1e-15);
}

TEST(SymmetricDifference, ZeroShift) {
  const double z[2] = {0.0, 0.0};
  for (const auto& d : {make_box({1.0, 2.0}), make_disk(1.0), make_sawtooth(4), make_scaled(make_disk(1.0), 2.0)}) {
    const auto sd = symmetric_difference_volume(d, z);
    EXPECT_NEAR(sd.one_sided, 0.0, 1e-14);
    EXPECT_NEAR(sd.two_sided, 0.0, 1e-14);
    EXPECT_NEAR(sd.centered, 0.0, 1e-14);
  }
}

TEST(SymmetricDifference, GridOracle) {
  const double h[2] = {0.13, -0.07};
  const double mh[2] = {-0.13, 0.07};
  for (const auto& d : {make_disk(0.8), make_sawtooth(3), make_sawtooth(2, ToothShape::Ramp)}) {
    auto in = [&](const double* p) { return indicator(d, std::span<const double>(p, 2)); };
    auto shifted = [&](const double* p, const double* s) {
      const double q[2] = {p[0] - s[0], p[1] - s[1]};
      return in(q);
    };
    const int n = 1500;
    const double one = grid_area([&](const double* p) { return in(p) && !shifted(p, h); }, -1.0, 1.5, -1.0, 1.6, n);
    const double cen = grid_area(
        [&](const double* p) { return in(p) && (shifted(p, h) != shifted(p, mh)); }, -1.0, 1.5, -1.0, 1.6, n);
    const auto sd = symmetric_difference_volume(d, h);
    EXPECT_NEAR(sd.one_sided, one, 3e-3) << kind_name(d);
    EXPECT_NEAR(sd.centered, cen, 4e-3) << kind_name(d);
  }
}

TEST(SymmetricDifference, ReflectionAndTriangleInequality) {
  const double h[2] = {0.2, 0.15};
  const double mh[2] = {-0.2, -0.15};
  for (const auto& d : {make_box({1.0, 2.0}), make_disk(1.0), make_sawtooth(3)}) {
    const auto p = symmetric_difference_volume(d, h);
    const auto m = symmetric_difference_volume(d, mh);
    // |D \ (D + h)| = |D| - |D cap (D + h)| = |D \ (D - h)|
    EXPECT_NEAR(p.one_sided, m.one_sided, 1e-12);
    EXPECT_LE(p.two_sided, 2.0 * p.one_sided + 2.0 * m.one_sided + 1e-12);
  }
}

TEST(SymmetricDifference, LinearBoundOnBoxAndDisk) {
  for (const auto& d : {make_box({1.0, 1.0}), make_box({2.0, 0.5}), make_disk(1.0)}) {
    const BoundaryDimension est = minkowski_estimate(d, default_eps_grid());
    for (double a = 0.0; a < kTwoPi; a += 0.4)
      for (double len : {0.01, 0.05, 0.099}) {
        const double h[2] = {len * std::cos(a), len * std::sin(a)};
        EXPECT_LE(symmetric_difference_volume(d, h).one_sided, est.content * len) << kind_name(d);
      }
  }
}

TEST(Diameter, Examples) {
  EXPECT_DOUBLE_EQ(diameter(make_box({3.0, 4.0})), 5.0);
  EXPECT_DOUBLE_EQ(diameter(make_disk(1.5)), 3.0);
  for (int k : {1, 2, 6, 8}) EXPECT_NEAR(diameter(make_sawtooth(k)), std::sqrt(1.0 + 2.25), 1e-14);
  // triangular teeth: farthest pair is (0, 0) and the last peak on the upper edge
  EXPECT_NEAR(diameter(make_sawtooth(1, ToothShape::Triangle)), std::sqrt(0.25 + 2.25), 1e-14);
  EXPECT_NEAR(diameter(make_scaled(make_box({3.0, 4.0}), 2.0)), 10.0, 1e-14);
}

TEST(SurfaceMeasure, BoxAndSawtooth) {
  EXPECT_DOUBLE_EQ(surface_measure(make_box({1.0, 1.0})), 4.0);
  EXPECT_DOUBLE_EQ(surface_measure(make_box({1.0, 2.0, 3.0})), 22.0);
  // triangle wave: 2k segments of length sqrt((1/2k)^2 + 1/4), twice, plus two unit sides
  for (int k : {1, 3, 8}) {
    const double seg = std::sqrt(1.0 / (4.0 * k * k) + 0.25);
    EXPECT_NEAR(surface_measure(make_sawtooth(k, ToothShape::Triangle)), 2.0 * 2 * k * seg + 2.0, 1e-12);
  }
  // ramp: k slanted edges and k - 1 drops of height 1/2 per edge, plus two unit sides
  for (int k : {1, 3, 8}) {
    const double seg = std::sqrt(1.0 / (k * k) + 0.25);
    EXPECT_NEAR(surface_measure(make_sawtooth(k)), 2.0 * (k * seg + 0.5 * (k - 1)) + 2.0, 1e-12);
  }
  EXPECT_THROW(surface_measure(make_graph(Weierstrass{})), Error);
}

TEST(Minkowski, SquareAndDisk) {
  const auto sq = minkowski_estimate(make_box({1.0, 1.0}), default_eps_grid());
  EXPECT_NEAR(sq.alpha, 1.0, 0.05);
  EXPECT_NEAR(sq.content, 8.0, 0.1);
  const auto disk = minkowski_estimate(make_disk(1.0), default_eps_grid());
  EXPECT_NEAR(disk.alpha, 1.0, 1e-9);
  EXPECT_NEAR(disk.content, 4.0 * kPi, 1e-8);
}

TEST(Minkowski, GridValidation) {
  EXPECT_THROW(minkowski_estimate(make_disk(1.0), Vec{0.1, 0.05, 0.01}), Error);
  EXPECT_THROW(minkowski_estimate(make_disk(1.0), Vec{0.1, 0.05, 0.02, 0.01}), Error);
  EXPECT_THROW(minkowski_estimate(make_disk(1.0), Vec{0.1, 0.2, 0.01, 0.001}), Error);
  EXPECT_THROW(minkowski_estimate(make_cantor(), default_eps_grid()), Error);
}

namespace {

double weierstrass(double x, double gamma, int base, int depth, double amp) {
  double s = 0.0, f = 1.0;
  for (int j = 0; j < depth; ++j, f *= base) s += std::pow(base, -gamma * j) * std::cos(2.0 * kPi * f * x);
  return amp * s;
}

/// Box-counting dimension of the graph over [0, 1]: columns of width delta,
/// boxes counted from the sampled oscillation in each column.
double box_counting_dimension(double gamma, int base, int depth, double amp) {
  std::vector<double> lx, ly;
  for (int m = 4; m <= 11; ++m) {
    const double delta = std::ldexp(1.0, -m);
    const int cols = 1 << m;
    const int per = 64;
    double boxes = 0.0;
    for (int c = 0; c < cols; ++c) {
      double lo = 1e300, hi = -1e300;
      for (int i = 0; i <= per; ++i) {
        const double v = weierstrass((c + static_cast<double>(i) / per) * delta, gamma, base, depth, amp);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      boxes += std::floor(hi / delta) - std::floor(lo / delta) + 1.0;
    }
    lx.push_back(std::log(1.0 / delta));
    ly.push_back(std::log(boxes));
  }
  return fit_line(lx, ly).slope;
}

}  // namespace

TEST(Minkowski, WeierstrassAgainstBoxCounting) {
  Weierstrass w;
  w.gamma = 0.5;
  w.base = 3;
  w.depth = 10;
  w.amplitude = 0.5;
  w.samples_per_wavelength = 8;
  const auto est = minkowski_estimate(make_graph(w), default_eps_grid());
  const double boxdim = box_counting_dimension(w.gamma, w.base, w.depth, w.amplitude);
  EXPECT_NEAR(boxdim, 2.0 - w.gamma, 0.1);
  EXPECT_NEAR(est.alpha, 2.0 - w.gamma, 0.1);
  EXPECT_NEAR(est.alpha, boxdim, 0.1);
}

TEST(Minkowski, ScaledContent) {
  const DomainSpec base = make_disk(1.0);
  const auto b = minkowski_estimate(base, default_eps_grid());
  const auto s = minkowski_estimate(make_scaled(base, 3.0), default_eps_grid());
  EXPECT_NEAR(s.content / b.content, 3.0, 1e-8);
}

TEST(Minkowski, ContentAtFixedDimensionMatchesIntercept) {
  const DomainSpec d = make_sawtooth(2);
  const auto fit = minkowski_estimate(d, default_eps_grid());
  const auto at = minkowski_content_at(d, fit.alpha, default_eps_grid());
  EXPECT_NEAR(at.content, fit.content, 1e-9 * fit.content);
}

TEST(AnalyticDimension, Values) {
  const auto b = analytic_boundary_dimension(make_box({1.0, 1.0, 1.0}));
  EXPECT_DOUBLE_EQ(b.alpha, 2.0);
  EXPECT_DOUBLE_EQ(b.content, 12.0);
  const auto w = analytic_boundary_dimension(make_graph(Weierstrass{}));
  EXPECT_DOUBLE_EQ(w.alpha, 1.5);
  const auto s = analytic_boundary_dimension(make_scaled(make_disk(1.0), 2.0));
  EXPECT_NEAR(s.content, 8.0 * kPi, 1e-12);
}
