#pragma once

// Numerical companions to the gap-radius argument: dyadic shell sums of
// |chi_D^|^2 over a spectrum, the shift partition of each shell, the
// translation identities for F_D, symmetric-difference estimates, tail
// bounds, and the resulting gap radius.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gapbound/domains.hpp"
#include "gapbound/fourier.hpp"
#include "gapbound/numerics.hpp"
#include "gapbound/spectra.hpp"

namespace gapbound {

inline double sup_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

// ---------------------------------------------------------------------------
// Shell partition

struct ShellCell {
  std::size_t axis = 0;
  int sign = 1;
  int third = 0;  ///< which third of the dominant-coordinate range
  Vec lo, hi;     ///< closed box
  Vec shift;      ///< h = tau * sign-free unit vector along `axis`
};

/// Cover of the shell Q_{2^{k+1}} \ Q_{2^k} by 6n boxes, each with a shift h,
/// 2^{-k} <= |h| <= 2^{1-k}, such that |e^{2 pi i lambda.h} - 1| >= 1 for
/// every lambda in the box.
struct ShellPartition {
  int k = 0;
  std::size_t n = 0;
  std::vector<ShellCell> cells;

  /// First cell containing lambda, if any.
  [[nodiscard]] const ShellCell* cell_for(std::span<const double> lambda) const {
    for (const auto& c : cells) {
      bool in = true;
      for (std::size_t j = 0; j < n && in; ++j) in = lambda[j] >= c.lo[j] && lambda[j] <= c.hi[j];
      if (in) return &c;
    }
    return nullptr;
  }
};

/// |e^{2 pi i theta} - 1| >= 1 iff theta mod 1 lies in [1/6, 5/6]. For the
/// dominant-coordinate range [2^k a, 2^k b] pick tau = u 2^{-k}, u in [1, 2],
/// with [u a, u b] inside [p + 1/6, p + 5/6] for some integer p.
inline double partition_scale(double a, double b) {
  for (int p = 0; p < 8; ++p) {
    const double lo = std::max(1.0, (p + 1.0 / 6.0) / a);
    const double hi = std::min(2.0, (p + 5.0 / 6.0) / b);
    if (lo <= hi) return 0.5 * (lo + hi);
  }
  throw Error("shell_partition: infeasible cell (construction bug)");
}

inline ShellPartition shell_partition(int k, std::size_t n) {
  if (k < 0) throw Error("shell_partition: k must be >= 0");
  if (n < 1) throw Error("shell_partition: dimension must be >= 1");
  ShellPartition part{k, n, {}};
  const double inner = std::ldexp(1.0, k);
  const double outer = 2.0 * inner;
  for (std::size_t axis = 0; axis < n; ++axis)
    for (int sign : {1, -1})
      for (int third = 0; third < 3; ++third) {
        const double a = 1.0 + third / 3.0, b = 1.0 + (third + 1) / 3.0;
        const double tau = partition_scale(a, b) / inner;
        ShellCell c;
        c.axis = axis;
        c.sign = sign;
        c.third = third;
        c.lo.assign(n, -outer);
        c.hi.assign(n, outer);
        if (sign > 0) {
          c.lo[axis] = inner * a;
          c.hi[axis] = inner * b;
        } else {
          c.lo[axis] = -inner * b;
          c.hi[axis] = -inner * a;
        }
        c.shift.assign(n, 0.0);
        c.shift[axis] = tau;
        part.cells.push_back(std::move(c));
      }
  return part;
}

/// |e^{2 pi i lambda.h} - 1|
inline double phase_gap(std::span<const double> lambda, std::span<const double> h) {
  double dot = 0.0;
  for (std::size_t j = 0; j < lambda.size(); ++j) dot += lambda[j] * h[j];
  return 2.0 * std::abs(sin_pi(dot));
}

struct PartitionAudit {
  std::size_t points = 0;
  std::size_t uncovered = 0;
  std::size_t violations = 0;
  double min_phase_gap = 2.0;
  double min_shift = 1e300, max_shift = 0.0;
};

/// Exhaustive check over every integer point of the shell.
inline PartitionAudit audit_partition(int k, std::size_t n) {
  const ShellPartition part = shell_partition(k, n);
  PartitionAudit out;
  for (const auto& c : part.cells) {
    const double t = norm2(c.shift);
    out.min_shift = std::min(out.min_shift, t);
    out.max_shift = std::max(out.max_shift, t);
  }
  const double inner = std::ldexp(1.0, k);
  const SpectrumSpec zn = make_lattice(Vec(n, 1.0));
  for_each_point(zn, Cube{Vec(n, 0.0), 2.0 * inner}, [&](std::span<const double> p) {
    if (norm_inf(p) <= inner) return;
    ++out.points;
    const ShellCell* c = part.cell_for(p);
    if (!c) {
      ++out.uncovered;
      return;
    }
    const double g = phase_gap(p, c->shift);
    out.min_phase_gap = std::min(out.min_phase_gap, g);
    if (g < 1.0 - 1e-12) ++out.violations;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Shell sums

struct ShellEntry {
  int k = 0;
  double sum = 0.0;
  std::size_t count = 0;
  bool vanishing = false;  ///< empty shell or numerically zero sum; excluded from the fit
};

struct ShellReport {
  int k_lo = 0, k_hi = 0;
  std::vector<ShellEntry> sums;
  double alpha = 1.0;            ///< boundary dimension used for the envelope
  double frame_upper = 1.0;      ///< B used to normalize the envelope
  double fitted_exponent = 0.0;  ///< least-squares slope of log2(sum) against k
  double fit_intercept = 0.0;    ///< least-squares intercept (log2)
  double fit_residual = 0.0;
  /// Envelope constant: max_k sum_k 2^{k (n - alpha)} / B, so that every
  /// shell satisfies sum_k <= fitted_C * B * 2^{-k (n - alpha)}.
  double fitted_C = 0.0;
  std::size_t fitted_shells = 0;
  std::size_t n = 2;

  [[nodiscard]] bool degenerate() const { return fitted_shells == 0; }
};

struct ShellOptions {
  int k_lo = 2;
  int k_hi = 8;
  double alpha = 1.0;
  double frame_upper = 1.0;
  Vec center;  ///< mu; empty means the origin
};

namespace detail {

/// Sum of |chi_D^(lambda - mu)|^2 over lambda in the set with
/// r_in < |lambda - mu|_inf <= r_out (r_in < 0 includes the center).
inline std::pair<double, std::size_t> ring_sum(const DomainSpec& d, const SpectrumSpec& s, std::span<const double> mu,
                                               double r_in, double r_out) {
  NeumaierSum acc;
  std::size_t count = 0;
  Vec diff(mu.size());
  const double slack_in = r_in >= 0.0 ? boundary_slack(r_in, r_in) : 0.0;
  const double slack_out = boundary_slack(r_out, r_out);
  for_each_point(s, Cube{Vec(mu.begin(), mu.end()), r_out}, [&](std::span<const double> p) {
    const double dist = sup_distance(p, mu);
    if (r_in >= 0.0 && dist <= r_in + slack_in) return;
    if (dist > r_out + slack_out) return;
    for (std::size_t j = 0; j < mu.size(); ++j) diff[j] = p[j] - mu[j];
    acc.add(chi_hat(d, diff).norm());
    ++count;
  });
  return {acc.value(), count};
}

inline Vec center_or_origin(const Vec& c, std::size_t n) { return c.empty() ? Vec(n, 0.0) : c; }

}  // namespace detail

/// Shell sums sum_{lambda in Q_{2^{k+1}} \ Q_{2^k}} |chi_D^(lambda)|^2 for
/// k in [k_lo, k_hi], with a log-linear fit and the envelope constant.
inline ShellReport shell_sums(const DomainSpec& d, const SpectrumSpec& s, const ShellOptions& opt) {
  if (opt.k_hi < opt.k_lo) throw Error("shell_sums: empty k range");
  const auto n = dimension(s);
  if (static_cast<int>(n) != dimension(d)) throw Error("shell_sums: domain and spectrum dimensions differ");
  const Vec mu = detail::center_or_origin(opt.center, n);
  ShellReport rep;
  rep.k_lo = opt.k_lo;
  rep.k_hi = opt.k_hi;
  rep.alpha = opt.alpha;
  rep.frame_upper = opt.frame_upper;
  rep.n = n;
  const double m = mass(d);
  const double vanish = 1e-24 * m * m;
  std::vector<double> ks, logs;
  for (int k = opt.k_lo; k <= opt.k_hi; ++k) {
    const auto [sum, count] = detail::ring_sum(d, s, mu, std::ldexp(1.0, k), std::ldexp(1.0, k + 1));
    ShellEntry e{k, sum, count, count == 0 || sum <= vanish};
    rep.sums.push_back(e);
    if (!e.vanishing) {
      ks.push_back(k);
      logs.push_back(std::log2(sum));
      rep.fitted_C = std::max(rep.fitted_C, sum * std::exp2(k * (n - opt.alpha)) / opt.frame_upper);
    }
  }
  rep.fitted_shells = ks.size();
  if (ks.size() >= 2) {
    const LinearFit f = fit_line(ks, logs);
    rep.fitted_exponent = f.slope;
    rep.fit_intercept = f.intercept;
    rep.fit_residual = f.residual_norm;
  }
  return rep;
}

/// sum_{k >= k0} C B 2^{-k (n - alpha)}
inline double envelope_tail(const ShellReport& rep, int k0) {
  const double gap = static_cast<double>(rep.n) - rep.alpha;
  return rep.fitted_C * rep.frame_upper * std::exp2(-k0 * gap) / (1.0 - std::exp2(-gap));
}

struct TailSum {
  double value = 0.0;               ///< directly summed part of the tail
  double certified_remainder = 0.0;  ///< envelope bound on the shells not summed
  double envelope_bound = 0.0;            ///< envelope bound on the whole tail from k0 = floor(log2 R)
  int k0 = 0;
  int k_end = 0;                    ///< shells summed up to Q_{2^{k_end}}
  bool degenerate = false;          ///< every fitted shell vanished
};

/// sum_{lambda not in Q_R(mu)} |chi_D^(lambda - mu)|^2: direct summation out
/// to Q_{2^K}, K increased until the envelope bound on the remainder drops
/// below `tolerance` times the summed value or K reaches k_cap.
inline TailSum tail_sum(const DomainSpec& d, const SpectrumSpec& s, double R, const ShellReport& rep,
                        double tolerance = 1e-3, int k_cap = 9) {
  if (!(R > 0.0)) throw Error("tail_sum: R must be positive");
  if (!rep.degenerate() && rep.fitted_shells >= 2 && rep.fitted_exponent >= 0.0)
    throw Error("no decay detected");
  const auto n = dimension(s);
  const Vec mu = detail::center_or_origin({}, n);
  TailSum t;
  t.degenerate = rep.degenerate();
  t.k0 = static_cast<int>(std::floor(std::log2(R)));
  int K = static_cast<int>(std::ceil(std::log2(R)));
  NeumaierSum acc;
  acc.add(detail::ring_sum(d, s, mu, R, std::ldexp(1.0, K)).first);
  t.envelope_bound = envelope_tail(rep, t.k0);
  while (true) {
    const double remainder = envelope_tail(rep, K);
    if (t.degenerate || remainder <= tolerance * acc.value() || K >= k_cap) {
      t.certified_remainder = t.degenerate ? 0.0 : remainder;
      break;
    }
    acc.add(detail::ring_sum(d, s, mu, std::ldexp(1.0, K), std::ldexp(1.0, K + 1)).first);
    ++K;
  }
  t.value = acc.value();
  t.k_end = K;
  return t;
}

// ---------------------------------------------------------------------------
// Tail integral of |chi_S^|^2 outside a Euclidean ball

struct TailIntegral {
  double value = 0.0;           ///< integral over |xi| >= R
  double quadrature_error = 0.0;  ///< difference between two polar resolutions
  double bound = 0.0;           ///< surface / (2 pi^2 R)
};

namespace detail {

/// integral over |xi| < R of |chi_D^(xi)|^2 on a polar grid: Gauss panels of
/// width <= 1 / panels_per_unit in the radius, periodic trapezoid in angle.
inline double disk_energy(const DomainSpec& d, double R, int panels_per_unit, int angles) {
  const GaussRule& g = gauss_legendre_cached(16);
  const int panels = std::max(1, static_cast<int>(std::ceil(R * panels_per_unit)));
  const double w = R / panels;
  std::vector<double> cs(angles), sn(angles);
  for (int a = 0; a < angles; ++a) {
    const double th = kTwoPi * a / angles;
    cs[a] = std::cos(th);
    sn[a] = std::sin(th);
  }
  NeumaierSum total;
  double xi[2];
  for (int p = 0; p < panels; ++p)
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double rho = w * (p + 0.5 * (g.nodes[i] + 1.0));
      NeumaierSum ring;
      for (int a = 0; a < angles; ++a) {
        xi[0] = rho * cs[a];
        xi[1] = rho * sn[a];
        ring.add(chi_hat(d, xi).norm());
      }
      total.add(0.5 * w * g.weights[i] * rho * ring.value() * kTwoPi / angles);
    }
  return total.value();
}

}  // namespace detail

/// integral over |xi| >= R of |chi_S^|^2, computed as |S| minus the energy
/// inside the ball, compared with surface_measure / (2 pi^2 R).
inline TailIntegral tail_integral_polygon(const DomainSpec& d, double R) {
  if (!(R > 0.0)) throw Error("tail_integral_polygon: R must be positive");
  if (dimension(d) != 2) throw Error("tail_integral_polygon: planar domains only");
  const bool graph = std::holds_alternative<GraphDomain>(d.shape);
  if (!std::holds_alternative<Box>(d.shape) && !graph)
    throw Error("tail_integral_polygon: requires a box or a graph domain");
  const int angles = 64 * std::max(4, static_cast<int>(std::ceil(R * (graph ? 4.0 : 1.0))));
  const double coarse = detail::disk_energy(d, R, 4, angles);
  const double fine = detail::disk_energy(d, R, 8, 2 * angles);
  TailIntegral out;
  out.value = volume(d) - fine;
  out.quadrature_error = std::abs(fine - coarse);
  out.bound = surface_measure(d) / (2.0 * kPi * kPi * R);
  if (out.quadrature_error > 0.1 * std::abs(out.value))
    throw Error("tail_integral_polygon: quadrature error exceeds 10% of the value");
  return out;
}

// ---------------------------------------------------------------------------
// Translation identities for F_D

struct Lemma7Defects {
  double translated = 0.0;  ///< F_D t_h chi_D = e^{2 pi i lambda.h} (D cap D+h)^
  double reverse = 0.0;     ///< F_D t_{-h} chi_D = (D cap D+h)^
  double plain = 0.0;       ///< F_D chi_D = chi_D^
  double quadrature_error = 0.0;

  [[nodiscard]] double max() const { return std::max({translated, reverse, plain}); }
};

/// F_D t_h chi_D(lambda) = integral over D of e^{-2 pi i x.lambda} chi_D(x + h) dx,
/// i.e. the transform of {x in D : x + h in D} = D cap (D - h).
inline FourierValue restricted_shift_transform(const DomainSpec& d, std::span<const double> h,
                                               std::span<const double> lambda) {
  Vec neg(h.begin(), h.end());
  for (double& v : neg) v = -v;
  return chi_hat_intersection(d, neg, lambda);
}

inline Lemma7Defects lemma7_check(const DomainSpec& d, std::span<const double> h, std::span<const Vec> lambdas) {
  Lemma7Defects out;
  Vec neg(h.begin(), h.end());
  for (double& v : neg) v = -v;
  const Vec zero(h.size(), 0.0);
  for (const auto& lam : lambdas) {
    double dot = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) dot += lam[j] * h[j];
    const Complex phase = std::conj(detail::cis_neg(dot));  // e^{2 pi i lambda.h}
    const FourierValue lens_plus = chi_hat_intersection(d, h, lam);
    const FourierValue lhs15 = restricted_shift_transform(d, h, lam);
    const FourierValue lhs16 = restricted_shift_transform(d, neg, lam);
    const FourierValue lhs17 = restricted_shift_transform(d, zero, lam);
    const FourierValue closed = chi_hat(d, lam);
    out.translated = std::max(out.translated, std::abs(lhs15.value() - phase * lens_plus.value()));
    out.reverse = std::max(out.reverse, std::abs(lhs16.value() - lens_plus.value()));
    out.plain = std::max(out.plain, std::abs(lhs17.value() - closed.value()));
    out.quadrature_error = std::max({out.quadrature_error, lens_plus.abs_error_bound, lhs15.abs_error_bound,
                                     lhs17.abs_error_bound});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric-difference estimates

struct Lemma8Row {
  Vec h;
  double one_sided = 0.0;  ///< |D \ (D + h)|
  double centered = 0.0;   ///< integral over D of |chi_D(x + h) - chi_D(x - h)|^2
  double ratio_one_sided = 0.0;
  double ratio_centered = 0.0;
};

struct Lemma8Result {
  std::vector<Lemma8Row> rows;
  double C_one_sided = 0.0;  ///< max ratio for |D \ (D + h)| / |h|^{n - alpha}
  double C_centered = 0.0;
  double content = 0.0;
  bool within_content = false;  ///< C_one_sided <= content and C_centered <= 2 content
};

inline Lemma8Result lemma8_check(const DomainSpec& d, std::span<const Vec> h_list, const BoundaryDimension& dim) {
  Lemma8Result out;
  out.content = dim.content;
  const double gap = dimension(d) - dim.alpha;
  for (const auto& h : h_list) {
    Lemma8Row row;
    row.h = h;
    const double len = norm2(h);
    const SymmetricDifference sd = symmetric_difference_volume(d, h);
    row.one_sided = sd.one_sided;
    row.centered = sd.centered;
    if (len > 0.0) {
      const double scale = std::pow(len, gap);
      row.ratio_one_sided = sd.one_sided / scale;
      row.ratio_centered = sd.centered / scale;
    }
    out.C_one_sided = std::max(out.C_one_sided, row.ratio_one_sided);
    out.C_centered = std::max(out.C_centered, row.ratio_centered);
    out.rows.push_back(std::move(row));
  }
  out.within_content = out.C_one_sided <= dim.content * (1.0 + 1e-12) &&
                       out.C_centered <= 2.0 * dim.content * (1.0 + 1e-12);
  return out;
}

// ---------------------------------------------------------------------------
// Triangle decomposition on a shell cell

struct CellDecomposition {
  std::size_t cell = 0;
  std::size_t points = 0;
  double lhs = 0.0;  ///< sqrt(sum_cell |chi_D^|^2)
  double I = 0.0;    ///< sqrt(sum_cell |(D cap D+h)^|^2)
  double II = 0.0;   ///< sqrt(sum_cell |chi_D^ - (D cap D+h)^|^2)
  double I_bound = 0.0;   ///< B * integral of |chi_D(x+h) - chi_D(x-h)|^2 over D
  double II_bound = 0.0;  ///< B * |D \ (D + h)|
};

/// Evaluates both sides of the per-cell triangle inequality and the frame
/// bounds on I^2 and II^2 for shell k of the set.
inline std::vector<CellDecomposition> triangle_decomposition(const DomainSpec& d, const SpectrumSpec& s, int k,
                                                             double frame_upper) {
  const auto n = dimension(s);
  const ShellPartition part = shell_partition(k, n);
  std::vector<CellDecomposition> out(part.cells.size());
  std::vector<NeumaierSum> a(part.cells.size()), b(part.cells.size()), c(part.cells.size());
  const double inner = std::ldexp(1.0, k);
  for_each_point(s, Cube{Vec(n, 0.0), 2.0 * inner}, [&](std::span<const double> p) {
    if (norm_inf(p) <= inner * (1.0 + 1e-12)) return;
    for (std::size_t i = 0; i < part.cells.size(); ++i) {
      const auto& cell = part.cells[i];
      bool in = true;
      for (std::size_t j = 0; j < n && in; ++j) in = p[j] >= cell.lo[j] && p[j] <= cell.hi[j];
      if (!in) continue;
      const Complex full = chi_hat(d, p).value();
      const Complex cap = chi_hat_intersection(d, cell.shift, p).value();
      a[i].add(std::norm(full));
      b[i].add(std::norm(cap));
      c[i].add(std::norm(full - cap));
      ++out[i].points;
    }
  });
  for (std::size_t i = 0; i < part.cells.size(); ++i) {
    const SymmetricDifference sd = symmetric_difference_volume(d, part.cells[i].shift);
    out[i].cell = i;
    out[i].lhs = std::sqrt(a[i].value());
    out[i].I = std::sqrt(b[i].value());
    out[i].II = std::sqrt(c[i].value());
    out[i].I_bound = frame_upper * sd.centered;
    out[i].II_bound = frame_upper * sd.one_sided;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gap radius

/// C * (B * content / (A * vol))^{1 / (n - alpha)}.
inline double theorem1_radius(double A, double B, double content, double vol, int n, double alpha, double C) {
  if (!(alpha < n)) throw Error("theorem1_radius: boundary dimension must be below the ambient dimension");
  if (!(vol > 0.0)) throw Error("theorem1_radius: zero Lebesgue volume, no finite gap radius exists");
  if (!(A > 0.0) || !(B >= A)) throw Error("theorem1_radius: need 0 < A <= B");
  if (!(content > 0.0)) throw Error("theorem1_radius: content must be positive");
  return C * std::pow(B * content / (A * vol), 1.0 / (n - alpha));
}

struct SuiteMember {
  std::string name;
  double A = 1.0, B = 1.0;
  double content = 1.0;
  double vol = 1.0;
  int n = 2;
  double alpha = 1.0;
  double empirical_R = 0.0;  ///< half the empirical gap side
};

/// Smallest C for which theorem1_radius dominates every observed gap.
inline double calibrate_constant(std::span<const SuiteMember> suite) {
  if (suite.empty()) throw Error("calibrate_constant: empty suite");
  double c = 0.0;
  for (const auto& m : suite) {
    const double unit = theorem1_radius(m.A, m.B, m.content, m.vol, m.n, m.alpha, 1.0);
    c = std::max(c, m.empirical_R / unit);
  }
  return c;
}

struct CentralCheck {
  double R = 0.0;
  double inside = 0.0;      ///< sum over Q_R of |chi_D^|^2
  double tail = 0.0;        ///< directly summed tail out to the truncation
  double total = 0.0;       ///< sum over the truncation cube
  double tail_bound = 0.0;  ///< envelope bound on the full tail
  double lower_bound = 0.0;  ///< A |D| - tail_bound
  double margin = 0.0;       ///< inside - lower_bound
  double decomposition_defect = 0.0;  ///< |inside + tail - total|
};

/// Compares sum_{Q_R} |chi_D^|^2 with A |D| - (tail envelope) and checks the
/// inside/tail split against the truncated total.
inline CentralCheck central_inequality_check(const DomainSpec& d, const SpectrumSpec& s, double A_hat, double R,
                                             const ShellReport& rep, int k_trunc) {
  const auto n = dimension(s);
  const Vec mu(n, 0.0);
  CentralCheck out;
  out.R = R;
  const double outer = std::max(std::ldexp(1.0, k_trunc), R);
  out.inside = detail::ring_sum(d, s, mu, -1.0, R).first;
  out.tail = detail::ring_sum(d, s, mu, R, outer).first;
  out.total = detail::ring_sum(d, s, mu, -1.0, outer).first;
  out.tail_bound = envelope_tail(rep, static_cast<int>(std::floor(std::log2(R))));
  out.lower_bound = A_hat * volume(d) - out.tail_bound;
  out.margin = out.inside - out.lower_bound;
  out.decomposition_defect = std::abs(out.inside + out.tail - out.total);
  return out;
}

}  // namespace gapbound
