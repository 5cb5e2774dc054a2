#pragma once

// Empirical checks of the frame inequality
//   A ||f||^2 <= sum_lambda |f^(lambda)|^2 <= B ||f||^2,  f in L^2(D),
// on finite sections of the exponential system.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gapbound/bounds.hpp"
#include "gapbound/domains.hpp"
#include "gapbound/fourier.hpp"
#include "gapbound/numerics.hpp"
#include "gapbound/spectra.hpp"

namespace gapbound {

using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// G(i, j) = <e_{p_j}, e_{p_i}> = chi_D^(p_i - p_j). Hermitian by construction.
inline Matrix gram_matrix(const DomainSpec& d, std::span<const Vec> points) {
  const auto m = static_cast<Eigen::Index>(points.size());
  Matrix g(m, m);
  Vec diff;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vec& p = points[static_cast<std::size_t>(i)];
    diff.resize(p.size());
    g(i, i) = chi_hat(d, Vec(p.size(), 0.0)).value();
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const Vec& q = points[static_cast<std::size_t>(j)];
      for (std::size_t a = 0; a < p.size(); ++a) diff[a] = p[a] - q[a];
      const Complex z = chi_hat(d, diff).value();
      g(i, j) = z;
      g(j, i) = std::conj(z);
    }
    g(i, i) = g(i, i).real();
  }
  return g;
}

/// max_{lambda, mu} |G(lambda, mu) - mass * delta| over the points of the set
/// inside `truncation`.
inline double orthobasis_residual(const DomainSpec& d, const SpectrumSpec& s, const Cube& truncation) {
  const auto pts = enumerate(s, truncation);
  const Matrix g = gram_matrix(d, pts);
  const double m = mass(d);
  double r = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) r = std::max(r, std::abs(g(i, j) - (i == j ? Complex(m) : Complex(0.0))));
  return r;
}

// ---------------------------------------------------------------------------
// Eigenvalue estimates by power iteration

struct PowerResult {
  double value = 0.0;
  CVector vector;
  int iterations = 0;
};

namespace detail {

inline CVector start_vector(Eigen::Index m) {
  // deterministic, not orthogonal to any coordinate axis
  CVector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = Complex(1.0 + 0.01 * static_cast<double>(i % 7), 0.003 * static_cast<double>(i % 5));
  return v.normalized();
}

inline PowerResult power_iterate(const Matrix& k, double shift, int max_iter, double tol) {
  PowerResult out;
  const Eigen::Index m = k.rows();
  CVector v = start_vector(m);
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    CVector w = k * v - shift * v;
    const double nw = w.norm();
    out.iterations = it + 1;
    if (nw == 0.0) break;
    v = w / nw;
    const double ray = (v.adjoint() * (k * v))(0).real() - shift;
    if (it > 0 && std::abs(ray - prev) <= tol * std::max(1.0, std::abs(ray))) {
      prev = ray;
      break;
    }
    prev = ray;
  }
  out.vector = v;
  out.value = (v.adjoint() * (k * v))(0).real();
  return out;
}

}  // namespace detail

/// Largest eigenvalue of a Hermitian matrix and its Ritz vector.
inline PowerResult power_max(const Matrix& k, int max_iter = 20000, double tol = 1e-15) {
  if (k.rows() == 0) return {};
  // shift by a lower estimate of the spectrum so the dominant eigenvalue is the largest
  const double gersh = k.cwiseAbs().rowwise().sum().maxCoeff();
  return detail::power_iterate(k, -gersh, max_iter, tol);
}

/// Smallest eigenvalue: power iteration on (sigma I - K) with sigma an upper
/// spectral bound.
inline PowerResult power_min(const Matrix& k, int max_iter = 20000, double tol = 1e-15) {
  if (k.rows() == 0) return {};
  const double gersh = k.cwiseAbs().rowwise().sum().maxCoeff();
  const Matrix flipped = -k;
  PowerResult r = detail::power_iterate(flipped, -gersh, max_iter, tol);
  r.value = -r.value;
  return r;
}

// ---------------------------------------------------------------------------
// Finite-section frame bounds

enum class FrameMethod { GramEigs, RandomTests };

inline std::string method_name(FrameMethod m) { return m == FrameMethod::GramEigs ? "gram_eigs" : "random_tests"; }

struct FrameOptions {
  double outer_half_side = 16.0;  ///< Lambda truncation around the anchor
  double inner_half_side = 2.0;   ///< test exponentials around the anchor
  int n_tests = 64;
  std::uint64_t seed = 12345;
  double mass_fraction = 0.99;
  double alpha = -1.0;  ///< boundary dimension for the tail envelope; < 0 means n - 1
};

struct FrameEstimate {
  double A_hat = 0.0;
  double B_hat = 0.0;
  Cube lambda_truncation;
  Cube test_truncation;
  std::size_t outer_points = 0;
  std::size_t test_points = 0;
  std::size_t retained_rank = 0;  ///< test directions kept after whitening
  int n_tests = 0;
  FrameMethod method_lower = FrameMethod::RandomTests;
  FrameMethod method_upper = FrameMethod::RandomTests;
  double tail_bound = 0.0;        ///< envelope bound on sum |chi_D^|^2 outside the truncation
  double captured_mass = 0.0;     ///< sum |chi_D^|^2 inside the truncation
  double gram_min_eig = 0.0;      ///< smallest eigenvalue estimate of the test Gram matrix
  std::uint64_t seed = 0;
  std::string caveat =
      "finite section: B_hat is a lower bound on B; A_hat is an upper bound on A only up to tail_bound";
};

namespace detail {

/// Whether the truncation cube contains every point of a finite set.
inline bool covers_finite_set(const SpectrumSpec& s, const Cube& q) {
  if (const auto* c = std::get_if<CantorDigits>(&s.set)) {
    const double top = (std::pow(4.0, c->max_digits) - 1.0) / 3.0;
    return in_closed_cube(std::span<const double>(&top, 1), q) && q.center[0] - q.half_side <= 0.0;
  }
  if (const auto* e = std::get_if<Explicit>(&s.set)) {
    if (e->coverage) return false;
    for (const auto& p : e->points)
      if (!in_closed_cube(p, q)) return false;
    return true;
  }
  return false;
}

}  // namespace detail

/// Extreme Rayleigh quotients of
///   q(c) = sum_{lambda in outer} |sum_mu c_mu chi_D^(lambda - mu)|^2 / ||sum_mu c_mu e_mu||^2
/// over test exponentials mu in the inner cube: power iteration on the
/// whitened finite section plus `n_tests` seeded random coefficient vectors.
inline FrameEstimate frame_bounds_estimate(const DomainSpec& d, const SpectrumSpec& s, const FrameOptions& opt) {
  const std::size_t n = dimension(s);
  if (static_cast<int>(n) != dimension(d)) throw Error("frame_bounds_estimate: domain and spectrum dimensions differ");
  if (!(opt.inner_half_side > 0.0) || !(opt.outer_half_side >= opt.inner_half_side))
    throw Error("frame_bounds_estimate: need 0 < inner_half_side <= outer_half_side");
  if (opt.n_tests < 0) throw Error("frame_bounds_estimate: n_tests must be >= 0");
  const Vec a = anchor(s);
  FrameEstimate est;
  est.lambda_truncation = Cube{a, opt.outer_half_side};
  est.test_truncation = Cube{a, opt.inner_half_side};
  est.seed = opt.seed;
  est.n_tests = opt.n_tests;

  const auto outer = enumerate(s, est.lambda_truncation);
  const auto inner = enumerate(s, est.test_truncation);
  est.outer_points = outer.size();
  est.test_points = inner.size();
  if (inner.empty()) return est;

  // mass captured by the truncation, with the shell envelope for the rest
  est.captured_mass = detail::ring_sum(d, s, a, -1.0, opt.outer_half_side).first;
  if (!detail::covers_finite_set(s, est.lambda_truncation)) {
    const int k_top = static_cast<int>(std::floor(std::log2(opt.outer_half_side)));
    if (k_top >= 2) {
      ShellOptions so;
      so.k_hi = k_top - 1;
      so.k_lo = std::max(0, k_top - 4);
      so.alpha = opt.alpha >= 0.0 ? opt.alpha : static_cast<double>(n) - 1.0;
      so.center = a;
      const ShellReport rep = shell_sums(d, s, so);
      est.tail_bound = rep.degenerate() ? 0.0 : envelope_tail(rep, k_top);
      if (est.tail_bound > (1.0 - opt.mass_fraction) * (est.captured_mass + est.tail_bound)) {
        int k = k_top;
        while (envelope_tail(rep, k) > (1.0 - opt.mass_fraction) * est.captured_mass && k < 60) ++k;
        throw Error("frame_bounds_estimate: truncation captures too little mass; outer_half_side must be at least " +
                    std::to_string(std::ldexp(1.0, k)));
      }
    }
  }

  const auto mo = static_cast<Eigen::Index>(outer.size());
  const auto mi = static_cast<Eigen::Index>(inner.size());
  Matrix t(mo, mi);
  Vec diff(n);
  for (Eigen::Index i = 0; i < mo; ++i)
    for (Eigen::Index j = 0; j < mi; ++j) {
      const Vec& p = outer[static_cast<std::size_t>(i)];
      const Vec& q = inner[static_cast<std::size_t>(j)];
      for (std::size_t c = 0; c < n; ++c) diff[c] = p[c] - q[c];
      t(i, j) = chi_hat(d, diff).value();
    }
  const Matrix h = gram_matrix(d, inner);
  Matrix tt = t.adjoint() * t;
  tt = 0.5 * (tt + tt.adjoint()).eval();

  // whiten by the test Gram matrix, dropping numerically dependent directions
  const Eigen::SelfAdjointEigenSolver<Matrix> eh(h);
  const auto& ev = eh.eigenvalues();
  est.gram_min_eig = power_min(h).value;
  const double top = ev.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-10 * top) keep.push_back(i);
  est.retained_rank = keep.size();
  Matrix w(mi, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    w.col(static_cast<Eigen::Index>(c)) = eh.eigenvectors().col(keep[c]) / std::sqrt(ev(keep[c]));
  Matrix k = w.adjoint() * tt * w;
  k = 0.5 * (k + k.adjoint()).eval();

  const auto rayleigh = [&](const CVector& c) {
    const double num = (c.adjoint() * tt * c)(0).real();
    const double den = (c.adjoint() * h * c)(0).real();
    return num / den;
  };

  const PowerResult hi = power_max(k);
  const PowerResult lo = power_min(k);
  est.B_hat = rayleigh(w * hi.vector);
  est.A_hat = rayleigh(w * lo.vector);
  est.method_upper = est.method_lower = FrameMethod::GramEigs;

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < opt.n_tests; ++r) {
    CVector c(mi);
    for (Eigen::Index i = 0; i < mi; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      c(i) = Complex(re, im);
    }
    c.normalize();
    const double q = rayleigh(c);
    if (q > est.B_hat) {
      est.B_hat = q;
      est.method_upper = FrameMethod::RandomTests;
    }
    if (q < est.A_hat) {
      est.A_hat = q;
      est.method_lower = FrameMethod::RandomTests;
    }
  }
  return est;
}

// ---------------------------------------------------------------------------
// Tight-frame check for the disk with the lattice (1/2r) Z^2

struct TestFamily {
  bool indicator = true;
  std::vector<Vec> exponentials;  ///< single exponentials e_nu restricted to the disk
  int random_combinations = 0;
  int terms = 4;          ///< exponentials per random combination
  double spread = 2.0;    ///< frequencies drawn uniformly from [-spread, spread]^2
  std::uint64_t seed = 12345;
};

struct TightFrameRow {
  std::string name;
  double ratio = 0.0;   ///< truncated lattice sum / ||f||^2
  double defect = 0.0;  ///< |ratio - 4 r^2| / 4 r^2
  double tail = 0.0;    ///< (2r)^2 ||f||^2 - truncated sum, relative to ||f||^2
};

struct TightFrameResult {
  double r = 0.0;
  double L = 0.0;
  double target = 0.0;  ///< 4 r^2
  std::size_t lattice_points = 0;
  std::vector<TightFrameRow> rows;
  double max_defect = 0.0;
};

inline TightFrameResult tight_frame_check(double r, const TestFamily& family, double L) {
  if (!(r > 0.0) || !(L > 0.0)) throw Error("tight_frame_check: r and L must be positive");
  const DomainSpec disk = make_disk(r);
  const SpectrumSpec lat = make_lattice({1.0 / (2.0 * r), 1.0 / (2.0 * r)});
  const auto pts = enumerate(lat, Cube{{0.0, 0.0}, L});

  struct Test {
    std::string name;
    std::vector<Vec> freqs;
    std::vector<Complex> coef;
  };
  std::vector<Test> tests;
  if (family.indicator) tests.push_back({"indicator", {{0.0, 0.0}}, {Complex(1.0)}});
  for (const auto& nu : family.exponentials) {
    if (nu.size() != 2) throw Error("tight_frame_check: exponential frequencies must be planar");
    tests.push_back({"exponential(" + std::to_string(nu[0]) + "," + std::to_string(nu[1]) + ")", {nu}, {Complex(1.0)}});
  }
  std::mt19937_64 rng(family.seed);
  std::uniform_real_distribution<double> unif(-family.spread, family.spread);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int c = 0; c < family.random_combinations; ++c) {
    Test t{"random" + std::to_string(c), {}, {}};
    for (int j = 0; j < family.terms; ++j) {
      const double x = unif(rng), y = unif(rng);
      const double re = gauss(rng), im = gauss(rng);
      t.freqs.push_back({x, y});
      t.coef.emplace_back(re, im);
    }
    tests.push_back(std::move(t));
  }

  TightFrameResult out;
  out.r = r;
  out.L = L;
  out.target = 4.0 * r * r;
  out.lattice_points = pts.size();
  Vec diff(2);
  for (const auto& t : tests) {
    // ||f||^2 = sum_{k,l} c_k conj(c_l) chi^(nu_l - nu_k)
    Complex norm2f(0.0);
    for (std::size_t k = 0; k < t.freqs.size(); ++k)
      for (std::size_t l = 0; l < t.freqs.size(); ++l) {
        diff = {t.freqs[l][0] - t.freqs[k][0], t.freqs[l][1] - t.freqs[k][1]};
        norm2f += t.coef[k] * std::conj(t.coef[l]) * chi_hat(disk, diff).value();
      }
    const double nf = norm2f.real();
    if (!(nf > 0.0)) throw Error("tight_frame_check: test function has zero norm");
    NeumaierSum acc;
    for (const auto& lam : pts) {
      Complex fh(0.0);
      for (std::size_t k = 0; k < t.freqs.size(); ++k) {
        diff = {lam[0] - t.freqs[k][0], lam[1] - t.freqs[k][1]};
        fh += t.coef[k] * chi_hat(disk, diff).value();
      }
      acc.add(std::norm(fh));
    }
    TightFrameRow row;
    row.name = t.name;
    row.ratio = acc.value() / nf;
    row.defect = std::abs(row.ratio - out.target) / out.target;
    row.tail = out.target - row.ratio;
    out.max_defect = std::max(out.max_defect, row.defect);
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace gapbound
