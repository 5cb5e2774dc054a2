#pragma once

// Example reproductions and config-driven task batches, producing a JSON
// report, a list of pass/fail checks, and plot-ready CSV rows.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gapbound/bounds.hpp"
#include "gapbound/domains.hpp"
#include "gapbound/fourier.hpp"
#include "gapbound/frames.hpp"
#include "gapbound/serialize.hpp"
#include "gapbound/spectra.hpp"

namespace gapbound {

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  ///< "<=", ">=", "in", "==", "error"
  bool passed = false;
};

struct CsvRow {
  double key = 0.0;  ///< k or eps
  double value = 0.0;
  double bound = 0.0;
};

struct Report {
  Json doc;
  std::vector<Check> checks;
  std::vector<CsvRow> shell_rows;
  std::vector<CsvRow> eps_rows;

  [[nodiscard]] bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  void check_le(std::string name, double value, double limit) {
    checks.push_back({std::move(name), value, limit, "<=", value <= limit});
  }
  void check_ge(std::string name, double value, double limit) {
    checks.push_back({std::move(name), value, limit, ">=", value >= limit});
  }
};

struct Overrides {
  std::optional<Vec> sides;         ///< example 2
  std::optional<double> t;          ///< example 3
  std::optional<int> k;             ///< example 5
  std::optional<double> r;          ///< example 6
  std::optional<int> digits;        ///< example 4
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;  ///< replaces the example's principal tolerance
  std::optional<int> truncation;    ///< lattice steps (J for example 4, L r for example 6)
};

inline constexpr std::uint64_t kDefaultSeed = 20240229;

namespace detail {

inline Json checks_json(const std::vector<Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks)
    out.push_back(Json{{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"relation", c.relation},
                       {"passed", c.passed}});
  return out;
}

inline Json start_doc(const std::string& kind) {
  return Json{{"schema_version", kSchemaVersion}, {"kind", kind}};
}

/// Largest step of a lattice, or 1 for other sets.
inline double spacing_scale(const SpectrumSpec& s) {
  if (const auto* d = std::get_if<DiagonalLattice>(&s.set)) return *std::max_element(d->steps.begin(), d->steps.end());
  if (const auto* t = std::get_if<TranslatedLattice>(&s.set))
    return *std::max_element(t->base.steps.begin(), t->base.steps.end());
  return 1.0;
}

inline double min_spacing(const SpectrumSpec& s) {
  if (const auto* d = std::get_if<DiagonalLattice>(&s.set)) return *std::min_element(d->steps.begin(), d->steps.end());
  if (const auto* t = std::get_if<TranslatedLattice>(&s.set))
    return *std::min_element(t->base.steps.begin(), t->base.steps.end());
  return 1.0;
}

struct GapInputs {
  double A = 1.0, B = 1.0;
  BoundaryDimension dim;
  double C = 1.0;
};

/// Gap search around the anchor plus the radius comparison.
inline Json gap_section(const DomainSpec& d, const SpectrumSpec& s, const GapInputs& in, Report& rep,
                        double region_half_side = 0.0) {
  const double h = region_half_side > 0.0 ? region_half_side : 4.0 * spacing_scale(s);
  const EmptyCube gap = max_empty_cube(s, Cube{anchor(s), h}, min_spacing(s) / 4.0);
  Json j = to_json(gap);
  const double R_emp = 0.5 * gap.side;
  j["R_empirical"] = R_emp;
  rep.checks.push_back({"gap witness certified empty", gap.certified ? 1.0 : 0.0, 1.0, "==", gap.certified});
  if (is_lebesgue(d)) {
    const double vol = volume(d);
    const int n = dimension(d);
    const double unit = theorem1_radius(in.A, in.B, in.dim.content, vol, n, in.dim.alpha, 1.0);
    j["R_theorem"] = in.C * unit;
    j["C_used"] = in.C;
    j["R_theorem_unit"] = unit;
    j["C_needed"] = R_emp / unit;
    j["dimension"] = to_json(in.dim);
  } else {
    try {
      theorem1_radius(in.A, in.B, 1.0, 0.0, dimension(d), 0.0, 1.0);
    } catch (const Error& e) {
      j["R_theorem"] = nullptr;
      j["R_theorem_error"] = e.what();
    }
  }
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Example 2: boxes with the dual lattice

inline Report example_box(const Overrides& o) {
  Report rep;
  const Vec sides = o.sides.value_or(Vec{2.0, 0.5});
  const DomainSpec d = make_box(sides);
  const Box& box = std::get<Box>(d.shape);
  const SpectrumSpec s = dual_lattice(box);
  const std::size_t n = box.sides.size();
  const double tol = o.tolerance.value_or(1e-6);
  const int trunc = o.truncation.value_or(n <= 2 ? 4 : 2);

  rep.doc = detail::start_doc("example");
  rep.doc["example"] = 2;
  rep.doc["inputs"] = Json{{"domain", to_json(d)},
                           {"spectrum", to_json(s)},
                           {"parameters", Json{{"tolerance", tol}, {"truncation", trunc}}}};
  Json res;
  const double vol = volume(d);
  const double surface = surface_measure(d);
  res["volume"] = vol;
  res["surface_measure"] = surface;

  const double outer = trunc * detail::spacing_scale(s);
  const double resid = orthobasis_residual(d, s, Cube{Vec(n, 0.0), outer});
  res["orthobasis_residual"] = resid;
  rep.check_le("orthobasis residual", resid, 1e-12);

  FrameOptions fo;
  fo.outer_half_side = outer;
  fo.inner_half_side = detail::min_spacing(s) * (n <= 2 ? 1.0 : 0.5) + 1e-9;
  fo.seed = o.seed.value_or(kDefaultSeed);
  const FrameEstimate fe = frame_bounds_estimate(d, s, fo);
  res["frame"] = to_json(fe);
  rep.check_le("|A_hat - |D|| / |D|", std::abs(fe.A_hat - vol) / vol, tol);
  rep.check_le("|B_hat - |D|| / |D|", std::abs(fe.B_hat - vol) / vol, tol);

  detail::GapInputs gi{vol, vol, analytic_boundary_dimension(d), 1.0};
  Json gap = detail::gap_section(d, s, gi, rep);
  const double R = gap["R_empirical"].get<double>();
  const double ratio = R * vol / surface;
  gap["R_volume_over_surface"] = ratio;
  gap["band"] = {1.0 / (4.0 * n), 0.25};
  res["gap"] = gap;
  const double a_n = box.sides.back();
  rep.check_le("|2R - 1/a_n|", std::abs(2.0 * R - 1.0 / a_n), 1e-12);
  rep.check_ge("R |D| / |boundary| lower band", ratio, 1.0 / (4.0 * n) * (1.0 - 1e-12));
  rep.check_le("R |D| / |boundary| upper band", ratio, 0.25 * (1.0 + 1e-12));

  const BoundaryDimension est = minkowski_estimate(d, default_eps_grid());
  res["minkowski"] = to_json(est);
  for (std::size_t i = 0; i < est.eps.size(); ++i)
    rep.eps_rows.push_back({est.eps[i], est.tube[i], est.content * std::pow(est.eps[i], n - est.alpha)});
  rep.doc["results"] = res;
  return rep;
}

// ---------------------------------------------------------------------------
// Example 3: blow-ups of a domain with fractal boundary

inline Weierstrass example3_profile() {
  Weierstrass w;
  w.gamma = 0.5;
  w.base = 8;
  w.depth = 6;
  w.amplitude = 0.25;
  w.samples_per_wavelength = 8;
  return w;
}

inline Report example_scaling(const Overrides& o) {
  Report rep;
  const double t = o.t.value_or(2.0);
  const double tol = o.tolerance.value_or(0.10);
  const DomainSpec base = make_graph(example3_profile());
  const DomainSpec d = make_scaled(base, t);
  const SpectrumSpec s = make_lattice({1.0 / t, 1.0 / t});
  const int trunc = o.truncation.value_or(3);

  rep.doc = detail::start_doc("example");
  rep.doc["example"] = 3;
  rep.doc["inputs"] = Json{{"domain", to_json(d)},
                           {"spectrum", to_json(s)},
                           {"parameters", Json{{"t", t}, {"tolerance", tol}, {"truncation", trunc}}}};
  Json res;
  const double vol = volume(d);
  res["volume"] = vol;

  const double resid = orthobasis_residual(d, s, Cube{{0.0, 0.0}, trunc / t});
  res["orthobasis_residual"] = resid;
  rep.check_le("orthobasis residual / |D|", resid / vol, 1e-10);

  const auto grid = default_eps_grid();
  const BoundaryDimension base_fit = minkowski_estimate(base, grid);
  const BoundaryDimension scaled = minkowski_content_at(d, base_fit.alpha, grid);
  const double scaling = scaled.content / (std::pow(t, base_fit.alpha) * base_fit.content);
  res["minkowski_base"] = to_json(base_fit);
  res["minkowski_scaled"] = to_json(scaled);
  res["content_scaling_ratio"] = scaling;
  rep.check_le("|content_t / (t^alpha content_1) - 1|", std::abs(scaling - 1.0), tol);
  for (std::size_t i = 0; i < scaled.eps.size(); ++i)
    rep.eps_rows.push_back({scaled.eps[i], scaled.tube[i], scaled.content * std::pow(scaled.eps[i], 2.0 - scaled.alpha)});

  detail::GapInputs gi{vol, vol, scaled, 1.0};
  Json gap = detail::gap_section(d, s, gi, rep);
  const double side = gap["empirical_side"].get<double>();
  rep.check_le("|gap - 1/t| t", std::abs(side - 1.0 / t) * t, 1e-12);
  const double R1 = theorem1_radius(1.0, 1.0, base_fit.content, volume(base), 2, base_fit.alpha, 1.0);
  const double Rt = gap["R_theorem_unit"].get<double>();
  gap["R_theorem_t_over_R_theorem_1"] = Rt * t / R1;
  rep.check_le("|t R_theorem(t) / R_theorem(1) - 1|", std::abs(Rt * t / R1 - 1.0), 0.15);
  res["gap"] = gap;
  rep.doc["results"] = res;
  return rep;
}

// ---------------------------------------------------------------------------
// Example 4: the quarter Cantor measure

/// m^(t) from the self-similarity m^(t) = e^{-pi i t / 2} cos(pi t / 2) m^(t / 4),
/// unrolled `depth` times and closed with m^(s) ~ 1 - 2 pi i s / 3.
inline Complex cantor_recursion(double t, int depth = 25) {
  Complex acc(1.0);
  double u = t;
  for (int j = 0; j < depth; ++j) {
    acc *= expi_pi_neg(0.5 * u) * cos_pi(0.5 * u);
    u *= 0.25;
  }
  return acc * detail::cis_neg(u / 3.0);
}

inline Report example_cantor(const Overrides& o) {
  Report rep;
  const int digits = o.digits.value_or(6);
  const int J = o.truncation.value_or(kDefaultCantorTruncation);
  const double tol = o.tolerance.value_or(1e-8);
  const std::uint64_t seed = o.seed.value_or(kDefaultSeed);
  const DomainSpec d = make_cantor();
  const SpectrumSpec s = make_cantor_digits(digits);

  rep.doc = detail::start_doc("example");
  rep.doc["example"] = 4;
  rep.doc["inputs"] = Json{{"domain", to_json(d)},
                           {"spectrum", to_json(s)},
                           {"parameters", Json{{"truncation", J}, {"tolerance", tol}, {"seed", seed}}}};
  Json res;
  const auto pts = enumerate(s, Cube{{0.0}, std::pow(4.0, digits)});
  double off = 0.0, bound = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const FourierValue v = cantor_mhat(pts[i][0] - pts[j][0], J);
      off = std::max(off, v.abs());
      bound = std::max(bound, v.abs_error_bound);
    }
  const FourierValue m0 = cantor_mhat(0.0, J);
  res["points"] = pts.size();
  res["max_offdiagonal"] = off;
  res["max_truncation_bound"] = bound;
  res["mhat_zero"] = m0.re;
  rep.check_le("max |m^(lambda - lambda')|", off, tol);
  rep.check_le("|m^(0) - 1|", std::abs(m0.value() - 1.0), 1e-15);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-100.0, 100.0);
  double rec = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = unif(rng);
    rec = std::max(rec, std::abs(cantor_mhat(t, J).value() - cantor_recursion(t)));
  }
  res["recursion_defect"] = rec;
  rep.check_le("product vs recursion", rec, 1e-9);

  // the largest gap of {sum b_j 4^j, j < d} sits between (4^{d-1} - 1) / 3 and 4^{d-1}
  const std::vector<double> gaps = cantor_gap_growth(digits);
  Json growth = Json::array();
  bool increasing = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double block = std::pow(4.0, static_cast<double>(i));
    const double exact = (2.0 * block + 1.0) / 3.0;
    growth.push_back(Json{{"max_digits", i + 1}, {"gap", gaps[i]}, {"gap_over_4^(d-1)", gaps[i] / block}});
    worst = std::max(worst, std::abs(gaps[i] - exact));
    if (i > 0) increasing = increasing && gaps[i] >= 3.0 * gaps[i - 1];
  }
  res["gap_growth"] = growth;
  rep.check_le("max |gap(d) - (2 4^(d-1) + 1) / 3|", worst, 1e-9);
  rep.checks.push_back({"gap at least triples per digit", increasing ? 1.0 : 0.0, 1.0, "==", increasing});
  try {
    theorem1_radius(1.0, 1.0, 1.0, 0.0, 1, 0.0, 1.0);
    res["theorem_radius"] = "unexpectedly finite";
    rep.checks.push_back({"zero-volume radius rejected", 0.0, 1.0, "error", false});
  } catch (const Error& e) {
    res["theorem_radius"] = e.what();
    rep.checks.push_back({"zero-volume radius rejected", 1.0, 1.0, "error", true});
  }
  rep.doc["results"] = res;
  return rep;
}

// ---------------------------------------------------------------------------
// Example 5: sawtooth family with spectrum Z^2

inline std::vector<Vec> dyadic_shifts(int m_lo, int m_hi, std::size_t axis) {
  std::vector<Vec> hs;
  for (int m = m_lo; m <= m_hi; ++m) {
    Vec h{0.0, 0.0};
    h[axis] = std::ldexp(1.0, -m);
    hs.push_back(h);
  }
  return hs;
}

inline Report example_sawtooth(const Overrides& o) {
  Report rep;
  const int k = o.k.value_or(4);
  const double tol = o.tolerance.value_or(1e-10);
  const int trunc = o.truncation.value_or(3);
  const DomainSpec d = make_sawtooth(k);
  const SpectrumSpec s = make_lattice({1.0, 1.0});

  rep.doc = detail::start_doc("example");
  rep.doc["example"] = 5;
  rep.doc["inputs"] = Json{{"domain", to_json(d)},
                           {"spectrum", to_json(s)},
                           {"parameters", Json{{"k", k}, {"tolerance", tol}, {"truncation", trunc}}}};
  Json res;
  res["volume"] = volume(d);
  res["surface_measure"] = surface_measure(d);
  res["diameter"] = diameter(d);
  const double resid = orthobasis_residual(d, s, Cube{{0.0, 0.0}, static_cast<double>(trunc)});
  res["orthobasis_residual"] = resid;
  rep.check_le("orthobasis residual", resid, tol);

  const BoundaryDimension dim = analytic_boundary_dimension(d);
  detail::GapInputs gi{1.0, 1.0, dim, 1.0};
  Json gap = detail::gap_section(d, s, gi, rep);
  rep.check_le("|gap - 1|", std::abs(gap["empirical_side"].get<double>() - 1.0), 1e-12);
  gap["R_over_diameter"] = gap["R_empirical"].get<double>() / diameter(d);
  res["gap"] = gap;

  const auto horizontal = dyadic_shifts(1, 6, 0);
  const auto vertical = dyadic_shifts(1, 6, 1);
  res["lemma8_horizontal"] = to_json(lemma8_check(d, horizontal, dim));
  res["lemma8_vertical"] = to_json(lemma8_check(d, vertical, dim));
  rep.doc["results"] = res;
  return rep;
}

// ---------------------------------------------------------------------------
// Example 6: the disk with (1/2r) Z^2

inline Report example_disk(const Overrides& o) {
  Report rep;
  const double r = o.r.value_or(1.0);
  const double tol = o.tolerance.value_or(0.05);
  const int trunc = o.truncation.value_or(40);
  const std::uint64_t seed = o.seed.value_or(kDefaultSeed);
  const DomainSpec d = make_disk(r);
  const double step = 1.0 / (2.0 * r);
  const SpectrumSpec s = make_lattice({step, step});
  const double L = trunc / r;
  const double target = 4.0 * r * r;

  rep.doc = detail::start_doc("example");
  rep.doc["example"] = 6;
  rep.doc["inputs"] = Json{{"domain", to_json(d)},
                           {"spectrum", to_json(s)},
                           {"parameters", Json{{"r", r}, {"tolerance", tol}, {"truncation", trunc}, {"L", L},
                                               {"seed", seed}}}};
  Json res;
  const double vol = volume(d);
  res["volume"] = vol;

  TestFamily fam;
  fam.exponentials = {{0.3, 0.7}};
  fam.random_combinations = 2;
  fam.seed = seed;
  const TightFrameResult tf = tight_frame_check(r, fam, L);
  res["tight_frame"] = to_json(tf);
  rep.check_le("tight frame relative defect", tf.max_defect, 0.01);

  FrameOptions fo;
  fo.outer_half_side = L;
  fo.inner_half_side = 2.0 * step + 1e-9;
  fo.seed = seed;
  const FrameEstimate fe = frame_bounds_estimate(d, s, fo);
  res["frame"] = to_json(fe);
  rep.check_le("|A_hat - 4r^2| / 4r^2", std::abs(fe.A_hat - target) / target, tol);
  rep.check_le("|B_hat - 4r^2| / 4r^2", std::abs(fe.B_hat - target) / target, tol);

  const double resid = orthobasis_residual(d, s, Cube{{0.0, 0.0}, 2.0 * step});
  res["orthobasis_residual"] = resid;
  rep.check_ge("orthobasis residual (not orthogonal)", resid, 1e-3);

  const BoundaryDimension dim = analytic_boundary_dimension(d);
  detail::GapInputs gi{target, target, dim, 1.0};
  Json gap = detail::gap_section(d, s, gi, rep);
  rep.check_le("|gap - 1/(2r)| 2r", std::abs(gap["empirical_side"].get<double>() - step) / step, 1e-12);
  res["gap"] = gap;

  ShellOptions so;
  so.k_lo = 0;
  so.k_hi = 5;
  so.alpha = 1.0;
  so.frame_upper = fe.B_hat;
  const ShellReport sh = shell_sums(d, make_lattice({step, step}), so);
  res["shells"] = to_json(sh);
  for (const auto& e : sh.sums)
    rep.shell_rows.push_back({static_cast<double>(e.k), e.sum, sh.fitted_C * sh.frame_upper * std::exp2(-e.k * 1.0)});
  rep.doc["results"] = res;
  return rep;
}

inline Report run_example(int id, const Overrides& o = {}) {
  Report rep;
  switch (id) {
    case 2: rep = example_box(o); break;
    case 3: rep = example_scaling(o); break;
    case 4: rep = example_cantor(o); break;
    case 5: rep = example_sawtooth(o); break;
    case 6: rep = example_disk(o); break;
    default: throw Error("run_example: unknown example id " + std::to_string(id) + " (expected 2..6)");
  }
  rep.doc["checks"] = detail::checks_json(rep.checks);
  rep.doc["passed"] = rep.passed();
  return rep;
}

// ---------------------------------------------------------------------------
// Config-driven runs

namespace detail {

inline double num(const Json& j, const std::string& where, const char* key, double fallback) {
  return optional_field<double>(j, where, key, fallback);
}

inline Json run_task(const Json& task, const DomainSpec& d, const SpectrumSpec& s, const Json& cfg, Report& rep,
                     std::optional<FrameEstimate>& frame) {
  const std::string type = type_tag(task, "task");
  const std::string where = "task '" + type + "'";
  const std::size_t n = dimension(s);
  const std::uint64_t seed = optional_field<std::uint64_t>(cfg, "config", "seed", kDefaultSeed);
  const Json tol = cfg.contains("tolerances") ? cfg.at("tolerances") : Json::object();

  if (type == "orthobasis") {
    expect_fields(task, where, {"type", "half_side"});
    const double h = num(task, where, "half_side", 4.0 * spacing_scale(s));
    const double resid = orthobasis_residual(d, s, Cube{anchor(s), h});
    rep.check_le("orthobasis residual", resid, num(tol, "tolerances", "orthobasis", 1e-10));
    return Json{{"orthobasis_residual", resid}, {"half_side", h}};
  }
  if (type == "frame") {
    expect_fields(task, where, {"type", "outer_half_side", "inner_half_side", "n_tests", "seed"});
    FrameOptions fo;
    fo.outer_half_side = num(task, where, "outer_half_side", 16.0 * spacing_scale(s));
    fo.inner_half_side = num(task, where, "inner_half_side", min_spacing(s) + 1e-9);
    fo.n_tests = optional_field<int>(task, where, "n_tests", fo.n_tests);
    fo.seed = optional_field<std::uint64_t>(task, where, "seed", seed);
    frame = frame_bounds_estimate(d, s, fo);
    rep.check_le("A_hat <= B_hat", frame->A_hat - frame->B_hat, 0.0);
    return to_json(*frame);
  }
  if (type == "gap") {
    expect_fields(task, where, {"type", "region_half_side"});
    GapInputs gi;
    const double m = mass(d);
    gi.A = frame ? frame->A_hat : num(cfg, "config", "A", m);
    gi.B = frame ? frame->B_hat : num(cfg, "config", "B", m);
    gi.C = num(cfg, "config", "C", 1.0);
    if (is_lebesgue(d)) {
      gi.dim = analytic_boundary_dimension(d);
      gi.dim.alpha = num(cfg, "config", "alpha", gi.dim.alpha);
      gi.dim.content = num(cfg, "config", "content", gi.dim.content);
    }
    Json g = gap_section(d, s, gi, rep, num(task, where, "region_half_side", 0.0));
    if (std::holds_alternative<Box>(d.shape)) {
      const double ratio = g["R_empirical"].get<double>() * volume(d) / surface_measure(d);
      g["R_volume_over_surface"] = ratio;
      g["band"] = {1.0 / (4.0 * n), 0.25};
    }
    return g;
  }
  if (type == "shells") {
    expect_fields(task, where, {"type", "k_lo", "k_hi", "alpha", "B"});
    ShellOptions so;
    so.k_lo = optional_field<int>(task, where, "k_lo", 2);
    so.k_hi = optional_field<int>(task, where, "k_hi", 6);
    so.alpha = num(task, where, "alpha", num(cfg, "config", "alpha", n - 1.0));
    so.frame_upper = num(task, where, "B", frame ? frame->B_hat : mass(d));
    const ShellReport sh = shell_sums(d, s, so);
    const double gap = static_cast<double>(n) - so.alpha;
    for (const auto& e : sh.sums) {
      rep.shell_rows.push_back({static_cast<double>(e.k), e.sum, sh.fitted_C * sh.frame_upper * std::exp2(-e.k * gap)});
      rep.check_le("shell " + std::to_string(e.k) + " within envelope", e.sum,
                   sh.fitted_C * sh.frame_upper * std::exp2(-e.k * gap) * (1.0 + 1e-12));
    }
    return to_json(sh);
  }
  if (type == "minkowski") {
    expect_fields(task, where, {"type", "eps"});
    const Vec grid = optional_field<Vec>(task, where, "eps", default_eps_grid());
    const BoundaryDimension b = cfg.contains("alpha") ? minkowski_content_at(d, cfg.at("alpha").get<double>(), grid)
                                                      : minkowski_estimate(d, grid);
    for (std::size_t i = 0; i < b.eps.size(); ++i)
      rep.eps_rows.push_back({b.eps[i], b.tube[i], b.content * std::pow(b.eps[i], dimension(d) - b.alpha)});
    return to_json(b);
  }
  if (type == "lemma8") {
    expect_fields(task, where, {"type", "h"});
    const auto hs = required<std::vector<Vec>>(task, where, "h");
    BoundaryDimension dim = analytic_boundary_dimension(d);
    dim.alpha = num(cfg, "config", "alpha", dim.alpha);
    dim.content = num(cfg, "config", "content", dim.content);
    return to_json(lemma8_check(d, hs, dim));
  }
  if (type == "tail_integral") {
    expect_fields(task, where, {"type", "R"});
    const TailIntegral ti = tail_integral_polygon(d, required<double>(task, where, "R"));
    rep.check_le("tail integral within surface / (2 pi^2 R)", ti.value, ti.bound);
    return to_json(ti);
  }
  if (type == "tight_frame") {
    expect_fields(task, where, {"type", "r", "L"});
    const double r = required<double>(task, where, "r");
    TestFamily fam;
    fam.random_combinations = 2;
    fam.seed = seed;
    const TightFrameResult tf = tight_frame_check(r, fam, num(task, where, "L", 40.0 / r));
    rep.check_le("tight frame relative defect", tf.max_defect, num(tol, "tolerances", "tight_frame", 0.01));
    return to_json(tf);
  }
  throw Error("task: unknown type '" + type + "'");
}

}  // namespace detail

inline Report run_config_json(const Json& cfg) {
  detail::expect_fields(cfg, "config",
                        {"schema_version", "domain", "spectrum", "tasks", "tolerances", "seed", "alpha", "content", "A",
                         "B", "C"});
  const int version = detail::required<int>(cfg, "config", "schema_version");
  if (version != kSchemaVersion) throw Error("config: unsupported schema_version " + std::to_string(version));
  if (!cfg.contains("domain")) throw Error("config: missing field 'domain'");
  if (!cfg.contains("spectrum")) throw Error("config: missing field 'spectrum'");
  if (!cfg.contains("tasks") || !cfg.at("tasks").is_array()) throw Error("config: field 'tasks' must be an array");
  if (cfg.contains("tolerances"))
    detail::expect_fields(cfg.at("tolerances"), "tolerances", {"orthobasis", "tight_frame"});
  const DomainSpec d = domain_from_json(cfg.at("domain"));
  const SpectrumSpec s = spectrum_from_json(cfg.at("spectrum"));
  if (static_cast<std::size_t>(dimension(d)) != dimension(s))
    throw Error("config: domain and spectrum dimensions differ");

  Report rep;
  rep.doc = detail::start_doc("config");
  rep.doc["inputs"] = Json{{"domain", to_json(d)}, {"spectrum", to_json(s)}, {"config", cfg}};
  Json tasks = Json::array();
  std::optional<FrameEstimate> frame;
  for (const auto& task : cfg.at("tasks")) {
    Json entry{{"type", task.is_object() && task.contains("type") ? task.at("type") : Json("?")}};
    try {
      entry["status"] = "ok";
      entry["result"] = detail::run_task(task, d, s, cfg, rep, frame);
    } catch (const std::exception& e) {
      entry["status"] = "error";
      entry["error"] = e.what();
      rep.checks.push_back({"task " + entry["type"].dump() + " completed", 0.0, 1.0, "error", false});
    }
    tasks.push_back(std::move(entry));
  }
  rep.doc["results"] = Json{{"tasks", tasks}};
  rep.doc["checks"] = detail::checks_json(rep.checks);
  rep.doc["passed"] = rep.passed();
  return rep;
}

inline Report run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open " + path);
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("config " + path + ": " + e.what());
  }
  return run_config_json(cfg);
}

// ---------------------------------------------------------------------------
// Output

/// Shortest decimal that round-trips.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv(const std::vector<CsvRow>& rows, const std::string& key_name) {
  std::string out = key_name + ",value,bound\n";
  for (const auto& r : rows) out += format_number(r.key) + "," + format_number(r.value) + "," + format_number(r.bound) + "\n";
  return out;
}

inline std::string table(const Report& rep) {
  std::ostringstream os;
  std::size_t width = 10;
  for (const auto& c : rep.checks) width = std::max(width, c.name.size());
  os << std::left;
  os.width(static_cast<std::streamsize>(width));
  os << "check" << "  " << "value" << std::string(20, ' ') << "limit" << std::string(23, ' ') << "result\n";
  for (const auto& c : rep.checks) {
    os.width(static_cast<std::streamsize>(width));
    os << c.name << "  ";
    os.width(25);
    os << format_number(c.value);
    os.width(28);
    os << (c.relation + " " + format_number(c.limit));
    os << (c.passed ? "PASS" : "FAIL") << "\n";
  }
  return os.str();
}

}  // namespace gapbound
