#pragma once

// JSON round-trip for DomainSpec and SpectrumSpec, and encoders for the
// result structures. Field names match the C++ members.

#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapbound/bounds.hpp"
#include "gapbound/domains.hpp"
#include "gapbound/frames.hpp"
#include "gapbound/spectra.hpp"

namespace gapbound {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

/// Rejects keys outside `allowed`, naming the offending field.
inline void expect_fields(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error(where + ": unknown field '" + key + "'");
  }
}

template <class T>
T required(const Json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw Error(where + ": missing field '" + std::string(key) + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(where + ": field '" + std::string(key) + "' has the wrong type");
  }
}

template <class T>
T optional_field(const Json& j, const std::string& where, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return required<T>(j, where, key);
}

inline std::string type_tag(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type")) throw Error(where + ": missing field 'type'");
  return required<std::string>(j, where, "type");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Profiles and domains

inline Json to_json(const Profile& p) {
  if (const auto* s = std::get_if<Sawtooth>(&p))
    return Json{{"type", "Sawtooth"},
                {"tooth_count", s->tooth_count},
                {"amplitude", s->amplitude},
                {"shape", s->shape == ToothShape::Triangle ? "Triangle" : "Ramp"}};
  const auto& w = std::get<Weierstrass>(p);
  return Json{{"type", "Weierstrass"},
              {"gamma", w.gamma},
              {"base", w.base},
              {"depth", w.depth},
              {"amplitude", w.amplitude},
              {"samples_per_wavelength", w.samples_per_wavelength}};
}

inline Profile profile_from_json(const Json& j) {
  const std::string t = detail::type_tag(j, "profile");
  if (t == "Sawtooth") {
    detail::expect_fields(j, "Sawtooth", {"type", "tooth_count", "amplitude", "shape"});
    Sawtooth s;
    s.tooth_count = detail::optional_field(j, "Sawtooth", "tooth_count", s.tooth_count);
    s.amplitude = detail::optional_field(j, "Sawtooth", "amplitude", s.amplitude);
    const std::string shape = detail::optional_field<std::string>(j, "Sawtooth", "shape", "Ramp");
    if (shape == "Triangle")
      s.shape = ToothShape::Triangle;
    else if (shape == "Ramp")
      s.shape = ToothShape::Ramp;
    else
      throw Error("Sawtooth: field 'shape' must be Triangle or Ramp");
    return s;
  }
  if (t == "Weierstrass") {
    detail::expect_fields(j, "Weierstrass", {"type", "gamma", "base", "depth", "amplitude", "samples_per_wavelength"});
    Weierstrass w;
    w.gamma = detail::optional_field(j, "Weierstrass", "gamma", w.gamma);
    w.base = detail::optional_field(j, "Weierstrass", "base", w.base);
    w.depth = detail::optional_field(j, "Weierstrass", "depth", w.depth);
    w.amplitude = detail::optional_field(j, "Weierstrass", "amplitude", w.amplitude);
    w.samples_per_wavelength =
        detail::optional_field(j, "Weierstrass", "samples_per_wavelength", w.samples_per_wavelength);
    return w;
  }
  throw Error("profile: unknown type '" + t + "'");
}

inline Json to_json(const DomainSpec& d) {
  struct V {
    Json operator()(const Box& b) const { return Json{{"type", "Box"}, {"sides", b.sides}}; }
    Json operator()(const Disk& c) const {
      return Json{{"type", "Disk"}, {"radius", c.radius}, {"center", c.center}};
    }
    Json operator()(const GraphDomain& g) const { return Json{{"type", "GraphDomain"}, {"profile", to_json(g.profile)}}; }
    Json operator()(const ScaledDomain& s) const {
      return Json{{"type", "ScaledDomain"}, {"base", to_json(*s.base)}, {"t", s.t}};
    }
    Json operator()(const CantorMeasure4&) const { return Json{{"type", "CantorMeasure4"}}; }
  };
  return std::visit(V{}, d.shape);
}

inline DomainSpec domain_from_json(const Json& j) {
  const std::string t = detail::type_tag(j, "domain");
  if (t == "Box") {
    detail::expect_fields(j, "Box", {"type", "sides"});
    return make_box(detail::required<Vec>(j, "Box", "sides"));
  }
  if (t == "Disk") {
    detail::expect_fields(j, "Disk", {"type", "radius", "center"});
    return make_disk(detail::required<double>(j, "Disk", "radius"),
                     detail::optional_field<Vec>(j, "Disk", "center", {0.0, 0.0}));
  }
  if (t == "GraphDomain") {
    detail::expect_fields(j, "GraphDomain", {"type", "profile"});
    if (!j.contains("profile")) throw Error("GraphDomain: missing field 'profile'");
    return make_graph(profile_from_json(j.at("profile")));
  }
  if (t == "ScaledDomain") {
    detail::expect_fields(j, "ScaledDomain", {"type", "base", "t"});
    if (!j.contains("base")) throw Error("ScaledDomain: missing field 'base'");
    return make_scaled(domain_from_json(j.at("base")), detail::required<double>(j, "ScaledDomain", "t"));
  }
  if (t == "CantorMeasure4") {
    detail::expect_fields(j, "CantorMeasure4", {"type"});
    return make_cantor();
  }
  throw Error("domain: unknown type '" + t + "'");
}

// ---------------------------------------------------------------------------
// Spectra

inline Json to_json(const Cube& c) { return Json{{"center", c.center}, {"half_side", c.half_side}}; }

inline Cube cube_from_json(const Json& j, const std::string& where) {
  detail::expect_fields(j, where, {"center", "half_side"});
  return Cube{detail::required<Vec>(j, where, "center"), detail::required<double>(j, where, "half_side")};
}

inline Json to_json(const SpectrumSpec& s) {
  struct V {
    Json operator()(const DiagonalLattice& l) const { return Json{{"type", "DiagonalLattice"}, {"steps", l.steps}}; }
    Json operator()(const TranslatedLattice& l) const {
      return Json{{"type", "TranslatedLattice"}, {"base", Json{{"steps", l.base.steps}}}, {"offset", l.offset}};
    }
    Json operator()(const CantorDigits& c) const { return Json{{"type", "CantorDigits"}, {"max_digits", c.max_digits}}; }
    Json operator()(const Explicit& e) const {
      Json j{{"type", "Explicit"}, {"points", e.points}, {"dim", e.dim}};
      if (e.coverage) j["coverage"] = to_json(*e.coverage);
      return j;
    }
  };
  return std::visit(V{}, s.set);
}

inline SpectrumSpec spectrum_from_json(const Json& j) {
  const std::string t = detail::type_tag(j, "spectrum");
  if (t == "DiagonalLattice") {
    detail::expect_fields(j, "DiagonalLattice", {"type", "steps"});
    return make_lattice(detail::required<Vec>(j, "DiagonalLattice", "steps"));
  }
  if (t == "TranslatedLattice") {
    detail::expect_fields(j, "TranslatedLattice", {"type", "base", "offset"});
    if (!j.contains("base")) throw Error("TranslatedLattice: missing field 'base'");
    detail::expect_fields(j.at("base"), "TranslatedLattice.base", {"steps"});
    return make_translated_lattice(detail::required<Vec>(j.at("base"), "TranslatedLattice.base", "steps"),
                                   detail::required<Vec>(j, "TranslatedLattice", "offset"));
  }
  if (t == "CantorDigits") {
    detail::expect_fields(j, "CantorDigits", {"type", "max_digits"});
    return make_cantor_digits(detail::required<int>(j, "CantorDigits", "max_digits"));
  }
  if (t == "Explicit") {
    detail::expect_fields(j, "Explicit", {"type", "points", "dim", "coverage"});
    std::optional<Cube> cov;
    if (j.contains("coverage")) cov = cube_from_json(j.at("coverage"), "Explicit.coverage");
    return make_explicit(detail::required<std::vector<Vec>>(j, "Explicit", "points"),
                         detail::required<std::size_t>(j, "Explicit", "dim"), std::move(cov));
  }
  throw Error("spectrum: unknown type '" + t + "'");
}

// ---------------------------------------------------------------------------
// Results

inline Json to_json(const BoundaryDimension& b) {
  return Json{{"alpha", b.alpha},
              {"content", b.content},
              {"source", b.source == DimensionSource::Analytic ? "analytic" : "estimated"},
              {"residual_norm", b.residual_norm}};
}

inline Json to_json(const FrameEstimate& e) {
  return Json{{"A_hat", e.A_hat},
              {"B_hat", e.B_hat},
              {"lambda_truncation", to_json(e.lambda_truncation)},
              {"test_truncation", to_json(e.test_truncation)},
              {"outer_points", e.outer_points},
              {"test_points", e.test_points},
              {"retained_rank", e.retained_rank},
              {"n_tests", e.n_tests},
              {"method_lower", method_name(e.method_lower)},
              {"method_upper", method_name(e.method_upper)},
              {"tail_bound", e.tail_bound},
              {"captured_mass", e.captured_mass},
              {"gram_min_eig", e.gram_min_eig},
              {"seed", e.seed},
              {"caveat", e.caveat}};
}

inline Json to_json(const ShellReport& r) {
  Json sums = Json::array();
  for (const auto& e : r.sums)
    sums.push_back(Json{{"k", e.k}, {"sum", e.sum}, {"count", e.count}, {"vanishing", e.vanishing}});
  return Json{{"k_range", {r.k_lo, r.k_hi}},
              {"sums", sums},
              {"alpha", r.alpha},
              {"frame_upper", r.frame_upper},
              {"fitted_exponent", r.fitted_exponent},
              {"fit_intercept", r.fit_intercept},
              {"fit_residual", r.fit_residual},
              {"fitted_C", r.fitted_C},
              {"fitted_shells", r.fitted_shells}};
}

inline Json to_json(const EmptyCube& e) {
  return Json{{"empirical_side", e.side},
              {"witness_center", e.witness_center},
              {"search_resolution", e.resolution},
              {"certified", e.certified},
              {"saturated", e.saturated},
              {"analytic", e.analytic}};
}

inline Json to_json(const TightFrameResult& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows)
    rows.push_back(Json{{"name", r.name}, {"ratio", r.ratio}, {"defect", r.defect}, {"tail", r.tail}});
  return Json{{"r", t.r},
              {"L", t.L},
              {"target", t.target},
              {"lattice_points", t.lattice_points},
              {"rows", rows},
              {"max_defect", t.max_defect}};
}

inline Json to_json(const Lemma8Result& l) {
  Json rows = Json::array();
  for (const auto& r : l.rows)
    rows.push_back(Json{{"h", r.h},
                        {"one_sided", r.one_sided},
                        {"centered", r.centered},
                        {"ratio_one_sided", r.ratio_one_sided},
                        {"ratio_centered", r.ratio_centered}});
  return Json{{"rows", rows},
              {"C_one_sided", l.C_one_sided},
              {"C_centered", l.C_centered},
              {"content", l.content},
              {"within_content", l.within_content}};
}

inline Json to_json(const TailSum& t) {
  return Json{{"value", t.value},
              {"certified_remainder", t.certified_remainder},
              {"envelope_bound", t.envelope_bound},
              {"k0", t.k0},
              {"k_end", t.k_end},
              {"degenerate", t.degenerate}};
}

inline Json to_json(const TailIntegral& t) {
  return Json{{"value", t.value}, {"quadrature_error", t.quadrature_error}, {"bound", t.bound}};
}

inline Json to_json(const CentralCheck& c) {
  return Json{{"R", c.R},
              {"inside", c.inside},
              {"tail", c.tail},
              {"total", c.total},
              {"tail_bound", c.tail_bound},
              {"lower_bound", c.lower_bound},
              {"margin", c.margin},
              {"decomposition_defect", c.decomposition_defect}};
}

}  // namespace gapbound
