#pragma once
//
// Max-of-affine lower bounds for l0 in the coupling sense: each piece is
// x -> c(x, y_i) - offset_i with offset_i the conjugate of y_i, so every
// piece minorizes l0 and the pointwise maximum is tight at the sample the
// piece was built from.  Models serialize to a small JSON text whose numbers
// carry 17 significant digits and therefore round-trip bit-faithfully.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "capra/capra.hpp"
#include "capra/format.hpp"
#include "capra/subdiff.hpp"
#include "capra/version.hpp"

namespace capra {

// invariant enforced at construction and at load: offset equals
// capra_conjugate(dual_point) within this relative tolerance
inline constexpr double kModelOffsetTol = 1e-12;

struct CapraAffinePiece {
  Vec dual_point;
  double offset;

  friend bool operator==(const CapraAffinePiece&,
                         const CapraAffinePiece&) = default;
};

struct CapraAffineModel {
  PExponent p;
  std::vector<CapraAffinePiece> pieces;
  std::vector<Vec> samples;  // the points the pieces are tight at

  std::size_t dim() const { return pieces.front().dual_point.dim(); }

  friend bool operator==(const CapraAffineModel&,
                         const CapraAffineModel&) = default;
};

namespace detail {

inline void check_model(const CapraAffineModel& m) {
  if (!m.p.is_intermediate())
    throw std::domain_error("lower-bound models require 1 < p < inf");
  if (m.pieces.empty() || m.samples.empty())
    throw std::invalid_argument("model: needs at least one piece and sample");
  const std::size_t d = m.pieces.front().dual_point.dim();
  for (const auto& pc : m.pieces) {
    if (pc.dual_point.dim() != d)
      throw std::invalid_argument("model: mixed piece dimensions");
    if (!nearly_equal(pc.offset, capra_conjugate(pc.dual_point, m.p),
                      kModelOffsetTol))
      throw std::invalid_argument(
          "model: piece offset disagrees with the conjugate of its dual point");
  }
  for (const auto& s : m.samples)
    if (s.dim() != d)
      throw std::invalid_argument("model: mixed sample dimensions");
}

}  // namespace detail

// One piece per sample: the dual point is a subgradient at the sample, the
// offset its conjugate, which makes the bound exact there.  Restricted to
// 1 < p < inf, where every point admits a subgradient.
inline CapraAffineModel build_model(const std::vector<Vec>& samples,
                                    const PExponent& p) {
  if (!p.is_intermediate())
    throw std::domain_error("lower-bound models require 1 < p < inf");
  if (samples.empty())
    throw std::invalid_argument("build_model: need at least one sample");
  CapraAffineModel m{p, {}, {}};
  const std::size_t d = samples.front().dim();
  for (const Vec& x : samples) {
    if (x.dim() != d)
      throw std::invalid_argument("build_model: mixed sample dimensions");
    Vec y = subdiff_witness(x, p);
    const double off = capra_conjugate(y, p);
    m.pieces.push_back(CapraAffinePiece{std::move(y), off});
    m.samples.push_back(x);
  }
  detail::check_model(m);
  return m;
}

// max_i (c(x, y_i) - offset_i); a lower bound on l0(x) everywhere, equal to
// it at the samples, and constant along open primal rays.
inline double eval_model(const CapraAffineModel& m, const Vec& x) {
  if (x.dim() != m.dim())
    throw std::invalid_argument("eval_model: dimension mismatch");
  double best = -kInf;
  for (const auto& pc : m.pieces)
    best = std::max(best,
                    capra_coupling(x, pc.dual_point, m.p) - pc.offset);
  return best;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

namespace detail {

inline std::string json_vec(const Vec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) s += ",";
    s += fmt_g17(v[i]);
  }
  s += "]";
  return s;
}

}  // namespace detail

// JSON text; the first line carries format, version, p and the library's
// comparison tolerance.
inline std::string model_to_text(const CapraAffineModel& m) {
  detail::check_model(m);
  std::string s;
  s += "{\"format\":\"capra-model\",\"version\":\"";
  s += kVersion;
  s += "\",\"p\":";
  s += fmt_g17(m.p.value());
  s += ",\"tol\":";
  s += fmt_g17(kDefaultTol);
  s += ",\n \"pieces\":[\n";
  for (std::size_t i = 0; i < m.pieces.size(); ++i) {
    s += "  {\"y\":" + detail::json_vec(m.pieces[i].dual_point) +
         ",\"offset\":" + fmt_g17(m.pieces[i].offset) + "}";
    if (i + 1 < m.pieces.size()) s += ",";
    s += "\n";
  }
  s += " ],\n \"samples\":[\n";
  for (std::size_t i = 0; i < m.samples.size(); ++i) {
    s += "  " + detail::json_vec(m.samples[i]);
    if (i + 1 < m.samples.size()) s += ",";
    s += "\n";
  }
  s += " ]\n}\n";
  return s;
}

inline CapraAffineModel model_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model: malformed JSON: ") +
                                e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "capra-model")
      throw std::invalid_argument("model: unrecognized format field");
    CapraAffineModel m{PExponent(j.at("p").get<double>()), {}, {}};
    for (const auto& pj : j.at("pieces")) {
      std::vector<double> e = pj.at("y").get<std::vector<double>>();
      m.pieces.push_back(
          CapraAffinePiece{Vec(std::move(e)), pj.at("offset").get<double>()});
    }
    for (const auto& sj : j.at("samples"))
      m.samples.push_back(Vec(sj.get<std::vector<double>>()));
    detail::check_model(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model: missing or mistyped field: ") +
                                e.what());
  }
}

}  // namespace capra
