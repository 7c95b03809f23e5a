#pragma once

#include <json.hpp>

#include "saddlebounds/block_system.hpp"
#include "saddlebounds/bounds.hpp"
#include "saddlebounds/indicators.hpp"
#include "saddlebounds/minres.hpp"
#include "saddlebounds/spectrum.hpp"

// JSON interchange for the library types.  Serialization relies on the
// shortest round-trip representation of doubles, so parse(serialize(x)) == x.

namespace saddlebounds {

using nlohmann::json;

template <typename Scalar>
void to_json(json& j, const Interval<Scalar>& iv) {
  j = json::array({iv.lo, iv.hi});
}

template <typename Scalar>
void from_json(const json& j, Interval<Scalar>& iv) {
  iv.lo = j.at(0).get<Scalar>();
  iv.hi = j.at(1).get<Scalar>();
}

template <typename Scalar>
void to_json(json& j, const IndicatorSet<Scalar>& ind) {
  j = json{{"N", ind.N},
           {"alphaE", ind.alphaE},
           {"betaE", ind.betaE},
           {"alphaR", ind.alphaR},
           {"betaR", ind.betaR},
           {"rect_tail", ind.rect_tail}};
}

template <typename Scalar>
void from_json(const json& j, IndicatorSet<Scalar>& ind) {
  ind.N = j.at("N").get<int>();
  ind.alphaE = j.at("alphaE").get<std::vector<Scalar>>();
  ind.betaE = j.at("betaE").get<std::vector<Scalar>>();
  ind.alphaR = j.at("alphaR").get<std::vector<Scalar>>();
  ind.betaR = j.at("betaR").get<std::vector<Scalar>>();
  ind.rect_tail = j.value("rect_tail", false);
}

inline void to_json(json& j, const EndpointProvenance& p) {
  j = json{{"corner", p.corner}, {"degrees", p.degrees}};
}

inline void from_json(const json& j, EndpointProvenance& p) {
  p.corner = j.at("corner").get<std::string>();
  p.degrees = j.at("degrees").get<std::vector<int>>();
}

inline void to_json(json& j, const BoundsProvenance& p) {
  j = json{{"method", p.method},   {"neg_lb", p.neg_lb},     {"neg_ub", p.neg_ub},
           {"pos_lb", p.pos_lb},   {"pos_ub", p.pos_ub},     {"warnings", p.warnings},
           {"hulled", p.hulled}};
}

inline void from_json(const json& j, BoundsProvenance& p) {
  p.method = j.at("method").get<std::string>();
  p.neg_lb = j.at("neg_lb").get<EndpointProvenance>();
  p.neg_ub = j.at("neg_ub").get<EndpointProvenance>();
  p.pos_lb = j.at("pos_lb").get<EndpointProvenance>();
  p.pos_ub = j.at("pos_ub").get<EndpointProvenance>();
  p.warnings = j.value("warnings", std::vector<std::string>{});
  p.hulled = j.value("hulled", false);
}

template <typename Scalar>
void to_json(json& j, const EigenvalueBounds<Scalar>& b) {
  j = json{{"neg", b.neg}, {"pos", b.pos}, {"provenance", b.provenance}};
  if (b.extra) j["extra"] = *b.extra;
}

template <typename Scalar>
void from_json(const json& j, EigenvalueBounds<Scalar>& b) {
  b.neg = j.at("neg").get<Interval<Scalar>>();
  b.pos = j.at("pos").get<Interval<Scalar>>();
  if (j.contains("extra"))
    b.extra = j.at("extra").get<Interval<Scalar>>();
  else
    b.extra.reset();
  b.provenance = j.value("provenance", BoundsProvenance{});
}

template <typename Scalar>
void to_json(json& j, const SpectrumReport<Scalar>& r) {
  j = json{{"eigenvalues", r.eigenvalues},
           {"zero_gap", r.zero_gap},
           {"near_singular", r.near_singular}};
  if (r.extremal) j["extremal"] = *r.extremal;
}

template <typename Scalar>
void to_json(json& j, const ContainmentReport<Scalar>& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back(json{{"eigenvalue", e.eigenvalue}, {"inside", e.inside}, {"slack", e.slack}});
  j = json{{"pass", r.pass}, {"entries", entries}};
}

template <typename Scalar>
void to_json(json& j, const SolveReport<Scalar>& r) {
  j = json{{"iterations", r.iterations},
           {"converged", r.converged},
           {"breakdown", r.breakdown},
           {"wall_time_seconds", r.wall_time_seconds},
           {"relative_residual_history", r.residual_history}};
}

template <typename Scalar>
void to_json(json& j, const ValidationReport<Scalar>& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back(
        json{{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"detail", c.detail}});
  j = json{{"pass", r.pass}, {"checks", checks}};
}

}  // namespace saddlebounds
