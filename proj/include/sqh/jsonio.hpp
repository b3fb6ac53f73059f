#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqh/classify.hpp"
#include "sqh/melnikov.hpp"
#include "sqh/normal_form.hpp"
#include "sqh/phaseflow.hpp"

namespace sqh {

using nlohmann::json;

// Polynomials travel as [["coeff", i, j], ...] with exact rational
// coefficient strings; a bare string is parsed with the term grammar.
inline json polynomial_to_json(const Polynomial& f) {
  json out = json::array();
  for (const auto& [mono, c] : f.terms()) out.push_back({to_string(c), mono.i, mono.j});
  return out;
}

inline Polynomial polynomial_from_json(const json& j) {
  if (j.is_string()) return parse_polynomial(j.get<std::string>());
  if (!j.is_array()) throw Error("polynomial JSON must be an array of [num, i, j] or a string");
  Polynomial f;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 3)
      throw Error("polynomial term must be [num, i, j]");
    Rational c;
    if (entry[0].is_string()) c = parse_rational(entry[0].get<std::string>());
    else if (entry[0].is_number_integer()) c = Rational(entry[0].get<long long>());
    else if (entry[0].is_number_float()) {
      // decimals arrive as text to stay exact; accept small integral floats
      const double v = entry[0].get<double>();
      if (v != static_cast<long long>(v))
        throw Error("non-integral numeric coefficient: pass it as a string");
      c = Rational(static_cast<long long>(v));
    } else {
      throw Error("coefficient must be a string or integer");
    }
    f.add_term(c, entry[1].get<int>(), entry[2].get<int>());
  }
  return f;
}

struct SystemInput {
  Polynomial P, Q;
  WeightVector w;
};

inline SystemInput system_from_json(const json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("q") || !j.contains("P") || !j.contains("Q"))
    throw Error("system JSON must carry p, q, P, Q");
  SystemInput in;
  in.w = WeightVector(j.at("p").get<int>(), j.at("q").get<int>());
  in.P = polynomial_from_json(j.at("P"));
  in.Q = polynomial_from_json(j.at("Q"));
  return in;
}

inline json system_to_json(const SemiQHSystem& s) {
  return json{{"p", s.w.p},      {"q", s.w.q},
              {"P", polynomial_to_json(s.P)}, {"Q", polynomial_to_json(s.Q)},
              {"m", s.m},        {"n", s.n},
              {"swapped_xy", s.swapped_xy}};
}

inline json normal_form_to_json(const NormalForm& nf) {
  json a = json::array(), b = json::array();
  for (const auto& c : nf.a) a.push_back(to_string(c));
  for (const auto& c : nf.b) b.push_back(to_string(c));
  return json{{"p", nf.w.p}, {"q", nf.w.q}, {"r1", nf.r1},   {"r2", nf.r2},
              {"l1", nf.l1}, {"l2", nf.l2}, {"m", nf.m},     {"n", nf.n},
              {"a", a},      {"b", b},      {"parity_case", to_string(nf.parity_case)}};
}

inline json screen_verdict_to_json(const ScreenVerdict& v) {
  if (const auto* npo = std::get_if<NoPeriodicOrbit>(&v)) {
    return json{{"verdict", "no-periodic-orbit"},
                {"code", npo->code},
                {"detail", npo->detail},
                {"witness", npo->witness}};
  }
  const auto& nf = std::get<NormalForm>(v);
  return json{{"verdict", "normal-form"}, {"normal_form", normal_form_to_json(nf)}};
}

inline json perturbation_to_json(const PerturbationSpec& p) {
  return json{{"a", p.a}, {"b", p.b}, {"epsilon", p.epsilon}};
}

inline PerturbationSpec perturbation_from_json(const json& j) {
  PerturbationSpec p;
  if (j.contains("a")) p.a = j.at("a").get<std::vector<double>>();
  if (j.contains("b")) p.b = j.at("b").get<std::vector<double>>();
  if (j.contains("epsilon")) p.epsilon = j.at("epsilon").get<double>();
  return p;
}

inline json abelian_to_json(const AbelianForm& af) {
  return json{{"mu_odd", af.mu},
              {"nu_odd", af.nu},
              {"exponent_step", af.exponent_step},
              {"base_power", af.base_power},
              {"xi_power", af.xi_power},
              {"F_coeffs", af.F}};
}

inline json cycle_report_to_json(const CycleReport& r) {
  json zeros = json::array();
  for (const auto& z : r.zeros)
    zeros.push_back(json{{"xi", z.xi}, {"rho", z.rho}, {"simple", z.simple}});
  json confirmed = json::array();
  for (const auto& c : r.confirmed)
    confirmed.push_back(json{{"rho_predicted", c.rho_predicted},
                             {"rho_observed", c.rho_observed},
                             {"residual", c.residual},
                             {"confirmed", c.confirmed}});
  return json{{"lower_bound", r.lower_bound},
              {"zero_count", r.zero_count},
              {"zeros", zeros},
              {"identically_zero", r.identically_zero},
              {"ill_conditioned", r.ill_conditioned},
              {"confirmed", confirmed}};
}

inline json center_verdict_to_json(const CenterVerdict& v) {
  json out{{"kappa", v.kappa}, {"cyclicity", v.cyclicity}, {"code", v.code}};
  switch (v.kind) {
    case CenterVerdict::Kind::Center:
      out["kind"] = "center";
      out["reason"] = v.reason == CenterVerdict::CenterReason::Symmetry ? "symmetry"
                                                                        : "odd-coeffs-vanish";
      break;
    case CenterVerdict::Kind::WeakFocus:
      out["kind"] = "weak-focus";
      out["order_index"] = v.order_index;
      out["stability_sign"] = v.stability_sign;
      out["producible_cycles"] = v.producible_cycles;
      out["leading_coefficient"] = v.leading_coefficient;
      out["divergence_integral"] = v.divergence_value;
      break;
    case CenterVerdict::Kind::Undetermined:
      out["kind"] = "undetermined";
      break;
  }
  return out;
}

inline json local_type_to_json(const LocalType& t) {
  return json{{"kind", to_string(t.kind)}, {"code", t.code}, {"witness", t.witness}};
}

inline json infinity_verdict_to_json(const InfinityVerdict& v) {
  json out{{"mu", v.mu}, {"cyclicity", v.cyclicity}, {"code", v.code}};
  if (v.kind == InfinityVerdict::Kind::CenterAtInfinity) {
    out["kind"] = "center-at-infinity";
  } else {
    out["kind"] = "focus-at-infinity";
    out["order_index"] = v.order_index;
    out["stability_sign"] = v.stability_sign;
    out["bifurcating_orbits"] = v.bifurcating_orbits;
  }
  return out;
}

// FNV-1a, used to stamp reports with a deterministic configuration hash.
inline std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sqh
