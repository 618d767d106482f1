#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qcdft/gate.hpp"
#include "qcdft/lpa.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>
#endif

namespace qcdft {

/// How a rule treats two-qubit participations while scanning a qubit's gate
/// history. "Ignored" events are skipped as if the step were empty; visible
/// events enter the sequence as their gate kind (roles are erased) and so
/// either match a CX/CZ pattern entry or break the pattern.
enum class TwoQubitVisibility {
  IgnoreAll,            // CX and CZ participations are invisible
  IgnoreCnotRoles,      // CX invisible (either role), CZ visible
  IgnoreCzControlOnly,  // CZ-control invisible, CZ-target and CX visible
  ExplicitCz,           // everything visible
};

inline std::string_view visibility_name(TwoQubitVisibility v) {
  switch (v) {
    case TwoQubitVisibility::IgnoreAll: return "ignore-all";
    case TwoQubitVisibility::IgnoreCnotRoles: return "ignore-cnot-roles";
    case TwoQubitVisibility::IgnoreCzControlOnly: return "ignore-cz-control-only";
    case TwoQubitVisibility::ExplicitCz: return "explicit-cz";
  }
  return "?";
}

/// One correction: when the visibility-filtered gate history of a qubit ends
/// (at the current step, no later than s_max) with `pattern`, the qubit's SQP
/// is overwritten with p_out. Patterns read earliest gate first.
struct MgaRule {
  std::vector<GateKind> pattern;
  double p_out = 0.0;
  int s_max = 0;
  TwoQubitVisibility visibility = TwoQubitVisibility::ExplicitCz;
  // Whether p_out is the eq-9-style product of the pattern's single-qubit
  // subsequence (as opposed to an empirically chosen correction value).
  bool from_sequence_product = true;
};

struct MgaFunctional {
  std::string name;
  std::vector<MgaRule> rules;
};

/// |<1| U_latest ... U_earliest |0>|^2 for a single-qubit gate sequence given
/// earliest first. The earliest gate is applied to |0> first; this order is
/// what reproduces 0.146447 for H-T-H and distinguishes SY-T-SX from SX-T-SY.
inline double mga_value(const std::vector<Gate>& gates) {
  if (gates.empty()) throw std::invalid_argument("mga_value: empty sequence");
  Eigen::Vector2cd state;
  state << 1.0, 0.0;
  for (const Gate& g : gates) {
    if (is_two_qubit(g.kind)) throw std::invalid_argument("mga_value: two-qubit gate");
    state = (gate_matrix_1q<double>(g) * state).eval();
  }
  return std::norm(state[1]);
}

/// Convenience for non-parametric sequences; CX/CZ entries are dropped (they
/// contribute no single-qubit factor to the product).
inline double mga_value(const std::vector<GateKind>& kinds) {
  std::vector<Gate> gates;
  gates.reserve(kinds.size());
  for (GateKind k : kinds) {
    if (is_two_qubit(k)) continue;
    gates.push_back(Gate::single(k, 0));
  }
  return mga_value(gates);
}

namespace detail {

inline void check_rules(const MgaFunctional& f) {
  for (std::size_t i = 0; i < f.rules.size(); ++i) {
    const MgaRule& r = f.rules[i];
    if (r.pattern.empty()) throw std::invalid_argument("MGA rule with empty pattern");
    if (r.pattern.size() > 6) throw std::invalid_argument("MGA patterns are capped at 6 gates");
    if (!(r.p_out >= 0.0 && r.p_out <= 1.0)) {
      throw std::invalid_argument("MGA rule p_out outside [0, 1]");
    }
    if (r.s_max < 1) throw std::invalid_argument("MGA rule s_max must be >= 1");
    for (std::size_t j = 0; j < i; ++j) {
      if (f.rules[j].pattern == r.pattern) {
        throw std::invalid_argument("duplicate MGA rule pattern");
      }
    }
  }
}

}  // namespace detail

/// Ready-made functionals. MGA3 corrects the H-H and H-T-H error sequences of
/// Clifford+T circuits with CNOT participations ignored. MGA2 corrects
/// repeated square-root-Pauli pairs with CZ-control participations ignored.
/// MGA6 is the extended table for the T/sqrt-Pauli/CZ family: sequence-product
/// values where the correction is a pure single-qubit product, and the
/// calibrated values 0.75 / 0.5 for the T-leading and CZ-bracketed sequences.
inline MgaFunctional builtin_functional(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  using K = GateKind;
  using V = TwoQubitVisibility;
  auto seq_rule = [](std::vector<GateKind> pattern, int s_max, V vis) {
    MgaRule r{std::move(pattern), 0.0, s_max, vis, true};
    r.p_out = mga_value(r.pattern);
    return r;
  };
  auto fixed_rule = [](std::vector<GateKind> pattern, double p_out, int s_max, V vis) {
    return MgaRule{std::move(pattern), p_out, s_max, vis, false};
  };

  MgaFunctional f;
  if (key == "mga3") {
    f.name = "MGA3";
    f.rules = {
        seq_rule({K::H, K::H}, 7, V::IgnoreCnotRoles),
        seq_rule({K::H, K::T, K::H}, 7, V::IgnoreCnotRoles),
    };
  } else if (key == "mga2") {
    f.name = "MGA2";
    f.rules = {
        seq_rule({K::SX, K::SX}, 7, V::IgnoreCzControlOnly),
        seq_rule({K::SY, K::SY}, 7, V::IgnoreCzControlOnly),
    };
  } else if (key == "mga6") {
    f.name = "MGA6";
    f.rules = {
        seq_rule({K::SX, K::SX}, 6, V::ExplicitCz),
        seq_rule({K::SY, K::SY}, 6, V::ExplicitCz),
        seq_rule({K::SX, K::CZ, K::SX}, 6, V::ExplicitCz),
        seq_rule({K::SY, K::CZ, K::SY}, 6, V::ExplicitCz),
        seq_rule({K::SY, K::T, K::SX}, 8, V::IgnoreAll),
        seq_rule({K::SY, K::T, K::SY}, 8, V::IgnoreAll),
        seq_rule({K::SX, K::T, K::SX}, 8, V::IgnoreAll),
        seq_rule({K::SX, K::T, K::SY}, 8, V::IgnoreAll),
        fixed_rule({K::T, K::SY, K::T, K::SX}, 0.75, 10, V::IgnoreAll),
        fixed_rule({K::T, K::SX, K::T, K::SY}, 0.75, 10, V::IgnoreAll),
        fixed_rule({K::CZ, K::SX, K::T, K::CZ, K::SX}, 0.5, 10, V::ExplicitCz),
        fixed_rule({K::CZ, K::SX, K::T, K::CZ, K::SY}, 0.5, 10, V::ExplicitCz),
        fixed_rule({K::CZ, K::SY, K::T, K::CZ, K::SX}, 0.5, 10, V::ExplicitCz),
        fixed_rule({K::CZ, K::SY, K::T, K::CZ, K::SY}, 0.5, 10, V::ExplicitCz),
        seq_rule({K::SY, K::CZ, K::SX, K::T, K::CZ, K::SX}, 10, V::ExplicitCz),
        seq_rule({K::SX, K::CZ, K::SY, K::T, K::CZ, K::SX}, 10, V::ExplicitCz),
        seq_rule({K::SX, K::CZ, K::SY, K::T, K::CZ, K::SY}, 10, V::ExplicitCz),
    };
  } else {
    throw std::invalid_argument("unknown MGA functional '" + std::string(name) + "'");
  }
  detail::check_rules(f);
  return f;
}

/// Loads {"name": ..., "rules": [{"pattern": ["sx","cz","sx"], "p_out": 1.0 |
/// "auto", "s_max": 6, "visibility": "explicit-cz"}, ...]}. "auto" evaluates
/// the pattern's single-qubit subsequence product.
inline MgaFunctional functional_from_json(const nlohmann::json& doc) {
  MgaFunctional f;
  f.name = doc.value("name", std::string("custom"));
  if (!doc.contains("rules") || !doc["rules"].is_array()) {
    throw std::invalid_argument("functional JSON needs a 'rules' array");
  }
  for (const auto& jr : doc["rules"]) {
    MgaRule r;
    for (const auto& jp : jr.at("pattern")) {
      auto kind = gate_kind_from_name(jp.get<std::string>());
      if (!kind) {
        throw std::invalid_argument("unknown gate name in pattern: " +
                                    jp.get<std::string>());
      }
      r.pattern.push_back(*kind);
    }
    r.s_max = jr.at("s_max").get<int>();
    const std::string vis = jr.value("visibility", std::string("explicit-cz"));
    if (vis == "ignore-all") {
      r.visibility = TwoQubitVisibility::IgnoreAll;
    } else if (vis == "ignore-cnot-roles") {
      r.visibility = TwoQubitVisibility::IgnoreCnotRoles;
    } else if (vis == "ignore-cz-control-only") {
      r.visibility = TwoQubitVisibility::IgnoreCzControlOnly;
    } else if (vis == "explicit-cz") {
      r.visibility = TwoQubitVisibility::ExplicitCz;
    } else {
      throw std::invalid_argument("unknown visibility '" + vis + "'");
    }
    const auto& jv = jr.at("p_out");
    if (jv.is_string() && jv.get<std::string>() == "auto") {
      r.p_out = mga_value(r.pattern);
      r.from_sequence_product = true;
    } else {
      r.p_out = jv.get<double>();
      r.from_sequence_product = false;
    }
    f.rules.push_back(std::move(r));
  }
  detail::check_rules(f);
  return f;
}

namespace detail {

enum class MgaRole : std::uint8_t { None, Control, Target };

struct MgaEvent {
  std::int32_t step;
  GateKind kind;
  MgaRole role;
};

inline bool event_visible(TwoQubitVisibility v, const MgaEvent& e) {
  if (is_single_qubit(e.kind)) return true;
  switch (v) {
    case TwoQubitVisibility::IgnoreAll:
      return false;
    case TwoQubitVisibility::IgnoreCnotRoles:
      return e.kind != GateKind::CX;
    case TwoQubitVisibility::IgnoreCzControlOnly:
      return !(e.kind == GateKind::CZ && e.role == MgaRole::Control);
    case TwoQubitVisibility::ExplicitCz:
      return true;
  }
  return true;
}

/// Trailing-match test: the newest visible event must sit at the current step
/// and the last |pattern| visible events must equal the pattern.
inline bool rule_matches(const MgaRule& rule, const std::vector<MgaEvent>& history,
                         int step) {
  if (step > rule.s_max) return false;
  std::size_t remaining = rule.pattern.size();
  bool newest = true;
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (!event_visible(rule.visibility, *it)) continue;
    if (newest) {
      if (it->step != step) return false;
      newest = false;
    }
    if (it->kind != rule.pattern[remaining - 1]) return false;
    if (--remaining == 0) return true;
  }
  return false;
}

template <typename AfterStep>
void evolve_mga_impl(const Circuit& c, const MgaFunctional& f, SqpVector& p,
                     AfterStep&& after_step) {
  check_evolve_args(c, p);
  check_rules(f);
  std::vector<std::vector<MgaEvent>> history(c.n_qubits);
  std::vector<char> corrected(c.n_qubits, 0);
  std::vector<std::int32_t> touched;
  for (int s = 1; s <= c.depth(); ++s) {
    touched.clear();
    for (const Gate& g : c.steps[s - 1]) {
      if (is_single_qubit(g.kind)) {
        history[g.q0].push_back({s, g.kind, MgaRole::None});
        touched.push_back(g.q0);
      } else {
        history[g.q0].push_back({s, g.kind, MgaRole::Control});
        history[g.q1].push_back({s, g.kind, MgaRole::Target});
        touched.push_back(g.q0);
        touched.push_back(g.q1);
      }
    }
    lpa_apply_step(c.steps[s - 1], p);
    // Corrections overwrite the LPA value once a recognized sequence completes
    // at this step; each qubit is corrected at most once per evolution, and
    // the longest matching pattern wins.
    for (std::int32_t q : touched) {
      if (corrected[q]) continue;
      const MgaRule* best = nullptr;
      for (const MgaRule& rule : f.rules) {
        if (best && rule.pattern.size() <= best->pattern.size()) continue;
        if (rule_matches(rule, history[q], s)) best = &rule;
      }
      if (best) {
        p[q] = best->p_out;
        corrected[q] = 1;
      }
    }
    after_step(s, p);
  }
}

}  // namespace detail

/// LPA evolution plus one-shot sequence corrections (trajectory form).
inline SqpTrajectory evolve_mga(const Circuit& c, const MgaFunctional& f, SqpVector p0) {
  SqpTrajectory traj;
  traj.reserve(c.depth() + 1);
  traj.push_back(p0);
  detail::evolve_mga_impl(c, f, p0, [&](int, const SqpVector& p) { traj.push_back(p); });
  return traj;
}

inline SqpVector evolve_mga_final(const Circuit& c, const MgaFunctional& f, SqpVector p0) {
  detail::evolve_mga_impl(c, f, p0, [](int, const SqpVector&) {});
  return p0;
}

}  // namespace qcdft
