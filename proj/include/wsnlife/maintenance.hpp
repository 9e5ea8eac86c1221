#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "wsnlife/construction.hpp"
#include "wsnlife/core.hpp"

namespace wsnlife {

enum class TriggerKind { Time, Energy };

inline std::string_view to_string(TriggerKind k) { return k == TriggerKind::Time ? "time" : "energy"; }

struct TriggerPolicy {
  TriggerKind kind = TriggerKind::Energy;
  Step period = 500;          // T_M, steps
  double threshold = 0.6;     // θ_E, fraction of activation energy

  void validate() const {
    detail::require(period >= 1, "trigger.period", "must be >= 1");
    detail::require(std::isfinite(threshold) && threshold > 0.0 && threshold < 1.0, "trigger.threshold",
                    "must lie in (0, 1)");
  }
};

enum class StrategyKind { StaticRotation, DynamicRecreation, HybridRecreationRotation };

// D/H/S = dynamic/hybrid/static, G = global, ET/TT = energy/time triggered,
// Rec = recreation, Rot = rotation.
enum class TmProtocol { None, DGETRec, HGETRecRot, SGETRot, DGTTRec, HGTTRecRot, SGTTRot };

inline constexpr std::array<TmProtocol, 6> kAllTmProtocols = {
    TmProtocol::DGETRec, TmProtocol::HGETRecRot, TmProtocol::SGETRot,
    TmProtocol::DGTTRec, TmProtocol::HGTTRecRot, TmProtocol::SGTTRot};

inline std::string_view to_string(TmProtocol tm) {
  switch (tm) {
    case TmProtocol::None: return "None";
    case TmProtocol::DGETRec: return "DGETRec";
    case TmProtocol::HGETRecRot: return "HGETRecRot";
    case TmProtocol::SGETRot: return "SGETRot";
    case TmProtocol::DGTTRec: return "DGTTRec";
    case TmProtocol::HGTTRecRot: return "HGTTRecRot";
    case TmProtocol::SGTTRot: return "SGTTRot";
  }
  return "?";
}

inline std::optional<TmProtocol> parse_tm(std::string_view name) {
  if (name == "None") return TmProtocol::None;
  for (TmProtocol tm : kAllTmProtocols)
    if (to_string(tm) == name) return tm;
  return std::nullopt;
}

inline std::optional<TriggerKind> trigger_family(TmProtocol tm) {
  switch (tm) {
    case TmProtocol::None: return std::nullopt;
    case TmProtocol::DGETRec:
    case TmProtocol::HGETRecRot:
    case TmProtocol::SGETRot: return TriggerKind::Energy;
    default: return TriggerKind::Time;
  }
}

inline std::optional<StrategyKind> strategy_of(TmProtocol tm) {
  switch (tm) {
    case TmProtocol::None: return std::nullopt;
    case TmProtocol::DGETRec:
    case TmProtocol::DGTTRec: return StrategyKind::DynamicRecreation;
    case TmProtocol::HGETRecRot:
    case TmProtocol::HGTTRecRot: return StrategyKind::HybridRecreationRotation;
    case TmProtocol::SGETRot:
    case TmProtocol::SGTTRot: return StrategyKind::StaticRotation;
  }
  return std::nullopt;
}

struct MaintenanceState {
  StrategyKind kind = StrategyKind::DynamicRecreation;
  TriggerPolicy trigger;
  std::vector<Topology> rotation_set;
  std::size_t cursor = 0;
  std::size_t rotation_k = 3;
};

enum class MaintenanceAction { Rotated, Recreated, Retained };

inline std::string_view to_string(MaintenanceAction a) {
  switch (a) {
    case MaintenanceAction::Rotated: return "Rotated";
    case MaintenanceAction::Recreated: return "Recreated";
    case MaintenanceAction::Retained: return "Retained";
  }
  return "?";
}

inline bool should_trigger(const TriggerPolicy& policy, const NetworkState& state) {
  const Topology& t = state.topology;
  if (policy.kind == TriggerKind::Time)
    return state.time >= t.activation_time && state.time - t.activation_time >= policy.period;

  for (NodeId id : t.active) {
    const Node& n = state.node(id);
    if (!n.alive()) return true;
    if (id == kSinkId) continue;
    const auto snap = t.activation_energy.find(id);
    if (snap != t.activation_energy.end() && n.energy < policy.threshold * snap->second) return true;
  }
  return false;
}

// Drops dead members and anything whose parent chain to the root passes
// through one. What remains is still a valid tree.
inline Topology trim_to_alive(Topology t, const NetworkState& state) {
  if (t.active.empty()) return t;
  std::map<NodeId, bool> attached;
  attached[t.root] = true;
  auto resolve = [&](auto&& self, NodeId id) -> bool {
    if (auto it = attached.find(id); it != attached.end()) return it->second;
    attached[id] = false;  // provisional, breaks cycles
    const auto p = t.parent.find(id);
    const bool ok = state.alive(id) && p != t.parent.end() && self(self, p->second);
    attached[id] = ok;
    return ok;
  };
  for (auto it = t.parent.begin(); it != t.parent.end();) {
    if (!resolve(resolve, it->first)) {
      t.active.erase(it->first);
      t.coverage_promoted.erase(it->first);
      t.activation_energy.erase(it->first);
      it = t.parent.erase(it);
    } else {
      ++it;
    }
  }
  return t;
}

// Installs `t` as the running topology: trims dead members, stamps the
// activation time and energy snapshot, and rewrites node roles.
inline void activate(NetworkState& state, Topology t) {
  t = trim_to_alive(std::move(t), state);
  t.activation_time = state.time;
  t.activation_energy.clear();
  for (NodeId id : t.active) t.activation_energy[id] = state.node(id).energy;
  for (Node& n : state.nodes) {
    if (n.id == kSinkId) {
      n.role = Role::Sink;
    } else {
      n.role = (n.alive() && t.is_active(n.id)) ? Role::Active : Role::Sleeping;
    }
  }
  state.topology = std::move(t);
}

// Every non-sink active member is alive.
inline bool usable(const Topology& t, const NetworkState& state) {
  if (t.active.empty()) return false;
  return std::all_of(t.active.begin(), t.active.end(),
                     [&](NodeId id) { return id == kSinkId || state.alive(id); });
}

// Builds k topologies, excluding previously used relays from later runs.
// A run that reaches fewer than half of the alive nodes under exclusion is
// redone without it. Construction energy is charged here, once per run.
inline std::vector<Topology> precompute_rotation_set(NetworkState& state, TcProtocol tc, std::size_t k,
                                                     const ConstructionParams& params) {
  if (k < 1) throw ConfigError("rotation_k", "must be >= 1");
  std::vector<Topology> out;
  std::set<NodeId> exclude;
  for (std::size_t i = 0; i < k; ++i) {
    auto result = build_topology(tc, state, params, exclude);
    if (!exclude.empty() && 2 * result.topology.reached() < state.alive_count())
      result = build_topology(tc, state, params, {});
    apply_charge(state, result.charge);
    for (NodeId a : result.topology.active)
      if (a != kSinkId) exclude.insert(a);
    out.push_back(std::move(result.topology));
  }
  return out;
}

struct MaintenanceOutcome {
  MaintenanceAction action;
  Topology topology;
};

namespace detail {

inline MaintenanceOutcome recreate(NetworkState& state, TcProtocol tc, const ConstructionParams& params) {
  auto result = build_topology(tc, state, params, {});
  apply_charge(state, result.charge);
  activate(state, std::move(result.topology));
  return {MaintenanceAction::Recreated, state.topology};
}

// Next usable rotation entry after the cursor, wrapping around to the
// cursor itself last.
inline std::optional<std::size_t> next_usable(const MaintenanceState& m, const NetworkState& state) {
  const std::size_t n = m.rotation_set.size();
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t idx = (m.cursor + step) % n;
    if (usable(m.rotation_set[idx], state)) return idx;
  }
  return std::nullopt;
}

}  // namespace detail

inline MaintenanceOutcome maintain(MaintenanceState& m, NetworkState& state, TcProtocol tc,
                                   const ConstructionParams& params) {
  if (!state.alive(kSinkId)) throw std::logic_error("maintenance impossible: sink is not alive");

  if (m.kind == StrategyKind::DynamicRecreation) return detail::recreate(state, tc, params);

  if (const auto idx = detail::next_usable(m, state)) {
    m.cursor = *idx;
    activate(state, m.rotation_set[*idx]);
    return {MaintenanceAction::Rotated, state.topology};
  }

  if (m.kind == StrategyKind::HybridRecreationRotation) {
    auto outcome = detail::recreate(state, tc, params);
    m.rotation_set = {outcome.topology};
    m.cursor = 0;
    return outcome;
  }

  activate(state, state.topology);
  return {MaintenanceAction::Retained, state.topology};
}

}  // namespace wsnlife
