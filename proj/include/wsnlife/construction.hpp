#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wsnlife/core.hpp"
#include "wsnlife/coverage.hpp"
#include "wsnlife/propagation.hpp"

namespace wsnlife {

enum class TcProtocol { A3, A3Cov };

inline std::string_view to_string(TcProtocol tc) { return tc == TcProtocol::A3 ? "A3" : "A3Cov"; }

inline std::optional<TcProtocol> parse_tc(std::string_view name) {
  if (name == "A3") return TcProtocol::A3;
  if (name == "A3Cov") return TcProtocol::A3Cov;
  return std::nullopt;
}

// Candidate score weights: M = w_E·(E_rem/E_init) + w_D·(d/R).
struct A3Params {
  double energy_weight = 0.5;
  double distance_weight = 0.5;

  void validate() const {
    using detail::require;
    require(energy_weight >= 0.0 && energy_weight <= 1.0, "a3.energy_weight", "must lie in [0, 1]");
    require(distance_weight >= 0.0 && distance_weight <= 1.0, "a3.distance_weight", "must lie in [0, 1]");
    require(std::abs(energy_weight + distance_weight - 1.0) <= 1e-9, "a3.distance_weight",
            "a3.energy_weight + a3.distance_weight must equal 1");
  }
};

struct ConstructionParams {
  RadioParams radio;
  EnergyParams energy;
  SensingParams sensing;
  A3Params a3;
};

struct MessageCount {
  std::uint32_t sent = 0;
  std::uint32_t received = 0;
  double joules = 0.0;

  friend bool operator==(const MessageCount&, const MessageCount&) = default;
};

// Control traffic a construction run would have exchanged, per node.
struct ConstructionCharge {
  std::vector<MessageCount> per_node;

  double total_joules() const {
    double sum = 0.0;
    for (const auto& m : per_node) sum += m.joules;
    return sum;
  }

  friend bool operator==(const ConstructionCharge&, const ConstructionCharge&) = default;
};

struct ConstructionResult {
  Topology topology;
  ConstructionCharge charge;
};

inline void apply_charge(NetworkState& state, const ConstructionCharge& charge) {
  for (std::size_t id = 0; id < charge.per_node.size(); ++id)
    if (charge.per_node[id].joules > 0.0) state.charge(static_cast<NodeId>(id), charge.per_node[id].joules);
}

// Demotes active non-root leaves that have no children and were not promoted
// for sensing coverage. A demoted node stays attached to its parent, so its
// parent keeps a child and one pass reaches the fixpoint.
inline Topology prune_childless(Topology t) {
  std::set<NodeId> has_child;
  for (const auto& [child, p] : t.parent) has_child.insert(p);
  for (auto it = t.active.begin(); it != t.active.end();) {
    const NodeId id = *it;
    if (id != t.root && !has_child.count(id) && !t.coverage_promoted.count(id)) {
      t.activation_energy.erase(id);
      it = t.active.erase(it);
    } else {
      ++it;
    }
  }
  return t;
}

namespace detail {

class A3Builder {
 public:
  A3Builder(const NetworkState& state, const ConstructionParams& params, const std::set<NodeId>& exclude)
      : state_(state),
        params_(params),
        visited_(state.size(), 0),
        eligible_(state.size(), 0) {
    for (const Node& n : state.nodes)
      eligible_[n.id] = n.alive() && n.id != kSinkId && !exclude.count(n.id);
    result_.charge.per_node.resize(state.size());
  }

  ConstructionResult build() {
    Topology& t = result_.topology;
    t.root = kSinkId;
    t.active.insert(kSinkId);
    visited_[kSinkId] = 1;
    queue_.push_back(kSinkId);

    for (;;) {
      while (!queue_.empty()) {
        const NodeId parent = queue_.front();
        queue_.pop_front();
        expand(parent);
      }
      // A sleeping leaf may be the only route to part of the network; wake
      // the lowest-id such leaf and keep growing from it.
      const auto relay = sleeping_gateway();
      if (!relay) break;
      t.active.insert(*relay);
      queue_.push_back(*relay);
    }
    t = prune_childless(std::move(t));
    return std::move(result_);
  }

 private:
  struct Candidate {
    NodeId id;
    double score;
    double hop;
  };

  // Whether `id` can pay its handshake with `from` and stay alive.
  bool affordable(NodeId id, double hop) const {
    const auto& e = params_.energy;
    const double bits = static_cast<double>(e.control_packet_bits);
    const double cost = rx_energy(e, bits) + tx_energy(e, bits, hop);
    return state_.node(id).energy - cost > state_.death_floor();
  }

  std::vector<Candidate> gather(NodeId parent) const {
    const Point from = state_.node(parent).position;
    const double R = params_.radio.comm_radius;
    std::vector<Candidate> out;
    for (const Node& n : state_.nodes) {
      if (!eligible_[n.id] || visited_[n.id]) continue;
      const double d = distance(from, n.position);
      if (d > R || !affordable(n.id, d)) continue;
      const double score = params_.a3.energy_weight * (n.energy / params_.energy.initial) +
                           params_.a3.distance_weight * (d / R);
      out.push_back({n.id, score, d});
    }
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
      return a.score > b.score || (a.score == b.score && a.id < b.id);
    });
    return out;
  }

  void expand(NodeId parent) {
    const auto candidates = gather(parent);
    if (candidates.empty()) return;

    const auto& e = params_.energy;
    const double bits = static_cast<double>(e.control_packet_bits);
    for (const auto& c : candidates) {
      visited_[c.id] = 1;
      auto& m = result_.charge.per_node[c.id];
      m.received += 1;
      m.sent += 1;
      m.joules += rx_energy(e, bits) + tx_energy(e, bits, c.hop);
    }

    Topology& t = result_.topology;
    std::vector<NodeId> appointed;
    for (const auto& c : candidates) {
      t.parent[c.id] = parent;
      const Point p = state_.node(c.id).position;
      const bool dominated = std::any_of(appointed.begin(), appointed.end(), [&](NodeId a) {
        return distance(state_.node(a).position, p) <= params_.radio.comm_radius;
      });
      if (!dominated) {
        appointed.push_back(c.id);
        t.active.insert(c.id);
        queue_.push_back(c.id);
      }
    }
  }

  std::optional<NodeId> sleeping_gateway() const {
    const Topology& t = result_.topology;
    for (const auto& [id, p] : t.parent) {
      if (t.is_active(id)) continue;
      const Point from = state_.node(id).position;
      for (const Node& n : state_.nodes) {
        if (!eligible_[n.id] || visited_[n.id]) continue;
        const double d = distance(from, n.position);
        if (d <= params_.radio.comm_radius && affordable(n.id, d)) return id;
      }
    }
    return std::nullopt;
  }

  const NetworkState& state_;
  const ConstructionParams& params_;
  std::vector<char> visited_;
  std::vector<char> eligible_;
  std::deque<NodeId> queue_;
  ConstructionResult result_;
};

inline void require_sink_alive(const NetworkState& state) {
  if (state.nodes.empty() || !state.alive(kSinkId))
    throw std::logic_error("topology construction impossible: sink is not alive");
}

}  // namespace detail

// Communication-coverage CDS tree grown from the sink. Charges are reported,
// not applied; see apply_charge.
inline ConstructionResult a3_construct(const NetworkState& state, const ConstructionParams& params,
                                       const std::set<NodeId>& exclude = {}) {
  detail::require_sink_alive(state);
  if (exclude.count(kSinkId)) throw std::invalid_argument("a3_construct: the sink cannot be excluded");
  return detail::A3Builder(state, params, exclude).build();
}

// A3 followed by promotion of sleeping tree members whose own position is not
// sensing-covered by the current active set (ascending id, greedy).
inline ConstructionResult a3cov_construct(const NetworkState& state, const ConstructionParams& params,
                                          const std::set<NodeId>& exclude = {}) {
  ConstructionResult result = a3_construct(state, params, exclude);
  Topology& t = result.topology;

  std::vector<Point> sensors;
  for (NodeId a : t.active) sensors.push_back(state.node(a).position);

  std::vector<NodeId> sleepers;
  for (const auto& [id, p] : t.parent)
    if (!t.is_active(id)) sleepers.push_back(id);

  const double R = params.radio.comm_radius;
  const double r = params.radio.sensing_radius;
  for (NodeId s : sleepers) {
    const Point pos = state.node(s).position;
    if (detection_probability(sensors, pos, params.sensing, r) >= params.sensing.p_min) continue;

    NodeId best = t.parent.at(s);
    double best_d = distance(state.node(best).position, pos);
    for (NodeId a : t.active) {
      const double d = distance(state.node(a).position, pos);
      if (d <= R && (d < best_d || (d == best_d && a < best))) {
        best = a;
        best_d = d;
      }
    }
    t.parent[s] = best;
    t.active.insert(s);
    t.coverage_promoted.insert(s);
    sensors.push_back(pos);
  }
  return result;
}

inline ConstructionResult build_topology(TcProtocol tc, const NetworkState& state,
                                         const ConstructionParams& params,
                                         const std::set<NodeId>& exclude = {}) {
  return tc == TcProtocol::A3 ? a3_construct(state, params, exclude)
                              : a3cov_construct(state, params, exclude);
}

}  // namespace wsnlife
