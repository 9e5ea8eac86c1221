#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wsnlife {

using NodeId = std::uint32_t;
using Step = std::uint64_t;

// Node 0 is always the sink.
inline constexpr NodeId kSinkId = 0;

// Remaining energy at or below this fraction of the initial budget counts as
// exhausted. Absorbs rounding residue from repeated subtraction.
inline constexpr double kDeathResidue = 1e-12;

// Raised for any invalid configuration value. `field` is the dotted config
// key that caused the failure (empty for file/syntax problems).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

namespace detail {

inline void require(bool ok, const char* field, const char* message) {
  if (!ok) throw ConfigError(field, message);
}

inline bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace detail

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct DeploymentArea {
  double width = 1074.0;
  double height = 660.0;

  void validate() const {
    detail::require(detail::finite_positive(width), "deployment.width", "must be > 0");
    detail::require(detail::finite_positive(height), "deployment.height", "must be > 0");
  }

  bool contains(Point p) const { return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height; }
  Point center() const { return {width / 2.0, height / 2.0}; }
};

struct RadioParams {
  double tx_power = 1.0;              // W
  double gain_tx = 1.0;
  double gain_rx = 1.0;
  double height_tx = 1.0;             // m
  double height_rx = 1.0;             // m
  double transceiver_constant = 1.0;
  double comm_radius = 100.0;         // m
  double sensing_radius = 20.0;       // m

  void validate() const {
    using detail::finite_positive;
    using detail::require;
    require(finite_positive(tx_power), "radio.tx_power", "must be > 0");
    require(finite_positive(gain_tx), "radio.gain_tx", "must be > 0");
    require(finite_positive(gain_rx), "radio.gain_rx", "must be > 0");
    require(finite_positive(height_tx), "radio.height_tx", "must be > 0");
    require(finite_positive(height_rx), "radio.height_rx", "must be > 0");
    require(finite_positive(transceiver_constant), "radio.transceiver_constant", "must be > 0");
    require(finite_positive(comm_radius), "radio.comm_radius", "must be > 0");
    require(finite_positive(sensing_radius), "radio.sensing_radius", "must be > 0");
  }
};

struct EnergyParams {
  double e_elec = 50e-9;              // J/bit
  double e_amp = 10e-12;              // J/bit/m^2
  double initial = 1.0;               // J per non-sink node
  std::uint64_t control_packet_bits = 128;
  std::uint64_t data_packet_bits = 1000;

  void validate() const {
    using detail::finite_positive;
    using detail::require;
    require(finite_positive(e_elec), "energy.e_elec", "must be > 0");
    require(finite_positive(e_amp), "energy.e_amp", "must be > 0");
    require(finite_positive(initial), "energy.initial", "must be > 0");
    require(control_packet_bits >= 1, "energy.control_packet_bits", "must be >= 1");
    require(data_packet_bits >= 1, "energy.data_packet_bits", "must be >= 1");
  }
};

struct SensingParams {
  double uncertainty_radius = 2.0;    // r_u, m
  double lambda = 0.5;
  double beta = 1.0;
  double p_min = 0.5;

  // The uncertainty band has to fit inside the sensing disk, so this needs r.
  void validate(double sensing_radius) const {
    using detail::require;
    require(std::isfinite(uncertainty_radius) && uncertainty_radius >= 0.0 &&
                uncertainty_radius < sensing_radius,
            "sensing.uncertainty_radius", "must satisfy 0 <= r_u < radio.sensing_radius");
    require(detail::finite_positive(lambda), "sensing.lambda", "must be > 0");
    require(detail::finite_positive(beta), "sensing.beta", "must be > 0");
    require(std::isfinite(p_min) && p_min > 0.0 && p_min < 1.0, "sensing.p_min",
            "must lie in (0, 1)");
  }
};

enum class Life { Alive, Dead };
enum class Role { Sink, Active, Sleeping };

struct Node {
  NodeId id = 0;
  Point position;
  double energy = 0.0;
  Life life = Life::Alive;
  Role role = Role::Sleeping;

  bool alive() const { return life == Life::Alive; }
};

// Reduced topology: a tree rooted at the sink. Internal nodes (and nodes
// promoted for sensing coverage) are active; the remaining tree members are
// sleeping leaves.
struct Topology {
  NodeId root = kSinkId;
  std::set<NodeId> active;
  std::map<NodeId, NodeId> parent;     // child -> parent; root has no entry
  std::set<NodeId> coverage_promoted;
  Step activation_time = 0;
  std::map<NodeId, double> activation_energy;

  bool is_active(NodeId id) const { return active.count(id) != 0; }
  bool contains(NodeId id) const { return id == root || parent.count(id) != 0; }
  std::size_t reached() const { return active.empty() ? 0 : parent.size() + 1; }

  std::vector<NodeId> children(NodeId id) const {
    std::vector<NodeId> out;
    for (const auto& [child, p] : parent)
      if (p == id) out.push_back(child);
    return out;
  }

  friend bool operator==(const Topology&, const Topology&) = default;
};

// Checks the structural tree invariants. On failure, writes a reason into
// `why` when given.
inline bool is_valid_tree(const Topology& t, std::string* why = nullptr) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (t.active.empty()) return t.parent.empty() ? true : fail("parent links without a root");
  if (!t.is_active(t.root)) return fail("root is not active");
  if (t.parent.count(t.root)) return fail("root has a parent");
  for (const auto& [child, p] : t.parent) {
    if (!t.is_active(p)) return fail("parent " + std::to_string(p) + " is not active");
    NodeId cur = child;
    std::size_t hops = 0;
    while (cur != t.root) {
      auto it = t.parent.find(cur);
      if (it == t.parent.end()) return fail("node " + std::to_string(cur) + " detached from root");
      cur = it->second;
      if (++hops > t.parent.size()) return fail("cycle through " + std::to_string(child));
    }
  }
  for (NodeId a : t.active)
    if (a != t.root && !t.parent.count(a)) return fail("active node " + std::to_string(a) + " has no parent");
  return true;
}

struct NetworkState {
  std::vector<Node> nodes;
  Topology topology;
  Step time = 0;
  std::mt19937_64 rng;
  double energy_ledger = 0.0;
  double initial_energy = 0.0;        // per non-sink node

  std::size_t size() const { return nodes.size(); }

  const Node& node(NodeId id) const {
    if (id >= nodes.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
    return nodes[id];
  }
  Node& node(NodeId id) {
    if (id >= nodes.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
    return nodes[id];
  }

  bool alive(NodeId id) const { return node(id).alive(); }
  double death_floor() const { return initial_energy * kDeathResidue; }

  // Debits `joules` from a node. The sink is mains powered and never pays.
  // Returns false when the node could not cover the whole amount; the node
  // is marked dead as soon as its energy is exhausted.
  bool charge(NodeId id, double joules) {
    Node& n = node(id);
    if (id == kSinkId) return true;
    if (!n.alive()) return false;
    const double floor = death_floor();
    const double remaining = n.energy - joules;
    if (remaining <= floor) {
      energy_ledger += n.energy;
      n.energy = 0.0;
      n.life = Life::Dead;
      n.role = Role::Sleeping;
      return remaining >= -floor;
    }
    energy_ledger += joules;
    n.energy = remaining;
    return true;
  }

  // Σ initial − Σ current over non-sink nodes; equals energy_ledger up to rounding.
  double energy_spent() const {
    double initial = 0.0, current = 0.0;
    for (const Node& n : nodes) {
      if (n.id == kSinkId) continue;
      initial += initial_energy;
      current += n.energy;
    }
    return initial - current;
  }

  std::size_t alive_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.alive(); }));
  }
};

// Alive nodes other than `id` within `radius` (closed disk), ascending id.
inline std::vector<NodeId> neighbors(const NetworkState& state, NodeId id, double radius) {
  const Point origin = state.node(id).position;
  std::vector<NodeId> out;
  for (const Node& n : state.nodes) {
    if (n.id == id || !n.alive()) continue;
    if (distance(origin, n.position) <= radius) out.push_back(n.id);
  }
  return out;
}

}  // namespace wsnlife
