#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "wsnlife/construction.hpp"
#include "wsnlife/core.hpp"
#include "wsnlife/coverage.hpp"
#include "wsnlife/deployment.hpp"
#include "wsnlife/maintenance.hpp"
#include "wsnlife/propagation.hpp"

namespace wsnlife {

struct SimConfig {
  DeploymentConfig deployment;
  RadioParams radio;
  EnergyParams energy;
  SensingParams sensing;
  A3Params a3;
  TcProtocol tc = TcProtocol::A3;
  TmProtocol tm = TmProtocol::DGETRec;
  TriggerPolicy trigger;
  std::size_t rotation_k = 3;
  double grid_cell = 4.0;
  Step max_steps = 5000;
  Step metrics_stride = 10;

  void validate() const {
    deployment.validate();
    radio.validate();
    energy.validate();
    sensing.validate(radio.sensing_radius);
    a3.validate();
    trigger.validate();
    detail::require(rotation_k >= 1, "rotation_k", "must be >= 1");
    detail::require(detail::finite_positive(grid_cell), "grid_cell", "must be > 0");
    detail::require(max_steps >= 1, "max_steps", "must be >= 1");
    detail::require(metrics_stride >= 1, "metrics_stride", "must be >= 1");
    if (const auto family = trigger_family(tm); family && *family != trigger.kind)
      throw ConfigError("trigger.kind", std::string(to_string(tm)) + " requires a " +
                                            std::string(to_string(*family)) + "-triggered policy, got " +
                                            std::string(to_string(trigger.kind)));
  }

  ConstructionParams construction() const { return {radio, energy, sensing, a3}; }
};

struct MaintenanceEvent {
  Step step = 0;
  MaintenanceAction action = MaintenanceAction::Retained;

  friend bool operator==(const MaintenanceEvent&, const MaintenanceEvent&) = default;
};

struct RunTotals {
  Step steps_executed = 0;
  bool ended_early = false;
  double energy_spent = 0.0;
  std::uint64_t packets_generated = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t bits_delivered = 0;

  friend bool operator==(const RunTotals&, const RunTotals&) = default;
};

struct RunResult {
  std::vector<MetricsSample> series;
  std::map<NodeId, Step> death_times;
  std::vector<MaintenanceEvent> maintenance_events;
  RunTotals totals;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

// What happened during one call to Simulation::step.
struct StepReport {
  Step step = 0;
  std::uint64_t packets_generated = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t bits_delivered = 0;
  std::vector<NodeId> deaths;
  std::optional<MaintenanceAction> maintenance;
  std::optional<MetricsSample> sample;
  bool finished = false;
};

// One lifetime run. Owns its NetworkState; not thread-safe, but independent
// instances share nothing.
class Simulation {
 public:
  explicit Simulation(SimConfig config) : config_(std::move(config)), probe_(make_probe(config_)) {
    initialize(deploy(config_.deployment, config_.radio, config_.energy));
  }

  // Starts from a hand-placed network instead of a random deployment. Node 0
  // must be the sink and ids must be dense.
  Simulation(SimConfig config, NetworkState deployed)
      : config_(std::move(config)), probe_(make_probe(config_)) {
    if (deployed.nodes.empty()) throw std::invalid_argument("Simulation: empty network");
    for (std::size_t i = 0; i < deployed.nodes.size(); ++i)
      if (deployed.nodes[i].id != i) throw std::invalid_argument("Simulation: node ids must be dense");
    initialize(std::move(deployed));
  }

  const SimConfig& config() const { return config_; }
  const NetworkState& state() const { return state_; }
  const MaintenanceState& maintenance() const { return maint_; }
  const RunResult& result() const { return result_; }
  bool finished() const { return finished_; }

  MetricsSample measure() { return probe_.measure(state_); }

  StepReport step() {
    StepReport report;
    if (finished_) {
      report.finished = true;
      return report;
    }
    const Step now = state_.time + 1;
    report.step = now;

    forward_traffic(report);
    record_deaths(&report);

    if (config_.tm != TmProtocol::None && should_trigger(maint_.trigger, state_)) {
      const auto outcome = maintain(maint_, state_, config_.tc, config_.construction());
      report.maintenance = outcome.action;
      result_.maintenance_events.push_back({now, outcome.action});
      record_deaths(&report);
    }

    state_.time = now;
    result_.totals.steps_executed = now;

    if (now >= config_.max_steps) finished_ = true;
    if (!finished_ && sink_cut_off()) {
      finished_ = true;
      result_.totals.ended_early = true;
    }
    if (now % config_.metrics_stride == 0 || result_.totals.ended_early) {
      report.sample = measure();
      result_.series.push_back(*report.sample);
    }
    report.finished = finished_;
    result_.totals.energy_spent = state_.energy_ledger;
    return report;
  }

  // Runs to completion from the current state and returns the full result.
  RunResult run() {
    while (!finished_) step();
    result_.totals.energy_spent = state_.energy_ledger;
    return result_;
  }

 private:
  // Initialization phase: build the first topology (or the whole rotation
  // set), charge it, activate it at time 0 and take the step-0 sample.
  void initialize(NetworkState deployed) {
    state_ = std::move(deployed);
    const auto params = config_.construction();

    maint_.trigger = config_.trigger;
    maint_.rotation_k = config_.rotation_k;
    const auto strategy = strategy_of(config_.tm);
    maint_.kind = strategy.value_or(StrategyKind::DynamicRecreation);

    if (strategy && *strategy != StrategyKind::DynamicRecreation) {
      maint_.rotation_set = precompute_rotation_set(state_, config_.tc, config_.rotation_k, params);
      maint_.cursor = 0;
      activate(state_, maint_.rotation_set.front());
    } else {
      auto result = build_topology(config_.tc, state_, params);
      apply_charge(state_, result.charge);
      activate(state_, std::move(result.topology));
    }
    record_deaths(nullptr);
    result_.series.push_back(measure());
  }

  static MetricsProbe make_probe(const SimConfig& config) {
    config.validate();
    return MetricsProbe(CoverageGrid(config.deployment.area, config.grid_cell), config.radio.comm_radius,
                        config.radio.sensing_radius, config.sensing);
  }

  void forward_traffic(StepReport& report) {
    const auto& e = config_.energy;
    const double bits = static_cast<double>(e.data_packet_bits);
    const double rx = rx_energy(e, bits);
    const Topology& t = state_.topology;

    for (NodeId origin : t.active) {
      if (origin == kSinkId || !state_.alive(origin)) continue;
      ++report.packets_generated;
      NodeId cur = origin;
      for (;;) {
        const auto link = t.parent.find(cur);
        if (link == t.parent.end() || !state_.alive(cur)) break;
        const NodeId next = link->second;
        const double hop = distance(state_.node(cur).position, state_.node(next).position);
        if (!state_.charge(cur, tx_energy(e, bits, hop))) break;
        if (next == kSinkId) {
          ++report.packets_delivered;
          report.bits_delivered += e.data_packet_bits;
          break;
        }
        if (!state_.alive(next) || !state_.charge(next, rx)) break;
        cur = next;
      }
    }
    result_.totals.packets_generated += report.packets_generated;
    result_.totals.packets_delivered += report.packets_delivered;
    result_.totals.bits_delivered += report.bits_delivered;
  }

  void record_deaths(StepReport* report) {
    for (const Node& n : state_.nodes) {
      if (n.alive() || result_.death_times.count(n.id)) continue;
      result_.death_times[n.id] = state_.time + (report ? 1 : 0);
      if (report) report->deaths.push_back(n.id);
    }
  }

  // No alive relay is left, some node has died, and maintenance cannot bring
  // one back.
  bool sink_cut_off() const {
    if (state_.size() <= 1 || result_.death_times.empty()) return false;
    for (NodeId id : state_.topology.active)
      if (id != kSinkId && state_.alive(id)) return false;

    if (config_.tm == TmProtocol::None) return true;
    if (maint_.kind == StrategyKind::StaticRotation) {
      return std::none_of(maint_.rotation_set.begin(), maint_.rotation_set.end(), [&](const Topology& t) {
        return usable(t, state_) && t.active.size() > 1;
      });
    }
    return neighbors(state_, kSinkId, config_.radio.comm_radius).empty();
  }

  SimConfig config_;
  MetricsProbe probe_;
  NetworkState state_;
  MaintenanceState maint_;
  RunResult result_;
  bool finished_ = false;
};

inline RunResult run(const SimConfig& config) { return Simulation(config).run(); }

}  // namespace wsnlife
