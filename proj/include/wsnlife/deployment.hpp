#pragma once

#include <cstdint>
#include <random>

#include "wsnlife/core.hpp"

namespace wsnlife {

struct DeploymentConfig {
  std::uint64_t node_count = 300;   // sink included
  DeploymentArea area;
  std::uint64_t seed = 1;

  void validate() const {
    detail::require(node_count >= 1, "deployment.node_count", "must be >= 1 (the sink counts)");
    detail::require(node_count <= std::uint64_t{1} << 31, "deployment.node_count", "too large");
    area.validate();
  }
};

// Uniform double in [0, 1) built from the top 53 bits of one mt19937_64 draw.
// Both the engine and this mapping are fully specified, so placements are
// bit-identical across standard libraries (std::uniform_real_distribution is not).
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline NetworkState deploy(const DeploymentConfig& config, const RadioParams& radio,
                           const EnergyParams& energy) {
  config.validate();
  radio.validate();
  energy.validate();

  NetworkState state;
  state.rng.seed(config.seed);
  state.initial_energy = energy.initial;
  state.nodes.reserve(config.node_count);

  state.nodes.push_back(Node{kSinkId, config.area.center(), energy.initial, Life::Alive, Role::Sink});
  for (std::uint64_t i = 1; i < config.node_count; ++i) {
    const double x = unit_uniform(state.rng) * config.area.width;
    const double y = unit_uniform(state.rng) * config.area.height;
    state.nodes.push_back(
        Node{static_cast<NodeId>(i), {x, y}, energy.initial, Life::Alive, Role::Sleeping});
  }
  return state;
}

}  // namespace wsnlife
