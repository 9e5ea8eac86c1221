#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsnlife/engine.hpp"

namespace wsnlife {

// A sweep: the cartesian product tc_list × tm_list × seeds over `base`.
struct ExperimentSpec {
  SimConfig base;
  std::vector<TcProtocol> tc_list{TcProtocol::A3, TcProtocol::A3Cov};
  std::vector<TmProtocol> tm_list{kAllTmProtocols.begin(), kAllTmProtocols.end()};
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "out";
};

// Concrete run configuration for one combination. The trigger kind follows
// the protocol's family; period and threshold come from the base config.
inline SimConfig config_for(const ExperimentSpec& spec, TcProtocol tc, TmProtocol tm, std::uint64_t seed) {
  SimConfig c = spec.base;
  c.tc = tc;
  c.tm = tm;
  c.deployment.seed = seed;
  if (const auto family = trigger_family(tm)) c.trigger.kind = *family;
  return c;
}

namespace detail {

using json = nlohmann::json;

inline void flatten(const json& j, const std::string& prefix, std::map<std::string, json>& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
    } else {
      out[name] = value;
    }
  }
}

inline double as_double(const std::string& field, const json& v) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  return v.get<double>();
}

inline std::uint64_t as_uint(const std::string& field, const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw ConfigError(field, "must be non-negative");
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError(field, "expected a non-negative integer");
}

inline std::string as_string(const std::string& field, const json& v) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

inline TcProtocol as_tc(const std::string& field, const json& v) {
  const auto name = as_string(field, v);
  if (const auto tc = parse_tc(name)) return *tc;
  throw ConfigError(field, "unknown topology construction protocol '" + name + "' (A3, A3Cov)");
}

inline TmProtocol as_tm(const std::string& field, const json& v) {
  const auto name = as_string(field, v);
  if (const auto tm = parse_tm(name)) return *tm;
  throw ConfigError(field, "unknown topology maintenance protocol '" + name + "'");
}

inline const json& as_array(const std::string& field, const json& v) {
  if (!v.is_array()) throw ConfigError(field, "expected an array");
  if (v.empty()) throw ConfigError(field, "must not be empty");
  return v;
}

}  // namespace detail

inline ExperimentSpec parse_config_json(const nlohmann::json& root) {
  using detail::json;
  if (!root.is_object()) throw ConfigError("", "config must be a JSON object");

  std::map<std::string, json> flat;
  detail::flatten(root, "", flat);

  ExperimentSpec spec;
  SimConfig& c = spec.base;
  std::optional<TriggerKind> explicit_kind;

  using Setter = std::function<void(const std::string&, const json&)>;
  auto num = [](double& dst) -> Setter { return [&dst](auto& f, auto& v) { dst = detail::as_double(f, v); }; };
  auto uint = [](auto& dst) -> Setter {
    return [&dst](auto& f, auto& v) { dst = static_cast<std::remove_reference_t<decltype(dst)>>(detail::as_uint(f, v)); };
  };

  const std::map<std::string, Setter> setters = {
      {"deployment.node_count", uint(c.deployment.node_count)},
      {"deployment.width", num(c.deployment.area.width)},
      {"deployment.height", num(c.deployment.area.height)},
      {"deployment.seed", uint(c.deployment.seed)},
      {"radio.tx_power", num(c.radio.tx_power)},
      {"radio.gain_tx", num(c.radio.gain_tx)},
      {"radio.gain_rx", num(c.radio.gain_rx)},
      {"radio.height_tx", num(c.radio.height_tx)},
      {"radio.height_rx", num(c.radio.height_rx)},
      {"radio.transceiver_constant", num(c.radio.transceiver_constant)},
      {"radio.comm_radius", num(c.radio.comm_radius)},
      {"radio.sensing_radius", num(c.radio.sensing_radius)},
      {"energy.e_elec", num(c.energy.e_elec)},
      {"energy.e_amp", num(c.energy.e_amp)},
      {"energy.initial", num(c.energy.initial)},
      {"energy.control_packet_bits", uint(c.energy.control_packet_bits)},
      {"energy.data_packet_bits", uint(c.energy.data_packet_bits)},
      {"sensing.uncertainty_radius", num(c.sensing.uncertainty_radius)},
      {"sensing.lambda", num(c.sensing.lambda)},
      {"sensing.beta", num(c.sensing.beta)},
      {"sensing.p_min", num(c.sensing.p_min)},
      {"a3.energy_weight", num(c.a3.energy_weight)},
      {"a3.distance_weight", num(c.a3.distance_weight)},
      {"tc", [&](auto& f, auto& v) { c.tc = detail::as_tc(f, v); }},
      {"tm", [&](auto& f, auto& v) { c.tm = detail::as_tm(f, v); }},
      {"trigger.kind",
       [&](auto& f, auto& v) {
         const auto s = detail::as_string(f, v);
         if (s == "time") explicit_kind = TriggerKind::Time;
         else if (s == "energy") explicit_kind = TriggerKind::Energy;
         else throw ConfigError(f, "expected \"time\" or \"energy\"");
       }},
      {"trigger.period", uint(c.trigger.period)},
      {"trigger.threshold", num(c.trigger.threshold)},
      {"rotation_k", uint(c.rotation_k)},
      {"grid_cell", num(c.grid_cell)},
      {"max_steps", uint(c.max_steps)},
      {"metrics_stride", uint(c.metrics_stride)},
      {"experiment.tc_list",
       [&](auto& f, auto& v) {
         spec.tc_list.clear();
         for (const auto& e : detail::as_array(f, v)) spec.tc_list.push_back(detail::as_tc(f, e));
       }},
      {"experiment.tm_list",
       [&](auto& f, auto& v) {
         spec.tm_list.clear();
         for (const auto& e : detail::as_array(f, v)) spec.tm_list.push_back(detail::as_tm(f, e));
       }},
      {"experiment.seeds",
       [&](auto& f, auto& v) {
         spec.seeds.clear();
         for (const auto& e : detail::as_array(f, v)) spec.seeds.push_back(detail::as_uint(f, e));
       }},
      {"experiment.output_dir", [&](auto& f, auto& v) { spec.output_dir = detail::as_string(f, v); }},
  };

  for (const auto& [key, value] : flat) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key, "unknown configuration key");
    it->second(key, value);
  }

  if (const auto family = trigger_family(c.tm)) {
    if (explicit_kind && *explicit_kind != *family)
      throw ConfigError("trigger.kind", std::string(to_string(c.tm)) + " requires trigger.kind = \"" +
                                            std::string(to_string(*family)) + "\"");
    c.trigger.kind = *family;
  } else if (explicit_kind) {
    c.trigger.kind = *explicit_kind;
  }

  if (spec.seeds.empty()) spec.seeds.push_back(c.deployment.seed);
  if (spec.output_dir.empty()) throw ConfigError("experiment.output_dir", "must not be empty");
  c.validate();
  return spec;
}

inline ExperimentSpec parse_config_text(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }
  return parse_config_json(root);
}

inline ExperimentSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace wsnlife
