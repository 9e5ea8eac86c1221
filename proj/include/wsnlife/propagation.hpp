#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "wsnlife/core.hpp"

namespace wsnlife {

// Two-ray ground received power: Pt·Gt·Gr·ht²·hr² / d⁴.
inline double received_power(const RadioParams& radio, double d) {
  if (!(d > 0.0)) throw std::domain_error("received_power: distance must be > 0");
  const double h2 = radio.height_tx * radio.height_tx * radio.height_rx * radio.height_rx;
  const double d2 = d * d;
  return radio.tx_power * radio.gain_tx * radio.gain_rx * h2 / (d2 * d2);
}

// Coverage diameter of a transmitter: 2·(Ct·Pt)^(1/4).
inline double comm_range(double transceiver_constant, double tx_power) {
  if (!(transceiver_constant > 0.0) || !(tx_power > 0.0))
    throw std::domain_error("comm_range: inputs must be > 0");
  return 2.0 * std::sqrt(std::sqrt(transceiver_constant * tx_power));
}

// First order radio model. k in bits, l in meters.
inline double tx_energy(const EnergyParams& e, double bits, double l) {
  if (bits < 0.0 || l < 0.0 || std::isnan(bits) || std::isnan(l))
    throw std::domain_error("tx_energy: negative input");
  return e.e_elec * bits + e.e_amp * bits * l * l;
}

inline double rx_energy(const EnergyParams& e, double bits) {
  if (bits < 0.0 || std::isnan(bits)) throw std::domain_error("rx_energy: negative input");
  return e.e_elec * bits;
}

// Growth term f(n) of the dense-network critical transmission range.
struct CtrTerm {
  enum class Kind { Zero, LogLog, Custom };
  Kind kind = Kind::LogLog;
  double value = 0.0;   // used by Custom only

  static CtrTerm zero() { return {Kind::Zero, 0.0}; }
  static CtrTerm log_log() { return {Kind::LogLog, 0.0}; }
  static CtrTerm custom(double v) { return {Kind::Custom, v}; }

  // ln(ln n) is only defined and positive from n = 3 on; below that it is 0.
  double evaluate(std::uint64_t n) const {
    switch (kind) {
      case Kind::Zero: return 0.0;
      case Kind::LogLog: return n >= 3 ? std::log(std::log(static_cast<double>(n))) : 0.0;
      case Kind::Custom: return value;
    }
    return 0.0;
  }
};

// sqrt((ln n + f(n)) / (n·π)), as a fraction of the square's edge length.
inline double critical_transmission_range(std::uint64_t n, CtrTerm f = CtrTerm::log_log()) {
  if (n == 0) throw std::domain_error("critical_transmission_range: n must be >= 1");
  const double nd = static_cast<double>(n);
  const double numerator = std::log(nd) + f.evaluate(n);
  if (numerator < 0.0) throw std::domain_error("critical_transmission_range: ln n + f(n) < 0");
  return std::sqrt(numerator / (nd * std::numbers::pi));
}

// Same range in meters for a square of edge `edge_length`.
inline double critical_transmission_range_m(std::uint64_t n, double edge_length,
                                            CtrTerm f = CtrTerm::log_log()) {
  if (!(edge_length > 0.0)) throw std::domain_error("critical_transmission_range_m: edge must be > 0");
  return critical_transmission_range(n, f) * edge_length;
}

}  // namespace wsnlife
