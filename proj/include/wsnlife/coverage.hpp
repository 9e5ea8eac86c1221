#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "wsnlife/core.hpp"

namespace wsnlife {

// Sample lattice over the deployment rectangle, one point at the center of
// each (possibly clipped) cell.
class CoverageGrid {
 public:
  CoverageGrid(DeploymentArea area, double cell_size = 4.0) : area_(area), cell_(cell_size) {
    area.validate();
    detail::require(detail::finite_positive(cell_size), "grid_cell", "must be > 0");
    xs_ = centers(area.width);
    ys_ = centers(area.height);
  }

  double cell_size() const { return cell_; }
  const DeploymentArea& area() const { return area_; }
  std::size_t cols() const { return xs_.size(); }
  std::size_t rows() const { return ys_.size(); }
  std::size_t size() const { return xs_.size() * ys_.size(); }
  Point sample(std::size_t col, std::size_t row) const { return {xs_[col], ys_[row]}; }

  // Index window of columns/rows whose centers may fall within `radius` of p.
  std::pair<std::size_t, std::size_t> col_window(double x, double radius) const {
    return window(x, radius, xs_.size());
  }
  std::pair<std::size_t, std::size_t> row_window(double y, double radius) const {
    return window(y, radius, ys_.size());
  }

 private:
  std::vector<double> centers(double extent) const {
    const auto count = static_cast<std::size_t>(std::ceil(extent / cell_));
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double lo = static_cast<double>(i) * cell_;
      const double hi = std::min(lo + cell_, extent);
      out[i] = 0.5 * (lo + hi);
    }
    return out;
  }

  std::pair<std::size_t, std::size_t> window(double c, double radius, std::size_t count) const {
    const double lo = std::floor((c - radius) / cell_) - 1.0;
    const double hi = std::floor((c + radius) / cell_) + 1.0;
    const double last = static_cast<double>(count) - 1.0;
    if (count == 0 || hi < 0.0 || lo > last) return {1, 0};
    return {static_cast<std::size_t>(std::max(lo, 0.0)), static_cast<std::size_t>(std::min(hi, last))};
  }

  DeploymentArea area_;
  double cell_;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

struct MetricsSample {
  Step step = 0;
  std::size_t alive = 0;
  std::size_t sink_reachable = 0;
  double comm_coverage = 0.0;
  double sensing_coverage = 0.0;

  friend bool operator==(const MetricsSample&, const MetricsSample&) = default;
};

// Probabilistic sensing model: certain inside r − r_u, exponential decay
// across the uncertainty band, nothing beyond r + r_u.
inline double sense_probability(const SensingParams& sp, double r, double x) {
  const double inner = r - sp.uncertainty_radius;
  if (x <= inner) return 1.0;
  if (x > r + sp.uncertainty_radius) return 0.0;
  const double alpha = x - inner;
  return std::exp(-sp.lambda * std::pow(alpha, sp.beta));
}

// 1 − Π(1 − p_i) over the given sensors.
inline double detection_probability(std::span<const Point> sensors, Point p, const SensingParams& sp,
                                    double r) {
  double miss = 1.0;
  for (Point s : sensors) miss *= 1.0 - sense_probability(sp, r, distance(s, p));
  return 1.0 - miss;
}

inline std::size_t alive_count(const NetworkState& state) { return state.alive_count(); }

// BFS from the sink over alive Active nodes in the disk graph of radius R.
// Returned ids are sorted ascending.
inline std::vector<NodeId> sink_reachable(const NetworkState& state, double comm_radius) {
  std::vector<NodeId> pool;
  for (const Node& n : state.nodes)
    if (n.alive() && n.role == Role::Active && n.id != kSinkId) pool.push_back(n.id);

  std::vector<char> seen(pool.size(), 0);
  std::vector<NodeId> visited{kSinkId};
  std::deque<NodeId> queue{kSinkId};
  while (!queue.empty()) {
    const Point from = state.node(queue.front()).position;
    queue.pop_front();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (seen[i]) continue;
      if (distance(from, state.node(pool[i]).position) <= comm_radius) {
        seen[i] = 1;
        visited.push_back(pool[i]);
        queue.push_back(pool[i]);
      }
    }
  }
  std::sort(visited.begin(), visited.end());
  return visited;
}

// Fraction of grid points within `radius` of at least one center.
inline double disk_union_coverage(std::span<const Point> centers, const CoverageGrid& grid,
                                  double radius) {
  if (grid.size() == 0) return 0.0;
  std::vector<char> covered(grid.size(), 0);
  const double r2 = radius * radius;
  for (Point c : centers) {
    const auto [r0, r1] = grid.row_window(c.y, radius);
    const auto [c0, c1] = grid.col_window(c.x, radius);
    for (std::size_t row = r0; row <= r1 && r0 <= r1; ++row) {
      for (std::size_t col = c0; col <= c1 && c0 <= c1; ++col) {
        const Point s = grid.sample(col, row);
        const double dx = s.x - c.x, dy = s.y - c.y;
        if (dx * dx + dy * dy <= r2) covered[row * grid.cols() + col] = 1;
      }
    }
  }
  const auto hits = std::count(covered.begin(), covered.end(), char{1});
  return static_cast<double>(hits) / static_cast<double>(grid.size());
}

// Fraction of grid points whose combined detection probability reaches p_min.
inline double sensing_union_coverage(std::span<const Point> sensors, const SensingParams& sp, double r,
                                     const CoverageGrid& grid) {
  if (grid.size() == 0) return 0.0;
  std::vector<double> miss(grid.size(), 1.0);
  const double reach = r + sp.uncertainty_radius;
  for (Point c : sensors) {
    const auto [r0, r1] = grid.row_window(c.y, reach);
    const auto [c0, c1] = grid.col_window(c.x, reach);
    for (std::size_t row = r0; row <= r1 && r0 <= r1; ++row) {
      for (std::size_t col = c0; col <= c1 && c0 <= c1; ++col) {
        const double p = sense_probability(sp, r, distance(grid.sample(col, row), c));
        if (p > 0.0) miss[row * grid.cols() + col] *= 1.0 - p;
      }
    }
  }
  const auto hits = std::count_if(miss.begin(), miss.end(), [&](double m) { return 1.0 - m >= sp.p_min; });
  return static_cast<double>(hits) / static_cast<double>(grid.size());
}

inline std::vector<Point> positions_of(const NetworkState& state, std::span<const NodeId> ids) {
  std::vector<Point> out;
  out.reserve(ids.size());
  for (NodeId id : ids) out.push_back(state.node(id).position);
  return out;
}

inline double comm_coverage(const NetworkState& state, const CoverageGrid& grid, double comm_radius) {
  const auto reach = sink_reachable(state, comm_radius);
  return disk_union_coverage(positions_of(state, reach), grid, comm_radius);
}

inline double sensing_coverage(const NetworkState& state, const SensingParams& sp, double sensing_radius,
                               double comm_radius, const CoverageGrid& grid) {
  const auto reach = sink_reachable(state, comm_radius);
  return sensing_union_coverage(positions_of(state, reach), sp, sensing_radius, grid);
}

// Computes the four metrics, reusing the coverage fractions while the
// sink-reachable set is unchanged (positions never move).
class MetricsProbe {
 public:
  MetricsProbe(CoverageGrid grid, double comm_radius, double sensing_radius, SensingParams sp)
      : grid_(std::move(grid)), comm_radius_(comm_radius), sensing_radius_(sensing_radius), sp_(sp) {}

  MetricsSample measure(const NetworkState& state) {
    auto reach = sink_reachable(state, comm_radius_);
    if (!cached_ || reach != last_reach_) {
      const auto pts = positions_of(state, reach);
      comm_ = disk_union_coverage(pts, grid_, comm_radius_);
      sensing_ = sensing_union_coverage(pts, sp_, sensing_radius_, grid_);
      last_reach_ = std::move(reach);
      cached_ = true;
    }
    return MetricsSample{state.time, state.alive_count(), last_reach_.size(), comm_, sensing_};
  }

  const CoverageGrid& grid() const { return grid_; }

 private:
  CoverageGrid grid_;
  double comm_radius_;
  double sensing_radius_;
  SensingParams sp_;
  bool cached_ = false;
  std::vector<NodeId> last_reach_;
  double comm_ = 0.0;
  double sensing_ = 0.0;
};

}  // namespace wsnlife
