#pragma once

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wsnlife/config.hpp"
#include "wsnlife/engine.hpp"

namespace wsnlife {

// Coverage values are written with exactly six decimals.
inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Integer millionths of the value as it appears in the CSV, so that integrals
// recomputed from the files match exactly.
inline std::int64_t micro_units(double v) {
  const std::string s = fixed6(v);
  std::int64_t out = 0;
  bool negative = false;
  for (char ch : s) {
    if (ch == '-') negative = true;
    else if (ch >= '0' && ch <= '9') out = out * 10 + (ch - '0');
  }
  return negative ? -out : out;
}

inline std::string format_micro(std::int64_t micro) {
  char buf[64];
  const char* sign = micro < 0 ? "-" : "";
  const std::uint64_t mag = micro < 0 ? static_cast<std::uint64_t>(-micro) : static_cast<std::uint64_t>(micro);
  std::snprintf(buf, sizeof buf, "%s%" PRIu64 ".%06" PRIu64, sign, mag / 1000000, mag % 1000000);
  return buf;
}

inline constexpr const char* kSeriesHeader = "step,alive,sink_reachable,comm_coverage,sensing_coverage";

inline void write_series(std::ostream& out, const RunResult& result) {
  out << kSeriesHeader << '\n';
  for (const auto& s : result.series)
    out << s.step << ',' << s.alive << ',' << s.sink_reachable << ',' << fixed6(s.comm_coverage) << ','
        << fixed6(s.sensing_coverage) << '\n';
}

inline void emit_series(const RunResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write series file '" + path.string() + "'");
  write_series(out, result);
  if (!out) throw std::runtime_error("I/O error while writing '" + path.string() + "'");
}

struct SummaryRow {
  TcProtocol tc = TcProtocol::A3;
  TmProtocol tm = TmProtocol::None;
  std::uint64_t seed = 0;
  Step first_death = 0;             // max_steps when nobody died
  Step reachability_10pct = 0;      // first sample with sink_reachable < n/10; max_steps if never
  std::int64_t comm_integral_micro = 0;
  std::int64_t sensing_integral_micro = 0;
};

// Left sums Σ v_i·(s_{i+1} − s_i) over the written (6-decimal) values.
inline SummaryRow summarize(const RunResult& result, TcProtocol tc, TmProtocol tm, std::uint64_t seed,
                            Step max_steps, std::uint64_t node_count) {
  SummaryRow row{tc, tm, seed, max_steps, max_steps, 0, 0};
  for (const auto& [id, step] : result.death_times) row.first_death = std::min(row.first_death, step);
  for (const auto& s : result.series) {
    if (10 * static_cast<std::uint64_t>(s.sink_reachable) < node_count) {
      row.reachability_10pct = s.step;
      break;
    }
  }
  for (std::size_t i = 0; i + 1 < result.series.size(); ++i) {
    const auto width = static_cast<std::int64_t>(result.series[i + 1].step - result.series[i].step);
    row.comm_integral_micro += micro_units(result.series[i].comm_coverage) * width;
    row.sensing_integral_micro += micro_units(result.series[i].sensing_coverage) * width;
  }
  return row;
}

inline constexpr const char* kSummaryHeader =
    "tc,tm,seed,first_death_step,reachability_10pct_step,comm_coverage_integral,sensing_coverage_integral";

inline void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows)
    out << to_string(r.tc) << ',' << to_string(r.tm) << ',' << r.seed << ',' << r.first_death << ','
        << r.reachability_10pct << ',' << format_micro(r.comm_integral_micro) << ','
        << format_micro(r.sensing_integral_micro) << '\n';
}

struct RankingEntry {
  TcProtocol tc;
  TmProtocol tm;
  std::size_t runs = 0;
  double mean_comm_integral = 0.0;
  double mean_sensing_integral = 0.0;
};

// Combinations ordered by mean time-integrated communication coverage,
// best first; ties broken by protocol order.
inline std::vector<RankingEntry> rank_combinations(const std::vector<SummaryRow>& rows) {
  std::map<std::pair<int, int>, RankingEntry> groups;
  for (const auto& r : rows) {
    auto& g = groups[{static_cast<int>(r.tc), static_cast<int>(r.tm)}];
    g.tc = r.tc;
    g.tm = r.tm;
    g.runs += 1;
    g.mean_comm_integral += static_cast<double>(r.comm_integral_micro) * 1e-6;
    g.mean_sensing_integral += static_cast<double>(r.sensing_integral_micro) * 1e-6;
  }
  std::vector<RankingEntry> out;
  for (auto& [key, g] : groups) {
    g.mean_comm_integral /= static_cast<double>(g.runs);
    g.mean_sensing_integral /= static_cast<double>(g.runs);
    out.push_back(g);
  }
  std::stable_sort(out.begin(), out.end(), [](const RankingEntry& a, const RankingEntry& b) {
    return a.mean_comm_integral > b.mean_comm_integral;
  });
  return out;
}

inline std::optional<std::size_t> rank_of(const std::vector<RankingEntry>& ranking, TcProtocol tc, TmProtocol tm) {
  for (std::size_t i = 0; i < ranking.size(); ++i)
    if (ranking[i].tc == tc && ranking[i].tm == tm) return i + 1;
  return std::nullopt;
}

inline void write_ranking(std::ostream& out, const std::vector<RankingEntry>& ranking) {
  out << "# combinations ranked by mean time-integrated communication coverage (higher is better)\n";
  out << "rank,tc,tm,runs,mean_comm_coverage_integral,mean_sensing_coverage_integral\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& e = ranking[i];
    out << i + 1 << ',' << to_string(e.tc) << ',' << to_string(e.tm) << ',' << e.runs << ','
        << fixed6(e.mean_comm_integral) << ',' << fixed6(e.mean_sensing_integral) << '\n';
  }
  if (const auto r = rank_of(ranking, TcProtocol::A3, TmProtocol::DGETRec))
    out << "A3+DGETRec rank: " << *r << " of " << ranking.size() << '\n';
  else
    out << "A3+DGETRec rank: not part of this sweep\n";
}

inline std::string series_file_name(TcProtocol tc, TmProtocol tm, std::uint64_t seed) {
  return std::string(to_string(tc)) + "_" + std::string(to_string(tm)) + "_seed" + std::to_string(seed) + ".csv";
}

// A run inside a sweep failed; the message names the combination.
class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentOutputs {
  std::vector<std::filesystem::path> series_files;
  std::filesystem::path summary_file;
  std::filesystem::path ranking_file;
  std::vector<SummaryRow> rows;
  std::vector<RankingEntry> ranking;
};

// Runs every (tc, tm, seed) combination on up to `workers` threads (0 = all
// cores). Output content is independent of the worker count.
inline ExperimentOutputs run_experiment(const ExperimentSpec& spec, unsigned workers = 0) {
  if (spec.tc_list.empty() || spec.tm_list.empty() || spec.seeds.empty())
    throw ConfigError("experiment", "tc_list, tm_list and seeds must be non-empty");

  struct Job {
    TcProtocol tc;
    TmProtocol tm;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (TcProtocol tc : spec.tc_list)
    for (TmProtocol tm : spec.tm_list)
      for (std::uint64_t seed : spec.seeds) jobs.push_back({tc, tm, seed});

  // Validate every combination before touching the filesystem.
  for (const Job& j : jobs) config_for(spec, j.tc, j.tm, j.seed).validate();

  namespace fs = std::filesystem;
  const fs::path series_dir = spec.output_dir / "series";
  std::error_code ec;
  fs::create_directories(series_dir, ec);
  if (ec || !fs::is_directory(series_dir))
    throw std::runtime_error("cannot create output directory '" + series_dir.string() + "'");

  ExperimentOutputs outputs;
  outputs.rows.resize(jobs.size());
  outputs.series_files.resize(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      try {
        const SimConfig config = config_for(spec, j.tc, j.tm, j.seed);
        const RunResult result = run(config);
        outputs.series_files[i] = series_dir / series_file_name(j.tc, j.tm, j.seed);
        emit_series(result, outputs.series_files[i]);
        outputs.rows[i] = summarize(result, j.tc, j.tm, j.seed, config.max_steps, config.deployment.node_count);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i]) continue;
    std::string what = "unknown error";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw RunFailure("run " + std::string(to_string(jobs[i].tc)) + "+" + std::string(to_string(jobs[i].tm)) +
                     " seed " + std::to_string(jobs[i].seed) + " failed: " + what);
  }

  outputs.summary_file = spec.output_dir / "summary.csv";
  outputs.ranking_file = spec.output_dir / "ranking.txt";
  outputs.ranking = rank_combinations(outputs.rows);
  {
    std::ofstream out(outputs.summary_file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + outputs.summary_file.string() + "'");
    write_summary(out, outputs.rows);
  }
  {
    std::ofstream out(outputs.ranking_file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + outputs.ranking_file.string() + "'");
    write_ranking(out, outputs.ranking);
  }
  return outputs;
}

}  // namespace wsnlife
