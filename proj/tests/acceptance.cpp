// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: wsnlife_acceptance [scratch_dir]

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "test_support.hpp"

using namespace wsnlife;
namespace fs = std::filesystem;
using HP = boost::multiprecision::cpp_bin_float_50;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail, double seconds) {
  std::printf("[%s] criterion %2d  %-32s %s (%.2fs)\n", ok ? "PASS" : "FAIL", id, title, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void criterion(int id, const char* title, F&& body) {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(id, title, ok, detail, std::chrono::duration<double>(Clock::now() - t0).count());
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(double got, const HP& want) {
  const HP d = abs(HP(got) - want);
  return want == 0 ? static_cast<double>(d) : static_cast<double>(d / abs(want));
}

SimConfig desk(std::uint64_t seed, TcProtocol tc, TmProtocol tm) {
  SimConfig c;
  c.deployment.node_count = 100;
  c.deployment.area = {300, 200};
  c.deployment.seed = seed;
  c.radio.comm_radius = 60;
  c.radio.sensing_radius = 15;
  c.tc = tc;
  c.tm = tm;
  if (const auto f = trigger_family(tm)) c.trigger.kind = *f;
  return c;
}

Step time_to_10pct(const RunResult& r, std::uint64_t n, Step max_steps) {
  for (const auto& s : r.series)
    if (10 * static_cast<std::uint64_t>(s.sink_reachable) < n) return s.step;
  return max_steps;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t* files) {
  std::set<fs::path> left, right;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) left.insert(fs::relative(e.path(), a));
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) right.insert(fs::relative(e.path(), b));
  *files = left.size();
  if (left != right) return false;
  for (const auto& rel : left)
    if (slurp(a / rel) != slurp(b / rel)) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "wsnlife_acceptance";

  criterion(1, "formula fidelity", [](std::string& d) {
    const EnergyParams e;
    const double tx = tx_energy(e, 1000, 100), rx = rx_energy(e, 1000);
    bool ok = std::abs(tx - 1.5e-4) <= 1.5e-4 * 1e-15 && std::abs(rx - 5.0e-5) <= 5.0e-5 * 1e-15;
    double worst = 0.0;
    RadioParams r;
    r.tx_power = 0.0281;
    r.gain_tx = 1.5;
    r.gain_rx = 0.8;
    r.height_tx = 1.7;
    r.height_rx = 2.3;
    for (double dist : {1.0, 10.0, 3.7, 123.456, 1000.0}) {
      const HP want = HP(r.tx_power) * HP(r.gain_tx) * HP(r.gain_rx) * pow(HP(r.height_tx), 2) *
                      pow(HP(r.height_rx), 2) / pow(HP(dist), 4);
      worst = std::max(worst, rel(received_power(r, dist), want));
    }
    for (std::uint64_t n : {2ull, 10ull, 300ull, 1000000ull}) {
      const HP nn(n);
      HP num = log(nn);
      if (n >= 3) num += log(log(nn));
      worst = std::max(worst, rel(critical_transmission_range(n), sqrt(num / (nn * boost::math::constants::pi<HP>()))));
    }
    ok = ok && worst <= 1e-12;
    d = fmt("tx=%.3e rx=%.3e worst rel err %.1e", tx, rx, worst);
    return ok;
  });

  criterion(2, "sensing model", [](std::string& d) {
    const SensingParams sp;  // r_u = 2, λ = 0.5, β = 1
    const double r = 20;
    bool ok = true;
    for (double x = 0; x <= r - sp.uncertainty_radius; x += 0.25) ok = ok && sense_probability(sp, r, x) == 1.0;
    for (double x = std::nextafter(r + sp.uncertainty_radius, 1e9); x < 60; x += 0.37)
      ok = ok && sense_probability(sp, r, x) == 0.0;
    const double edge = r - sp.uncertainty_radius;
    const double jump = std::abs(sense_probability(sp, r, std::nextafter(edge, 1e9)) - 1.0);
    ok = ok && jump <= 1e-12;
    SensingParams unit = sp;
    unit.uncertainty_radius = 1.0;
    const double mid = sense_probability(unit, r, r);  // α = 1
    const double err = std::abs(mid - std::exp(-unit.lambda));
    const double err2 = std::abs(sense_probability(sp, r, edge + 1.0) - std::exp(-sp.lambda));
    ok = ok && err <= 1e-12 && err2 <= 1e-12;
    d = fmt("edge jump %.1e, alpha=1 error %.1e / %.1e", jump, err, err2);
    return ok;
  });

  criterion(3, "CDS properties", [](std::string& d) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(5, 50);
    std::uniform_real_distribution<double> side(100, 400);
    const double R = 100;
    ConstructionParams p;
    std::size_t bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const double w = side(rng), h = side(rng);
      const auto s = wsnlife::testing::make_state(wsnlife::testing::random_points(rng, size(rng), w, h));
      const auto a3 = a3_construct(s, p).topology;
      const auto cov = a3cov_construct(s, p).topology;
      bool ok = is_valid_tree(a3) && is_valid_tree(cov) && a3_construct(s, p).topology == a3 &&
                a3cov_construct(s, p).topology == cov;

      std::vector<char> all(s.size(), 1), act(s.size(), 0);
      for (NodeId a : a3.active) act[a] = 1;
      ok = ok && wsnlife::testing::closure_from_sink(s, R, act) == a3.active;
      for (NodeId v : wsnlife::testing::closure_from_sink(s, R, all)) {
        if (a3.is_active(v)) continue;
        const bool dom = std::any_of(a3.active.begin(), a3.active.end(), [&](NodeId a) {
          return distance(s.node(a).position, s.node(v).position) <= R;
        });
        ok = ok && dom && a3.contains(v);
      }
      for (const auto& [child, parent] : a3.parent)
        ok = ok && distance(s.node(child).position, s.node(parent).position) <= R;

      ok = ok && std::includes(cov.active.begin(), cov.active.end(), a3.active.begin(), a3.active.end());
      const CoverageGrid g({w, h}, 4.0);
      auto positions = [&](const Topology& t) {
        std::vector<Point> pts;
        for (NodeId a : t.active) pts.push_back(s.node(a).position);
        return pts;
      };
      const auto sp = SensingParams{};
      ok = ok && sensing_union_coverage(positions(cov), sp, 20, g) >= sensing_union_coverage(positions(a3), sp, 20, g);
      bad += !ok;
    }
    d = std::to_string(1000 - bad) + "/1000 deployments satisfy all invariants";
    return bad == 0;
  });

  criterion(4, "reachability oracle", [](std::string& d) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> size(1, 20);
    std::bernoulli_distribution coin(0.6), dead(0.15);
    int agree = 0;
    for (int trial = 0; trial < 500; ++trial) {
      auto s = wsnlife::testing::make_state(wsnlife::testing::random_points(rng, size(rng), 300, 300));
      std::set<NodeId> active;
      for (NodeId i = 1; i < s.size(); ++i)
        if (coin(rng)) active.insert(i);
      wsnlife::testing::set_roles(s, active);
      for (NodeId i = 1; i < s.size(); ++i)
        if (dead(rng)) wsnlife::testing::kill(s, i);
      std::vector<char> allowed(s.size());
      for (const auto& n : s.nodes) allowed[n.id] = n.id == kSinkId || (n.alive() && n.role == Role::Active);
      const auto got = sink_reachable(s, 80.0);
      agree += std::set<NodeId>(got.begin(), got.end()) == wsnlife::testing::closure_from_sink(s, 80.0, allowed);
    }
    d = std::to_string(agree) + "/500 instances equal";
    return agree == 500;
  });

  criterion(5, "energy conservation", [](std::string& d) {
    SimConfig c;
    const auto t0 = Clock::now();
    Simulation sim(c);
    double worst = 0.0;
    bool monotone = true;
    std::size_t prev = sim.state().alive_count(), samples = 0;
    auto check = [&] {
      const auto& s = sim.state();
      double spent = 0.0;
      for (const auto& n : s.nodes)
        if (n.id != kSinkId) spent += s.initial_energy - n.energy;
      worst = std::max(worst, std::abs(spent - s.energy_ledger) / std::max(s.energy_ledger, 1e-300));
      monotone = monotone && s.alive_count() <= prev;
      prev = s.alive_count();
      ++samples;
    };
    check();
    while (!sim.finished())
      if (sim.step().sample) check();
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    d = fmt("worst rel ledger gap %.1e over %g samples, %.2fs", worst, static_cast<double>(samples), secs);
    return worst <= 1e-9 && monotone && secs < 60.0;
  });

  criterion(6, "coverage estimator stability", [](std::string& d) {
    DeploymentConfig dc;
    dc.seed = 6;
    auto s = deploy(dc, RadioParams{}, EnergyParams{});
    activate(s, a3cov_construct(s, ConstructionParams{}).topology);
    const CoverageGrid coarse(dc.area, 4.0), fine(dc.area, 2.0);
    const SensingParams sp;
    const double dc_comm = std::abs(comm_coverage(s, coarse, 100) - comm_coverage(s, fine, 100));
    const double dc_sense = std::abs(sensing_coverage(s, sp, 20, 100, coarse) - sensing_coverage(s, sp, 20, 100, fine));
    const auto sink = wsnlife::testing::make_state({{100, 100}});
    const double disk = comm_coverage(sink, CoverageGrid({200, 200}, 4.0), 100.0);
    const double pi_err = std::abs(disk - std::acos(-1.0) / 4.0);
    d = fmt("|d comm| %.4f, |d sensing| %.4f, pi/4 error %.4f", dc_comm, dc_sense, pi_err);
    return dc_comm < 0.01 && dc_sense < 0.01 && pi_err <= 0.01;
  });

  criterion(7, "maintenance benefit", [](std::string& d) {
    const std::uint64_t n = 100;
    auto mean_ttr = [&](TcProtocol tc, TmProtocol tm) {
      double total = 0;
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto c = desk(seed, tc, tm);
        total += static_cast<double>(time_to_10pct(run(c), n, c.max_steps));
      }
      return total / 10.0;
    };
    bool ok = true;
    std::string gated, info;
    for (TcProtocol tc : {TcProtocol::A3, TcProtocol::A3Cov}) {
      const double base = mean_ttr(tc, TmProtocol::None);
      std::string& out = tc == TcProtocol::A3 ? gated : info;
      out += std::string(to_string(tc)) + " None=" + fmt("%.0f", base);
      for (TmProtocol tm : kAllTmProtocols) {
        const double m = mean_ttr(tc, tm);
        out += " " + std::string(to_string(tm)) + "=" + fmt("%.0f", m);
        if (tc == TcProtocol::A3) ok = ok && m >= base;
      }
    }
    d = gated + " | informational: " + info;
    return ok;
  });

  ExperimentSpec sweep;
  sweep.base = desk(1, TcProtocol::A3, TmProtocol::DGETRec);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) sweep.seeds.push_back(seed);
  const fs::path first = scratch / "sweep_a", second = scratch / "sweep_b";
  fs::remove_all(first);
  fs::remove_all(second);

  criterion(8, "sweep artifacts and ranking", [&](std::string& d) {
    sweep.output_dir = first;
    const auto out = run_experiment(sweep);
    std::size_t csvs = 0;
    for (const auto& e : fs::directory_iterator(first / "series")) csvs += e.path().extension() == ".csv";
    std::size_t summary_rows = 0;
    {
      std::istringstream in(slurp(first / "summary.csv"));
      std::string line;
      while (std::getline(in, line)) ++summary_rows;
    }
    const auto rank = rank_of(out.ranking, TcProtocol::A3, TmProtocol::DGETRec);
    const bool ranked = slurp(first / "ranking.txt").find("A3+DGETRec rank: ") != std::string::npos;
    d = std::to_string(csvs) + " series, " + std::to_string(summary_rows - 1) + " summary rows; A3+DGETRec rank " +
        (rank ? std::to_string(*rank) : "?") + " of " + std::to_string(out.ranking.size()) +
        " by comm coverage integral";
    return csvs == 120 && summary_rows == 121 && ranked && out.ranking.size() == 12;
  });

  criterion(9, "determinism", [&](std::string& d) {
    sweep.output_dir = second;
    run_experiment(sweep, 3);
    std::size_t files = 0;
    const bool same = same_tree(first, second, &files);
    d = std::to_string(files) + " files compared";
    return same && files == 122;
  });

  criterion(10, "protocol distinctness", [](std::string& d) {
    std::vector<std::vector<MetricsSample>> series;
    for (TmProtocol tm : kAllTmProtocols) {
      auto c = desk(1, TcProtocol::A3, tm);
      c.max_steps = 10000;
      series.push_back(run(c).series);
    }
    int identical = 0;
    for (std::size_t i = 0; i < series.size(); ++i)
      for (std::size_t j = i + 1; j < series.size(); ++j) {
        if (series[i] == series[j]) {
          ++identical;
          d += std::string(to_string(kAllTmProtocols[i])) + "==" + std::string(to_string(kAllTmProtocols[j])) + " ";
        }
      }
    d += std::to_string(15 - identical) + "/15 pairs differ";
    return identical == 0;
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
