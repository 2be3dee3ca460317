// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include "../oracles.hpp"
#include "pxbar/ann.hpp"
#include "pxbar/config.hpp"
#include "pxbar/crossbar.hpp"
#include "pxbar/energy.hpp"
#include "pxbar/experiment.hpp"
#include "pxbar/optics.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace pxbar;
namespace fs = std::filesystem;

namespace {

const std::string kSource = PXBAR_SOURCE_DIR;
const std::string kConfig = kSource + "/configs/default.json";

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome fail(const std::string& why) { return {false, why}; }

oracle::Matrix to_rows(const Eigen::MatrixXd& g) {
  oracle::Matrix out(g.rows(), oracle::Vector(g.cols()));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) out[i][j] = g(i, j);
  return out;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

CrossbarArray random_array(std::mt19937_64& rng, const DeviceParams& p, std::size_t r, std::size_t c,
                           double r_row = 0.0, double r_col = 0.0) {
  CrossbarArray a(r, c, p, {}, nullptr, r_row, r_col);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n = 0; n < r; ++n)
    for (std::size_t m = 0; m < c; ++m) a.set_cell(n, m, {p.technology, u(rng), 0, false});
  return a;
}

// 1. Ideal-wire nodal solve equals the ideal VMM equals a plain mat-vec.
Outcome vmm_oracle(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_array(rng, cfg.device, 8, 8);
    Eigen::VectorXd v(8);
    for (int k = 0; k < 8; ++k) v(k) = u(rng);
    const auto ideal = vmm_ideal(a, v);
    const auto non = vmm_nonideal(a, v);
    const auto ref = oracle::matvec(to_rows(conductance_matrix(a)), oracle::Vector(v.data(), v.data() + 8));
    for (int m = 0; m < 8; ++m) worst = std::max({worst, rel(non(m), ideal(m)), rel(ideal(m), ref[m])});
  }
  if (worst > 1e-9) return fail("max relative error " + sci(worst));
  return {true, "max relative error " + sci(worst)};
}

// 2. Closed form for one cell; brute-force MNA for a 2x2 with wires.
Outcome nodal_solver(const ExperimentConfig& cfg) {
  double worst_1x1 = 0.0;
  for (double r : {0.5, 10.0, 1e3, 1e5}) {
    for (double s : {0.0, 0.3, 1.0}) {
      CrossbarArray a(1, 1, cfg.device, {}, nullptr, r / 2, r / 2);
      a.set_cell(0, 0, {cfg.device.technology, s, 0, false});
      const double g = conductance(a.cell(0, 0), a.params());
      const double v = 0.17;
      worst_1x1 = std::max(worst_1x1, rel(vmm_nonideal(a, Eigen::VectorXd::Constant(1, v))(0), v * g / (1 + g * r)));
    }
  }
  auto p = cfg.device;
  p.g_a = 1e-3;
  p.g_c = 1e-1;
  std::mt19937_64 rng(102);
  double worst_2x2 = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_array(rng, p, 2, 2, 10.0, 10.0);
    const Eigen::Vector2d v(0.2 * (trial % 3) - 0.1, 0.15);
    const auto ref = oracle::crossbar_mna(to_rows(conductance_matrix(a)), {v(0), v(1)}, 10.0, 10.0);
    const auto got = vmm_nonideal(a, v);
    for (int m = 0; m < 2; ++m) worst_2x2 = std::max(worst_2x2, rel(got(m), ref[m]));
  }
  const std::string detail =
      "1x1 rel " + sci(worst_1x1) + ", 2x2 rel " + sci(worst_2x2);
  if (worst_1x1 > 1e-12 || worst_2x2 > 1e-9) return fail(detail);
  return {true, detail};
}

// 3. Metal loss is even in the imbalance; propagation length peaks only at 0.
Outcome balance_minimum(const ExperimentConfig& cfg) {
  const auto& g = cfg.geometry;
  double worst = 0.0;
  int best_at = 0, ties = 0;
  double best = -1.0;
  for (int i = -100; i <= 100; ++i) {
    const double dn = 1e-3 * i;
    worst = std::max(worst, std::abs(metal_loss(g, dn) - metal_loss(g, -dn)));
    const double l = propagation_length(metal_loss(g, dn));
    if (l > best) {
      best = l;
      best_at = i;
      ties = 1;
    } else if (l == best) {
      ++ties;
    }
  }
  const std::string detail = "asymmetry " + sci(worst) + ", argmax index " +
                             std::to_string(best_at) + ", ties " + std::to_string(ties);
  if (worst > 1e-12 || best_at != 0 || ties != 1) return fail(detail);
  return {true, detail};
}

// 4. Graded writes raise G and lower the row transmission together; an erase
// restores both exactly.
Outcome electro_optic(const ExperimentConfig& cfg) {
  CrossbarArray row(1, 4, cfg.device, cfg.geometry, cfg.material);
  const auto& p = cfg.device;
  const auto g_of = [&] { return conductance(row.cell(0, 1), p); };
  const auto t_of = [&] { return optical_read_row(row, 0, 1.0); };
  const double g0 = g_of(), t0 = t_of();
  double g_prev = g0, t_prev = t0;
  for (int i = 0; i < 20; ++i) {
    const bool saturated = row.cell(0, 1).s >= 1.0;
    row.apply_pulse(0, 1, {Domain::Electrical, Polarity::Set, p.v_set, p.tau_set / 20});
    const double g = g_of(), t = t_of();
    if (g < g_prev || t > t_prev) return fail("non-monotone at step " + std::to_string(i + 1));
    if (!saturated && (g == g_prev || t == t_prev)) return fail("no change at step " + std::to_string(i + 1));
    g_prev = g;
    t_prev = t;
  }
  row.apply_pulse(0, 1, {Domain::Electrical, Polarity::Reset, p.v_reset, p.tau_set / 1024});
  if (g_of() != g0 || t_of() != t0) return fail("erase did not restore the baseline");
  return {true, "G " + sci(g0) + " -> " + sci(g_prev) + " S, T " +
                    sci(t0) + " -> " + sci(t_prev)};
}

// 5. Read-back-only program-and-verify on 1000 random targets.
Outcome program_verify(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(105);
  const auto& p = cfg.device;
  std::uniform_real_distribution<double> u(p.g_a, p.g_c);
  std::size_t worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    CrossbarArray a(1, 1, p);
    const double target = u(rng);
    try {
      const auto r = program_cell(a, 0, 0, target, 0.01, 64);
      if (std::abs(r.final_conductance - target) / target > 0.01) return fail("missed target");
      worst = std::max(worst, r.log.size());
    } catch (const MaxPulsesExceeded&) {
      return fail("target " + sci(target) + " needed more than 64 pulses");
    }
  }
  return {true, "worst case " + std::to_string(worst) + " pulses"};
}

// 6. Shipped FTJ on/off ratio and endurance accounting.
Outcome ftj_endurance() {
  const auto defaults = load_technology_defaults(kSource + "/data/technologies.json");
  const auto& ftj = defaults.at(Technology::FTJ);
  const double ratio = conductance({Technology::FTJ, 1.0, 0, false}, ftj) /
                       conductance({Technology::FTJ, 0.0, 0, false}, ftj);
  if (ratio < 1e4) return fail("FTJ on/off ratio " + sci(ratio));

  auto pcm = defaults.at(Technology::PCM);
  if (pcm.n_endurance != 1'000'000'000'000'000ULL) return fail("PCM endurance default is not 1e15");
  pcm.n_endurance = 10;
  CellState s{};
  int changes = 0;
  for (int i = 0; i < 30; ++i) {
    const Pulse pulse = i % 2 == 0 ? Pulse{Domain::Electrical, Polarity::Set, pcm.v_set, pcm.tau_set / 2}
                                   : Pulse{Domain::Electrical, Polarity::Reset, pcm.v_reset, 1e-9};
    const auto next = apply_pulse(s, pulse, pcm);
    if (next.s != s.s) ++changes;
    if (changes == 9 && next.stuck) return fail("stuck too early");
    s = next;
  }
  if (changes != 10 || !s.stuck) return fail(std::to_string(changes) + " changes before stuck");
  return {true, "FTJ ratio " + sci(ratio) + ", stuck after 10 changes"};
}

// 7. Blobs classification through the simulated hardware.
Outcome end_to_end(const ExperimentConfig& cfg) {
  BlobsRunSpec spec;
  spec.seed = cfg.seed;
  spec.r_wire = 1.0;
  spec.tolerances = {0.01};
  spec.read = cfg.read;
  const auto run = run_blobs_experiment(cfg.device, spec);
  if (run.data.test.size() != 300) return fail("test set has " + std::to_string(run.data.test.size()) + " points");
  const double drop = (run.float_accuracy - run.nonideal[0].accuracy) * 100.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "float %.4f, ideal %.4f, tol 1%% r=1 ohm %.4f (drop %.2f pp)",
                run.float_accuracy, run.ideal_accuracy, run.nonideal[0].accuracy, drop);
  if (run.ideal_accuracy != run.float_accuracy) return fail(buf);
  if (drop > 2.0) return fail(buf);
  return {true, buf};
}

// 8. Energy report against an independent summation over the trace.
Outcome energy_identity(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(108);
  std::normal_distribution<double> nd(0.0, 1.0);
  Trace trace;
  for (const auto [r, c] : {std::pair{3, 5}, std::pair{8, 2}, std::pair{1, 1}, std::pair{16, 16}}) {
    Eigen::MatrixXd w(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) w(i, j) = nd(rng);
    const std::vector<LayerMapping> net{map_layer(w, Activation::Tanh, cfg.device)};
    Trace one;
    Eigen::VectorXd x(r);
    for (int i = 0; i < r; ++i) x(i) = 0.5 * nd(rng);
    forward(net, x, ReadMode::Ideal, cfg.read, &one);
    for (const auto& read : one.reads) {
      if (energy_report(Trace{{read}, {}}).mac_count != static_cast<std::uint64_t>(r * c)) {
        return fail("MAC count is not R*C for a " + std::to_string(r) + "x" + std::to_string(c) + " read");
      }
    }
    trace.append(one);
  }
  double expected = 0.0;
  for (const auto& read : trace.reads)
    for (Eigen::Index n = 0; n < read.conductances.rows(); ++n)
      for (Eigen::Index m = 0; m < read.conductances.cols(); ++m)
        expected += read.voltages(n) * read.voltages(n) * read.conductances(n, m) * read.t_read;
  const double got = energy_report(trace).read_energy;
  const double err = rel(got, expected);
  if (err > 1e-12) return fail("relative error " + sci(err));
  return {true, "read energy " + sci(got) + " J, relative error " + sci(err)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PXBAR_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. Every CLI command writes the same bytes when re-run.
Outcome determinism() {
  const auto dir = fs::temp_directory_path() / "pxbar_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const auto v = put("v.csv", "0.1\n0.05\n0.2\n0.15\n");
  const auto state = put("s.csv", "0,0.25,0.5,1\n0.1,0.2,0.3,0.4\n0.9,0.8,0.7,0.6\n1,1,0,0\n");
  const auto target = put("t.csv", "1e-5,2e-5,3e-5,4e-5\n5e-5,6e-5,7e-5,8e-5\n9e-5,1e-4,1e-6,2e-6\n3e-6,4e-6,5e-6,6e-6\n");

  // The report run also produces the fixtures ann-infer consumes.
  const std::string base = "--config " + kConfig + " --out ";
  if (run_cli("report --tolerances 0.001,0.01,0.1 " + base + (dir / "fixtures").string()) != 0) {
    return fail("report failed");
  }
  const auto fx = dir / "fixtures";
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
      {"materials", {"materials.csv"}},
      {"optics-sweep", {"optics_sweep.csv"}},
      {"optics-sweep --dn-grid=-0.05:0.05:101", {"optics_sweep.csv"}},
      {"memory-demo", {"memory_demo.csv"}},
      {"xbar vmm --mode ideal --state " + state + " --voltages " + v, {"vmm.csv"}},
      {"xbar vmm --mode nonideal --set array.r_row_ohm=1 --set array.r_col_ohm=1 --state " + state +
           " --voltages " + v,
       {"vmm.csv"}},
      {"xbar program --target " + target + " --snapshot-out programmed.csv", {"program.csv", "programmed.csv"}},
      {"xbar snapshot --state " + state, {"snapshot.csv"}},
      {"ann-infer --mode nonideal --program-tol 0.01 --set array.r_row_ohm=1 --set array.r_col_ohm=1"
       " --weights " + (fx / "layer0.csv").string() + " --weights " + (fx / "layer1.csv").string() +
           " --input " + (fx / "blobs_test.csv").string(),
       {"predictions.csv", "energy.csv"}},
      {"report --tolerances 0.001,0.01,0.1",
       {"report.csv", "blobs_train.csv", "blobs_test.csv", "layer0.csv", "layer1.csv"}},
  };
  std::size_t files = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto& [cmd, outputs] = commands[i];
    const auto a = dir / ("a" + std::to_string(i)), b = dir / ("b" + std::to_string(i));
    if (run_cli(cmd + " " + base + a.string()) != 0 || run_cli(cmd + " " + base + b.string()) != 0) {
      return fail("command failed: " + cmd);
    }
    for (const auto& f : outputs) {
      const auto first = slurp(a / f);
      if (first.empty()) return fail("no output " + f + " from: " + cmd);
      if (first != slurp(b / f)) return fail("output differs: " + f + " from: " + cmd);
      ++files;
    }
  }
  return {true, std::to_string(commands.size()) + " commands, " + std::to_string(files) + " files identical"};
}

}  // namespace

int main() {
  ExperimentConfig cfg;
  try {
    cfg = load_config(kConfig);
  } catch (const std::exception& e) {
    std::printf("FAIL cannot load %s: %s\n", kConfig.c_str(), e.what());
    return 1;
  }

  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "VMM oracle equivalence", 1.0, [&] { return vmm_oracle(cfg); }},
      {2, "nodal solver correctness", 0.0, [&] { return nodal_solver(cfg); }},
      {3, "balance minimum of metal loss", 1.0, [&] { return balance_minimum(cfg); }},
      {4, "electro-optic co-variation", 0.0, [&] { return electro_optic(cfg); }},
      {5, "program-and-verify, 1000 targets", 10.0, [&] { return program_verify(cfg); }},
      {6, "FTJ on/off and endurance accounting", 0.0, [] { return ftj_endurance(); }},
      {7, "end-to-end blobs inference", 30.0, [&] { return end_to_end(cfg); }},
      {8, "energy accounting identity", 0.0, [&] { return energy_identity(cfg); }},
      {9, "CLI determinism", 0.0, [] { return determinism(); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && c.limit_s > 0 && secs >= c.limit_s) {
      o = fail(o.detail + "; took " + sci(secs) + " s, limit " + sci(c.limit_s) + " s");
    }
    if (!o.pass) ++failures;
    std::printf("%s %d %s (%.3f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
