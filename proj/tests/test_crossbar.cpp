#include <doctest.h>

#include "oracles.hpp"
#include "pxbar/crossbar.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace pxbar;

namespace {

DeviceParams pcm() {
  DeviceParams p;
  p.v_set = 1.0;
  p.v_reset = 2.5;
  p.p_set = 1e-3;
  p.p_reset = 5e-3;
  p.tau_set = 100e-9;
  p.g_a = 1e-6;
  p.g_c = 1e-4;
  return p;
}

std::shared_ptr<const MaterialRecord> lossy() {
  std::istringstream in(
      "wavelength_nm,n_amorphous,k_amorphous,n_crystalline,k_crystalline\n"
      "1500,3.9,0.04,5.9,0.8\n1600,3.8,0.03,5.8,0.7\n");
  return std::make_shared<const MaterialRecord>(parse_material(in, "synthetic", 1e-6, 1e-4));
}

WaveguideCellGeometry geometry() {
  WaveguideCellGeometry g;
  g.length_m = 10e-6;
  g.wavelength_nm = 1550;
  g.gamma = 0.1;
  g.fill = 0.5;
  g.alpha_min = 100.0;
  g.c2 = 1e6;
  g.n_mode0 = 1.6;
  return g;
}

CrossbarArray random_array(std::mt19937_64& rng, std::size_t r, std::size_t c,
                           double r_row = 0.0, double r_col = 0.0) {
  CrossbarArray a(r, c, pcm(), geometry(), lossy(), r_row, r_col);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n = 0; n < r; ++n)
    for (std::size_t m = 0; m < c; ++m) a.set_cell(n, m, {Technology::PCM, u(rng), 0, false});
  return a;
}

oracle::Matrix to_rows(const Eigen::MatrixXd& g) {
  oracle::Matrix out(g.rows(), oracle::Vector(g.cols()));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) out[i][j] = g(i, j);
  return out;
}

oracle::Vector to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("conductance_matrix") {
  CrossbarArray a(3, 2, pcm());
  CHECK((conductance_matrix(a).array() == 1e-6).all());
  for (std::size_t n = 0; n < 3; ++n)
    for (std::size_t m = 0; m < 2; ++m) a.set_cell(n, m, {Technology::PCM, 1.0, 0, false});
  CHECK((conductance_matrix(a).array() == 1e-4).all());

  std::mt19937_64 rng(1);
  auto b = random_array(rng, 4, 5);
  const auto g = conductance_matrix(b);
  for (std::size_t n = 0; n < 4; ++n)
    for (std::size_t m = 0; m < 5; ++m) CHECK(g(n, m) == conductance(b.cell(n, m), b.params()));
}

TEST_CASE("vmm_ideal examples") {
  std::mt19937_64 rng(2);
  auto a = random_array(rng, 3, 4);
  CHECK(vmm_ideal(a, Eigen::VectorXd::Zero(3)).isZero(0.0));
  CHECK_THROWS_AS(vmm_ideal(a, Eigen::VectorXd::Zero(4)), DimensionError);

  // One-hot via a very high-contrast device.
  auto p = pcm();
  p.g_a = 1e-300;
  p.g_c = 1e-3;
  CrossbarArray one(2, 2, p);
  one.set_cell(1, 0, {Technology::PCM, 1.0, 0, false});
  const auto i = vmm_ideal(one, Eigen::Vector2d(0.3, 0.7));
  CHECK(i(0) == doctest::Approx(0.7e-3));
  CHECK(i(1) < 1e-299);

  // G = [[1,2],[3,4]] mS, V = [1,2] V -> I = [7,10] mA.
  auto q = pcm();
  q.g_a = 0.5e-3;
  q.g_c = 5e-3;
  CrossbarArray two(2, 2, q);
  Eigen::Matrix2d g;
  g << 1e-3, 2e-3, 3e-3, 4e-3;
  two.set_conductances(g);
  const auto expected = oracle::matvec(to_rows(g), {1.0, 2.0});
  CHECK(expected[0] == doctest::Approx(7e-3).epsilon(1e-15));
  CHECK(expected[1] == doctest::Approx(10e-3).epsilon(1e-15));
  const auto got = vmm_ideal(two, Eigen::Vector2d(1.0, 2.0));
  CHECK(got(0) == doctest::Approx(7e-3).epsilon(1e-12));
  CHECK(got(1) == doctest::Approx(10e-3).epsilon(1e-12));
}

TEST_CASE("vmm_ideal is linear") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_array(rng, 6, 5);
    Eigen::VectorXd v1(6), v2(6);
    for (int k = 0; k < 6; ++k) {
      v1(k) = nd(rng);
      v2(k) = nd(rng);
    }
    const double s = nd(rng), t = nd(rng);
    const Eigen::VectorXd lhs = vmm_ideal(a, s * v1 + t * v2);
    const Eigen::VectorXd rhs = s * vmm_ideal(a, v1) + t * vmm_ideal(a, v2);
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1e-30, rhs.norm()) + 1e-18);
  }
}

TEST_CASE("vmm_nonideal equals vmm_ideal with ideal wires") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_array(rng, 8, 8);
    Eigen::VectorXd v(8);
    for (int k = 0; k < 8; ++k) v(k) = u(rng);
    const auto ideal = vmm_ideal(a, v);
    const auto non = vmm_nonideal(a, v);
    CHECK((non - ideal).cwiseAbs().maxCoeff() <= 1e-9 * ideal.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("vmm_nonideal 1x1 closed form") {
  for (double r_row : {0.0, 3.0, 250.0}) {
    for (double r_col : {0.0, 7.0, 1e4}) {
      CrossbarArray a(1, 1, pcm(), {}, nullptr, r_row, r_col);
      a.set_cell(0, 0, {Technology::PCM, 0.37, 0, false});
      const double g = conductance(a.cell(0, 0), a.params());
      const double r = r_row + r_col;
      const double v = 0.15;
      const double expected = v * g / (1.0 + g * r);
      CHECK(std::abs(vmm_nonideal(a, Eigen::VectorXd::Constant(1, v))(0) - expected) <=
            1e-12 * expected);
    }
  }
}

TEST_CASE("vmm_nonideal matches the brute-force MNA oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  // Large conductances make the wire drop visible.
  auto p = pcm();
  p.g_a = 1e-3;
  p.g_c = 1e-1;
  for (const auto [rows, cols, r] : {std::tuple{2, 2, 10.0}, std::tuple{3, 4, 2.0}, std::tuple{5, 3, 0.5}}) {
    CrossbarArray a(rows, cols, p, {}, nullptr, r, r);
    std::uniform_real_distribution<double> s01(0.0, 1.0);
    for (int n = 0; n < rows; ++n)
      for (int m = 0; m < cols; ++m) a.set_cell(n, m, {Technology::PCM, s01(rng), 0, false});
    Eigen::VectorXd v(rows);
    for (int k = 0; k < rows; ++k) v(k) = u(rng);
    const auto expected = oracle::crossbar_mna(to_rows(conductance_matrix(a)), to_vec(v), r, r);
    const auto got = vmm_nonideal(a, v);
    for (int m = 0; m < cols; ++m) CHECK(std::abs(got(m) - expected[m]) <= 1e-9 * std::abs(expected[m]));
    // The wires cost current.
    const auto ideal = vmm_ideal(a, v);
    for (int m = 0; m < cols; ++m) CHECK(got(m) < ideal(m));
  }
}

TEST_CASE("vmm_nonideal column deficit shrinks as wires improve") {
  std::mt19937_64 rng(6);
  auto a = random_array(rng, 6, 6);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(6, 0.1);
  const auto ideal = vmm_ideal(a, v);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(6);
  for (double r : {1e4, 1e3, 1e2, 10.0, 1.0, 0.1, 0.0}) {
    a.set_wire_resistance(r, r);
    const auto got = vmm_nonideal(a, v);
    for (int m = 0; m < 6; ++m) {
      CHECK(std::abs(got(m)) <= std::abs(ideal(m)) + 1e-15);
      CHECK(got(m) >= prev(m));
    }
    prev = got;
  }
  CHECK((prev - ideal).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("reads never mutate cell state") {
  std::mt19937_64 rng(7);
  auto a = random_array(rng, 4, 4, 5.0, 5.0);
  const auto before = a.cells();
  vmm_ideal(a, Eigen::VectorXd::Constant(4, 0.2));
  vmm_nonideal(a, Eigen::VectorXd::Constant(4, 0.2));
  optical_read_row(a, 2, 1e-3);
  electro_optic_snapshot(a);
  CHECK(a.cells() == before);
}

TEST_CASE("optical_read_row") {
  CrossbarArray a(3, 5, pcm(), geometry(), lossy());
  CHECK(optical_read_row(a, 0, 0.0) == 0.0);
  const double p_bal = optical_read_row(a, 1, 1e-3);
  CHECK(p_bal == doctest::Approx(1e-3 * std::exp(-100.0 * 10e-6 * 5)).epsilon(1e-13));
  a.set_cell(1, 3, {Technology::PCM, 0.4, 0, false});
  const double p_one = optical_read_row(a, 1, 1e-3);
  CHECK(p_one < p_bal);
  CHECK(p_one == doctest::Approx(p_bal / cell_transmission(geometry(), *lossy(), 0.0).transmission *
                                 cell_transmission(geometry(), *lossy(), 0.4).transmission)
                     .epsilon(1e-13));
  CHECK_THROWS_AS(optical_read_row(a, 3, 1e-3), IndexError);
  CrossbarArray dark(1, 1, pcm());
  CHECK_THROWS_AS(optical_read_row(dark, 0, 1e-3), ConfigError);
}

TEST_CASE("program_cell examples") {
  CrossbarArray a(1, 1, pcm());
  const auto fresh = program_cell(a, 0, 0, 1e-6, 0.01, 64);
  CHECK(fresh.log.empty());

  const auto full = program_cell(a, 0, 0, 1e-4, 0.01, 64);
  CHECK(a.cell(0, 0).s == 1.0);
  CHECK(resistance_class(a.cell(0, 0), a.params()) == ResistanceClass::LRS);
  CHECK(full.log.size() <= 64);

  CHECK_THROWS_AS(program_cell(a, 0, 0, 2e-4, 0.01, 64), TargetOutOfRange);
  CHECK_THROWS_AS(program_cell(a, 0, 0, 0.5e-6, 0.01, 64), TargetOutOfRange);
}

TEST_CASE("program_cell gives up with the pulse log") {
  CrossbarArray a(1, 1, pcm());
  try {
    program_cell(a, 0, 0, 3.3e-5, 1e-4, 3);
    FAIL("expected MaxPulsesExceeded");
  } catch (const MaxPulsesExceeded& e) {
    CHECK(e.partial().log.size() == 3);
  }
}

TEST_CASE("program_cell on a binary device") {
  auto p = pcm();
  p.analog = false;
  CrossbarArray a(1, 1, p);
  CHECK_THROWS_AS(program_cell(a, 0, 0, 1e-5, 0.01, 64), TargetOutOfRange);
  const auto r = program_cell(a, 0, 0, 1e-4, 0.01, 64);
  CHECK(r.log.size() == 1);
  CHECK(a.cell(0, 0).s == 1.0);
}

TEST_CASE("program_cell records pulses in the trace") {
  CrossbarArray a(1, 1, pcm());
  Trace trace;
  const auto r = program_cell(a, 0, 0, 2e-5, 0.01, 64, {}, &trace);
  REQUIRE(trace.programs.size() == r.log.size());
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    CHECK(trace.programs[i].g_at_pulse == r.log[i].g_before);
  }
}

TEST_CASE("property: program_cell reaches 1000 random targets") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1e-6, 1e-4);
  std::size_t worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    CrossbarArray a(1, 1, pcm());
    const double target = u(rng);
    const auto r = program_cell(a, 0, 0, target, 0.01, 64);
    CHECK(std::abs(r.final_conductance - target) / target <= 0.01);
    worst = std::max(worst, r.log.size());
  }
  MESSAGE("worst-case pulses: " << worst);
}

TEST_CASE("program_array") {
  std::mt19937_64 rng(9);
  auto a = random_array(rng, 3, 3);
  const auto same = program_array(a, conductance_matrix(a), 0.01, 64);
  CHECK(same.total_pulses == 0);
  CHECK(same.total_energy == 0.0);

  CrossbarArray b(3, 3, pcm());
  const auto mid = program_array(b, Eigen::MatrixXd::Constant(3, 3, 1e-5), 0.01, 64);
  CHECK(mid.failures() == 0);
  for (const auto& c : mid.cells) CHECK(std::abs(c.final_conductance - 1e-5) / 1e-5 <= 0.01);
  CHECK(mid.total_energy > 0.0);

  CrossbarArray c(2, 2, pcm());
  Eigen::MatrixXd t = Eigen::MatrixXd::Constant(2, 2, 5e-5);
  t(0, 1) = 5e-4;
  const auto iso = program_array(c, t, 0.01, 64);
  CHECK(iso.failures() == 1);
  CHECK_FALSE(iso.cells[1].success);
  CHECK(iso.cells[1].error.find("outside") != std::string::npos);
  CHECK(iso.cells[0].success);
  CHECK(iso.cells[2].success);
  CHECK(iso.cells[3].success);
}

TEST_CASE("electro_optic_snapshot") {
  CrossbarArray a(2, 3, pcm(), geometry(), lossy());
  const auto base = electro_optic_snapshot(a);
  for (const auto& c : base) {
    CHECK(c.resistance_class == ResistanceClass::HRS);
    CHECK(c.transmission == cell_transmission(geometry(), *lossy(), 0.0).transmission);
  }
  double t_min = 1.0;
  for (int i = 0; i <= 100; ++i) t_min = std::min(t_min, cell_transmission(geometry(), *lossy(), i / 100.0).transmission);
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t m = 0; m < 3; ++m) a.set_cell(n, m, {Technology::PCM, 1.0, 0, false});
  const auto on = electro_optic_snapshot(a);
  for (const auto& c : on) {
    CHECK(c.resistance_class == ResistanceClass::LRS);
    CHECK(c.transmission == t_min);
    CHECK(c.conductance == 1e-4);
  }
  const auto again = electro_optic_snapshot(a);
  for (std::size_t i = 0; i < on.size(); ++i) {
    CHECK(again[i].s == on[i].s);
    CHECK(again[i].transmission == on[i].transmission);
    CHECK(again[i].phase_rad == on[i].phase_rad);
  }
}

TEST_CASE("stack_layers") {
  auto a = std::make_shared<const CrossbarArray>(4, 4, pcm());
  auto b = std::make_shared<const CrossbarArray>(4, 4, pcm());
  const auto single = stack_layers({a}, {});
  CHECK(single.layers.size() == 1);
  CHECK(single.total_interlayer_crossings() == 0);

  const auto two = stack_layers({a, b}, {90.0});
  CHECK(two.layers[1].crossings_with_below == 16);
  CHECK(*two.layers[1].crossing_angle_deg == 90.0);

  // Oblique stripes miss each other near the corners.
  CHECK(stack_layers({a, b}, {60.0}).total_interlayer_crossings() < 16);
  CHECK(stack_layers({a, b}, {5.0}).total_interlayer_crossings() <
        stack_layers({a, b}, {60.0}).total_interlayer_crossings());
  CHECK(stack_layers({a, b}, {45.0}).total_interlayer_crossings() ==
        stack_layers({a, b}, {135.0}).total_interlayer_crossings());

  CHECK_THROWS_AS(stack_layers({a, b}, {0.0}), AngleOutOfRange);
  CHECK_THROWS_AS(stack_layers({a, b}, {180.0}), AngleOutOfRange);
  CHECK_THROWS_AS(stack_layers({a, b}, {}), DimensionError);
}

TEST_CASE("array indexing errors") {
  CrossbarArray a(2, 2, pcm());
  CHECK_THROWS_AS(a.cell(2, 0), IndexError);
  CHECK_THROWS_AS(a.set_cell(0, 0, {Technology::PCM, 1.5, 0, false}), InvariantError);
  CHECK_THROWS_AS(CrossbarArray(0, 2, pcm()), DimensionError);
  CHECK_THROWS_AS(CrossbarArray(1, 1, pcm(), {}, nullptr, -1.0, 0.0), InvariantError);
}
