#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <stdexcept>

#include "sqa/io.hpp"
#include "sqa/ising.hpp"
#include "sqa/rng.hpp"

using namespace sqa;

TEST_CASE("counter generator reproduces the philox4x32-10 known-answer vectors") {
  CHECK(CounterRng(0).bits(0, 0) == 0xe169c58d6627e8d5ull);
  CHECK(CounterRng(0x299f31d0a4093822ull).bits(0x0370734413198a2eull, 0x85a308d3243f6a88ull) ==
        0x94fdccebd16cfe09ull);
  CHECK(CounterRng(0xffffffffffffffffull)
            .bits(0xffffffffffffffffull, 0xffffffffffffffffull) == 0x41c83b0e408f276dull);

  // Uniform draws live in [0, 1) and substreams are decorrelated.
  const CounterRng rng(42);
  double mean = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double u = rng.uniform(1, static_cast<std::uint64_t>(i));
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    mean += u;
  }
  CHECK(std::abs(mean / 2000.0 - 0.5) < 0.03);
  CHECK(rng.bits(1, 7) != rng.bits(2, 7));
  CHECK(rng.bits(1, 7) == CounterRng(42).bits(1, 7));
}

TEST_CASE("single bond problem") {
  const IsingProblem p = IsingProblem::from_bonds(2, {{0, 1, 1.0}});
  CHECK(p.n_spins() == 2);
  CHECK(p.degree() == 1);
  CHECK(p.bonds().size() == 1);
  CHECK(p.has_bond(0, 1));
  CHECK(p.coupling(1, 0) == 1.0);
}

TEST_CASE("ring topology") {
  const IsingProblem p = build_problem(4, Topology::Ring, {}, 1.0);
  CHECK(p.degree() == 2);
  CHECK(p.bonds().size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(p.neighbors(i).size() == 2);
}

TEST_CASE("complete topology") {
  const IsingProblem p = build_problem(4, Topology::Complete, {}, -0.5);
  CHECK(p.degree() == 3);
  CHECK(p.bonds().size() == 6);
  CHECK(p.coupling(2, 3) == -0.5);
}

TEST_CASE("irregular graph is rejected with the offending vertex") {
  try {
    IsingProblem::from_bonds(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    FAIL("path graph accepted");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("not regular") != std::string::npos);
    CHECK(msg.find("degree") != std::string::npos);
  }
}

TEST_CASE("bad bond lists are rejected") {
  CHECK_THROWS_AS(IsingProblem::from_bonds(2, {{0, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(IsingProblem::from_bonds(2, {{0, 1, 1.0}, {1, 0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(IsingProblem::from_bonds(2, {{0, 3, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(IsingProblem::from_bonds(1, {}), std::invalid_argument);
  CHECK_THROWS_AS(IsingProblem::ring(2, 1.0), std::invalid_argument);
}

TEST_CASE("anneal params validation") {
  CHECK_NOTHROW((AnnealParams{1.0, 2, 0.0, 0.0}.validate()));
  CHECK_THROWS_AS((AnnealParams{0.0, 2, 1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((AnnealParams{1.0, 1, 1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((AnnealParams{1.0, 2, -1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((AnnealParams{1.0, 2, 1.0, -0.1}.validate()), std::invalid_argument);
}

TEST_CASE("spin path flip involution and slice arithmetic") {
  std::mt19937_64 rng(11);
  SpinPath path(3, 4);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 4; ++k) path.set(i, k, rng() % 2 ? +1 : -1);

  const SpinPath before = path;
  path.flip(1, 2);
  CHECK(path != before);
  path.flip(1, 2);
  CHECK(path == before);

  CHECK(path.up(3) == 0);
  CHECK(path.down(0) == 3);
}

TEST_CASE("state index is a bijection") {
  for (std::uint64_t idx = 0; idx < 64; ++idx) {
    const SpinPath path = SpinPath::from_state_index(2, 3, idx);
    CHECK(path.state_index() == idx);
  }
  // -1 maps to bit 0: the all-down path is index 0.
  CHECK(SpinPath(2, 3, -1).state_index() == 0);
  CHECK(SpinPath(2, 3, +1).state_index() == 63);
}

TEST_CASE("problem JSON round trip") {
  const IsingProblem p = IsingProblem::from_bonds(3, {{0, 1, 0.5}, {1, 2, -1.0}, {0, 2, 2.0}});
  const IsingProblem q = io::parse_problem(io::problem_to_json(p));
  CHECK(q.n_spins() == p.n_spins());
  CHECK(q.degree() == p.degree());
  REQUIRE(q.bonds().size() == p.bonds().size());
  for (std::size_t i = 0; i < p.bonds().size(); ++i) {
    CHECK(q.bonds()[i].i == p.bonds()[i].i);
    CHECK(q.bonds()[i].j == p.bonds()[i].j);
    CHECK(q.bonds()[i].coupling == p.bonds()[i].coupling);
  }
}

TEST_CASE("problem file parsing errors") {
  CHECK_THROWS_AS(io::parse_problem("{"), io::InputError);
  CHECK_THROWS_AS(io::parse_problem("{\"bonds\": []}"), io::InputError);
  CHECK_THROWS_AS(io::parse_problem("{\"n\": 2, \"topology\": \"torus\"}"), io::InputError);
  CHECK_THROWS_AS(io::parse_problem("{\"n\": \"two\"}"), io::InputError);
  CHECK_THROWS_AS(io::parse_problem("{\"n\": 2, \"bonds\": [[0, 1, \"x\"]]}"), io::InputError);
  CHECK_THROWS_AS(io::parse_problem("{\"n\": 3, \"bonds\": [[0,1,1.0],[1,2,1.0]]}"),
                  io::InputError);
  CHECK_NOTHROW(io::parse_problem("{\"n\": 4, \"topology\": \"ring\", \"coupling\": 2.0}"));
}

TEST_CASE("path text round trip is exact") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    SpinPath path(4, 5);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 5; ++k) path.set(i, k, rng() % 2 ? +1 : -1);
    CHECK(io::parse_path(io::path_to_text(path)) == path);
  }
  CHECK_THROWS_AS(io::parse_path("2 3\n++-\n+-\n"), io::InputError);
  CHECK_THROWS_AS(io::parse_path("2 3\n++x\n+-+\n"), io::InputError);
}

TEST_CASE("path file round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sqa_core_tests";
  fs::create_directories(dir);
  const fs::path file = dir / "path.txt";

  std::mt19937_64 rng(19);
  SpinPath path(3, 4);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 4; ++k) path.set(i, k, rng() % 2 ? +1 : -1);
  io::save_path(file.string(), path);
  CHECK(io::load_path(file.string()) == path);
  CHECK_THROWS_AS(io::load_path((dir / "missing.txt").string()), io::InputError);
  fs::remove_all(dir);
}

TEST_CASE("policy JSON parsing") {
  const SchedulePolicy p = io::parse_policy(
      "{\"c3\": 1.0, \"c4\": 2.0, \"g\": 0.125, \"h\": 0.5,"
      " \"prop_constants\": {\"d_prime\": 0.01}, \"gamma0\": 5.0}");
  CHECK(p.c3 == 1.0);
  CHECK(p.g.value(10.0) == 0.125);
  CHECK(p.prop_constants.d_prime == 0.01);
  CHECK(p.prop_constants.c_prime == 0.1);  // default kept
  CHECK(p.t_switch < 0.0);                 // unresolved: gamma0 given without t_switch

  const SchedulePolicy q = io::parse_policy(
      "{\"c3\": 1.0, \"c4\": 2.0, \"g\": {\"t\": [1.0, 10.0], \"y\": [0.1, 0.2]}, \"h\": 1.0}");
  CHECK(q.t_switch == 0.0);
  CHECK(q.g.value(1.0) == doctest::Approx(0.1));
  CHECK_THROWS_AS(io::parse_policy("{\"c3\": 1.0, \"c4\": 2.0, \"g\": 0.1}"), io::InputError);
  CHECK_THROWS_AS(io::parse_policy("{\"c3\": 1.0, \"c4\": 2.0, \"g\": \"x\", \"h\": 1.0}"),
                  io::InputError);
}
