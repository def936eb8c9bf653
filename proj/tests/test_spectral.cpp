#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "sqa/oracle.hpp"
#include "sqa/spectral.hpp"

using namespace sqa;

namespace {

// Single-bond problem at the (0.5, 0.05) reduced couplings.
const AnnealParams kParams{2.0, 2, 0.5, 0.05};

IsingProblem bond_problem(double coupling = 1.0) {
  return IsingProblem::from_bonds(2, {{0, 1, coupling}});
}

Eigen::VectorXd boltzmann_of(const GeneratorMatrices& g) {
  Eigen::VectorXd pi = (-(g.h0_diag.array() - g.h0_diag.minCoeff())).exp();
  pi /= pi.sum();
  return pi;
}

}  // namespace

TEST_CASE("generator structure on the 16-state system") {
  const IsingProblem problem = bond_problem();
  const GeneratorMatrices g = build_generator(problem, kParams);
  REQUIRE(g.w.rows() == 16);

  SUBCASE("columns sum to zero and off-diagonals are nonnegative") {
    CHECK(g.w.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c)
        if (r != c) CHECK(g.w(r, c) >= 0.0);
  }

  SUBCASE("off-diagonal support is exactly single flips and bonded pair flips") {
    for (std::uint64_t from = 0; from < 16; ++from) {
      for (std::uint64_t to = 0; to < 16; ++to) {
        if (from == to) continue;
        const std::uint64_t diff = from ^ to;
        const int popcount = __builtin_popcountll(diff);
        // Site-major layout, M = 2: site 0 holds bits 0..1, site 1 bits 2..3.
        const bool single = popcount == 1;
        const bool pair_same_slice =
            popcount == 2 && ((diff & 3) != 0) && ((diff >> 2) == (diff & 3));
        const bool connected = g.w(static_cast<int>(to), static_cast<int>(from)) > 0.0;
        CHECK(connected == (single || pair_same_slice));
      }
    }
  }

  SUBCASE("stationarity of the Boltzmann vector") {
    CHECK((g.w * boltzmann_of(g)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("detailed balance for every pair") {
    const Eigen::VectorXd pi = boltzmann_of(g);
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c)
        if (r != c)
          CHECK(std::abs(g.w(r, c) * pi(c) - g.w(c, r) * pi(r)) < 1e-14);
  }

  SUBCASE("quantum Hamiltonian annihilates the root-Boltzmann vector") {
    Eigen::VectorXd ground = (-0.5 * (g.h0_diag.array() - g.h0_diag.minCoeff())).exp();
    ground.normalize();
    CHECK((g.h_quantum - g.h_quantum.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((g.h_quantum * ground).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("state space caps") {
  CHECK(StateSpace(2, 3).n_states == 64);
  CHECK(StateSpace(4, 5).n_states == (1u << 20));
  CHECK_THROWS_AS(StateSpace(4, 6), std::invalid_argument);  // 24 path spins
  const IsingProblem big = IsingProblem::ring(11, 0.1);
  CHECK_THROWS_AS(oracle::st_partition_transfer(big, (AnnealParams{1.0, 2, 1.0, 0.0})),
                  std::invalid_argument);  // transfer contraction caps at 10 sites
}

TEST_CASE("spectral gap positivity and guards") {
  const GeneratorMatrices g = build_generator(bond_problem(), AnnealParams{1.0, 2, 2.0, 0.05});
  CHECK(spectral_gap(g) > 0.0);

  GeneratorMatrices broken = g;
  broken.h_quantum.diagonal().array() += 1.0;  // ground eigenvalue no longer zero
  CHECK_THROWS_AS(spectral_gap(broken), std::runtime_error);

  CHECK_THROWS_AS(build_generator(bond_problem(), AnnealParams{1.0, 2, 0.1, 0.5}),
                  NonStoquasticError);
  CHECK_THROWS_AS(build_generator(IsingProblem::ring(4, 1.0), AnnealParams{1.0, 4, 1.0, 0.0}),
                  std::invalid_argument);  // 2^16 states is past the dense cap
}

TEST_CASE("gap closes monotonically as the field is switched off") {
  const IsingProblem problem = bond_problem();
  double prev = std::numeric_limits<double>::infinity();
  for (const double gamma : {2.0, 1.0, 0.5, 0.25, 0.125, 0.0625}) {
    const double gap = spectral_gap(build_generator(problem, AnnealParams{1.0, 2, gamma, 0.0}));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("decoupled chains: single-flip generator matches the tensored single-site chain") {
  // J = 0, K = 0: the action decouples per site, each a periodic chain with
  // coupling b*alpha1. The chain oracle is built directly here.
  const int m = 3;
  const AnnealParams params{3.0, m, 0.5, 0.0};  // a = beta Gamma / M = 0.5
  const IsingProblem problem = bond_problem(0.0);
  const TrotterCoefficients c = coefficients(params, 1);

  const int dim = 1 << m;
  Eigen::MatrixXd chain = Eigen::MatrixXd::Zero(dim, dim);
  auto chain_energy = [&](int s) {
    double e = 0.0;
    for (int k = 0; k < m; ++k) {
      const int sk = (s >> k) & 1 ? 1 : -1;
      const int skp = (s >> ((k + 1) % m)) & 1 ? 1 : -1;
      e -= c.alpha1 * sk * skp;
    }
    return e;
  };
  for (int s = 0; s < dim; ++s) {
    for (int k = 0; k < m; ++k) {
      const int s2 = s ^ (1 << k);
      const double delta = chain_energy(s2) - chain_energy(s);
      const double w = 1.0 / (std::exp(0.5 * delta) + std::exp(-0.5 * delta));
      chain(s2, s) = -w;
      chain(s, s) += w * std::exp(-0.5 * delta);
    }
  }
  const double chain_gap = gap_of(chain);

  const double single_gap =
      spectral_gap(build_generator(problem, params, MoveSet::SingleOnly));
  CHECK(single_gap == doctest::Approx(chain_gap).epsilon(1e-12));

  // Pair moves only add transition channels; the gap cannot shrink.
  const double full_gap = spectral_gap(build_generator(problem, params));
  CHECK(full_gap >= single_gap - 1e-12);
}

TEST_CASE("long-time master-equation evolution reaches the Boltzmann state") {
  const GeneratorMatrices g = build_generator(bond_problem(), kParams);
  const Eigen::VectorXd pi = boltzmann_of(g);
  const double horizon = 50.0 / spectral_gap(g);

  Eigen::VectorXd p = Eigen::VectorXd::Zero(16);
  p(0) = 1.0;
  p = oracle::expm(g.w * horizon) * p;
  CHECK(std::abs(p.sum() - 1.0) < 1e-10);
  CHECK(0.5 * (p - pi).cwiseAbs().sum() < 1e-8);
}

TEST_CASE("matrix-free gap estimate agrees with the dense eigensolver") {
  const IsingProblem problem = bond_problem();
  for (const int m : {3, 5}) {
    const AnnealParams params{1.0, m, 1.0, 0.02};
    const double dense = spectral_gap(build_generator(problem, params));
    const double matfree = spectral_gap_matfree(problem, params, 6000, 1e-12);
    CHECK(matfree == doctest::Approx(dense).epsilon(1e-4));
  }
}

TEST_CASE("frozen parameters give a zero adiabatic ratio") {
  const AdiabaticReport r = adiabatic_ratio_from(
      bond_problem(), [](double) { return kParams; }, 1.0, 0.1, 0.01);
  CHECK(r.norm_dhcal_dt == 0.0);
  CHECK(r.ratio == 0.0);
  CHECK(r.gap_h > 0.0);
  CHECK(r.gap_hcal == doctest::Approx(r.gap_h).epsilon(1e-12));
}

TEST_CASE("adiabatic ratio decays along schedules, with and without the catalyst") {
  const IsingProblem problem = bond_problem();
  SchedulePolicy policy;
  policy.c3 = 1.0;
  policy.c4 = 2.0;
  policy.g = ExponentFn(0.25);
  policy.h = ExponentFn(1.0);
  const ScheduleBase base{2.0, 2, 1};

  const AdiabaticReport early = adiabatic_ratio(problem, policy, base, 1e2);
  const AdiabaticReport late = adiabatic_ratio(problem, policy, base, 1e4);
  CHECK(late.ratio < early.ratio);
  CHECK(early.gap_h > 0.0);
  CHECK(early.gap_hcal > 0.0);

  SchedulePolicy off = policy;
  off.kappa_off = true;
  const AdiabaticReport early_off = adiabatic_ratio(problem, off, base, 1e2);
  const AdiabaticReport late_off = adiabatic_ratio(problem, off, base, 1e4);
  CHECK(late_off.ratio < early_off.ratio);

  SchedulePolicy ramped = policy;
  ramped.gamma0 = 10.0;
  ramped.t_switch = 50.0;
  CHECK_THROWS_AS(adiabatic_ratio(problem, ramped, base, 50.05), std::invalid_argument);
}

TEST_CASE("gap bound report") {
  const IsingProblem problem = bond_problem();

  SUBCASE("tiny constant satisfies the bound trivially") {
    const GapBoundReport r = gap_bound_report(problem, kParams, 1e-12, 0.0);
    CHECK(r.satisfied);
    CHECK(r.bound < r.measured_gap);
  }

  SUBCASE("fields are mutually consistent") {
    const GapBoundReport r = gap_bound_report(problem, kParams, 1.0, 0.0);
    const double n = 2.0;
    const double expected_bound =
        1.0 * std::sqrt(n) * std::pow(2.0, -1.0) * std::exp(-n * r.max_abs_bh_double / 2.0);
    CHECK(r.bound == doctest::Approx(expected_bound).epsilon(1e-12));
    CHECK(r.satisfied == (r.measured_gap >= r.bound));
    CHECK(r.max_abs_bh_single > 0.0);
    CHECK(r.max_abs_bh_double > 0.0);
  }

  SUBCASE("two-flip branch becomes the smaller late in the schedule") {
    // The branch ordering is a large-N statement; at N = 2 the pair branch
    // keeps an e^{2 beta J / M} handicap from the cancelled bond, so it needs
    // N = 4 and a weak coupling scale to show up at desk size.
    SchedulePolicy policy;
    policy.c3 = 1.0;
    policy.c4 = 2.0;
    policy.g = ExponentFn(0.125);
    policy.h = ExponentFn(0.5);
    const IsingProblem ring4 = IsingProblem::ring(4, 1.0);
    const ScheduleBase base{0.2, 2, 2};
    const GapBoundReport early =
        gap_bound_report(ring4, params_at(policy, base, 1e2), 1.0, 0.0);
    const GapBoundReport late =
        gap_bound_report(ring4, params_at(policy, base, 1e6), 1.0, 0.0);
    CHECK(late.double_branch < late.single_branch);
    // The pair branch loses ground as t grows.
    CHECK(late.double_branch / late.single_branch <
          early.double_branch / early.single_branch);
  }
}
