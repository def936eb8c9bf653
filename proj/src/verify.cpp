#include "sqa/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "sqa/cli.hpp"
#include "sqa/energy.hpp"
#include "sqa/engine.hpp"
#include "sqa/io.hpp"
#include "sqa/oracle.hpp"
#include "sqa/schedule.hpp"
#include "sqa/spectral.hpp"
#include "sqa/trotter.hpp"

namespace sqa::verify {

namespace {

struct Criterion {
  int failures = 0;
  std::ostream* out = nullptr;

  void report(int number, const std::string& name, bool pass, const std::string& detail,
              double seconds) {
    char buf[1024];
    std::snprintf(buf, sizeof(buf), "%s %2d  %s: %s [%.2f s]\n", pass ? "PASS" : "FAIL", number,
                  name.c_str(), detail.c_str(), seconds);
    *out << buf;
    if (!pass) ++failures;
  }

  template <typename Fn>
  void run(int number, const std::string& name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      pass = fn(detail);
    } catch (const std::exception& e) {
      pass = false;
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(number, name, pass, detail, seconds);
  }
};

std::string fmt(const char* format, ...) {
  char buf[768];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return std::string(buf);
}

// --- criterion bodies -------------------------------------------------------

bool pair_identity(std::string& detail, int samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double a = 0.05 + 1.95 * unit(rng);
    const double margin = std::atanh(std::tanh(a) * std::tanh(a));
    const double b_k = 0.9 * margin * unit(rng);
    const TrotterCoefficients c = coefficients_from_reduced(a, b_k);
    const Eigen::Matrix4d m = oracle::pair_exponential_expm(a, b_k);
    for (int row = 0; row < 4; ++row) {
      for (int col = 0; col < 4; ++col) {
        const int s1 = (row & 2) ? -1 : +1, s2 = (row & 1) ? -1 : +1;
        const int r1 = (col & 2) ? -1 : +1, r2 = (col & 1) ? -1 : +1;
        const int u = s1 * r1, v = s2 * r2;
        const double alpha_form = std::exp(c.alpha1 * (u + v) + c.alpha2 * u * v + c.lambda);
        worst = std::max(worst, std::abs(alpha_form - m(row, col)) / std::abs(m(row, col)));
      }
    }
  }
  detail = fmt("max rel err %.3g over %d points (limit %g)", worst, samples, tol);
  return worst < tol;
}

bool sign_free_boundary(std::string& detail) {
  // beta/M = 1, b = 4: reduced couplings a = Gamma/4, b_k = K.
  double worst = 0.0;
  for (int line = 1; line <= 50; ++line) {
    const double gamma = 3.0 * line / 50.0;
    const double a = gamma / 4.0;
    double lo = 0.0, hi = 1.0;
    if (!(pair_kernel(a, lo).c2 > 0.0) || !(pair_kernel(a, hi).c2 < 0.0)) {
      detail = fmt("bisection bracket failed at gamma=%.3f", gamma);
      return false;
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (pair_kernel(a, mid).c2 > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    const double exact = std::atanh(std::tanh(a) * std::tanh(a));
    worst = std::max(worst, std::abs(root - exact));
  }
  detail = fmt("worst |Delta K| %.3g over 50 lines (limit 1e-6)", worst);
  return worst < 1e-6;
}

bool flip_deltas(std::string& detail) {
  const IsingProblem problem = IsingProblem::ring(3, 1.0);
  AnnealParams params{1.0, 4, 1.0, 0.02};
  const TrotterCoefficients coeffs = coefficients(params, problem.degree());

  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_path = [&] {
    SpinPath p(3, 4);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 4; ++k) p.set(i, k, unit(rng) < 0.5 ? -1 : +1);
    return p;
  };

  double worst_delta = 0.0, worst_offset = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    SpinPath path = random_path();
    const double e0 = energy(path, problem, coeffs).total;
    const int k = static_cast<int>(unit(rng) * 4) % 4;

    if (unit(rng) < 0.5) {
      const int i = static_cast<int>(unit(rng) * 3) % 3;
      const double local = delta_single(path, problem, coeffs, i, k);
      path.flip(i, k);
      worst_delta = std::max(worst_delta,
                             std::abs(local - (energy(path, problem, coeffs).total - e0)));
    } else {
      const Bond& b = problem.bonds()[static_cast<std::size_t>(unit(rng) * 3) % 3];
      const double local = delta_double(path, problem, coeffs, b.i, b.j, k);
      const double single_i = delta_single(path, problem, coeffs, b.i, k);
      const double single_j = delta_single(path, problem, coeffs, b.j, k);

      SpinPath flipped = path;
      flipped.flip(b.i, k);
      flipped.flip(b.j, k);
      worst_delta = std::max(worst_delta,
                             std::abs(local - (energy(flipped, problem, coeffs).total - e0)));

      // Offset identity: bH_{i,j,k} = bH_{i,k} + bH_{j,k} + 2 delta, with the
      // i and j single-flip terms entering symmetrically.
      const int kp = path.up(k), km = path.down(k);
      const double ui_up = path.spin(b.i, kp) * path.spin(b.i, k);
      const double ui_dn = path.spin(b.i, k) * path.spin(b.i, km);
      const double uj_up = path.spin(b.j, kp) * path.spin(b.j, k);
      const double uj_dn = path.spin(b.j, k) * path.spin(b.j, km);
      const double pair_offset = coeffs.beta_over_m * b.coupling * path.spin(b.i, k) * path.spin(b.j, k) +
                                 coeffs.alpha2 * (ui_up * uj_up + ui_dn * uj_dn);
      const double bh_ij = -0.5 * local;
      const double bh_i = -0.5 * single_i;
      const double bh_j = -0.5 * single_j;
      worst_offset = std::max(worst_offset, std::abs(bh_ij - (bh_i + bh_j + 2.0 * pair_offset)));
    }
  }
  detail = fmt("worst |local - global| %.3g, worst offset-identity residual %.3g (limit 1e-12)",
               worst_delta, worst_offset);
  return worst_delta < 1e-12 && worst_offset < 1e-12;
}

bool generator_suite(std::string& detail, int n, int m) {
  const IsingProblem problem =
      n == 2 ? IsingProblem::from_bonds(2, {{0, 1, 1.0}}) : IsingProblem::ring(n, 1.0);
  AnnealParams params{1.0, m, 1.0, 0.02};
  const GeneratorMatrices g = build_generator(problem, params);
  const Eigen::Index dim = g.w.rows();

  const double col_sum = g.w.colwise().sum().cwiseAbs().maxCoeff();
  const double asym = (g.h_quantum - g.h_quantum.transpose()).cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.h_quantum);
  const double e0 = solver.eigenvalues()(0);
  const double gap = solver.eigenvalues()(1) - e0;

  Eigen::VectorXd ground(dim);
  const double shift = g.h0_diag.minCoeff();
  for (Eigen::Index s = 0; s < dim; ++s) ground(s) = std::exp(-0.5 * (g.h0_diag(s) - shift));
  ground.normalize();
  const Eigen::VectorXd v0 = solver.eigenvectors().col(0);
  const double cosine_dist = 1.0 - std::abs(v0.dot(ground));

  detail = fmt("N=%d M=%d: col sum %.2g, asym %.2g, e0 %.2g, cos dist %.2g, gap %.4g", n, m,
               col_sum, asym, e0, cosine_dist, gap);
  return col_sum < 1e-12 && asym < 1e-12 && std::abs(e0) < 1e-10 && cosine_dist < 1e-10 &&
         gap > 0.0;
}

bool trotter_convergence(std::string& detail) {
  const IsingProblem problem = IsingProblem::from_bonds(2, {{0, 1, 1.0}});
  AnnealParams params{1.0, 2, 1.0, 0.01};
  const double zq = oracle::quantum_partition(problem, params);

  std::string table;
  double prev = 0.0;
  bool decreasing = true, all_sign_free = true;
  double final_rel = 0.0;
  for (const int m : {2, 4, 8, 16}) {
    params.slices = m;
    all_sign_free = all_sign_free && sign_free(params, problem.degree());
    const double zst = oracle::st_partition_transfer(problem, params);
    const double err = std::abs(zst - zq);
    if (m > 2 && !(err < prev)) decreasing = false;
    prev = err;
    final_rel = err / zq;
    table += fmt(" M=%d err=%.3g", m, err);
  }
  detail = fmt("Z_quantum=%.6f,%s, final rel %.3g (limit 1e-3)", zq, table.c_str(), final_rel);
  return decreasing && all_sign_free && final_rel < 1e-3;
}

bool mc_equilibrium(std::string& detail) {
  const IsingProblem problem = IsingProblem::from_bonds(2, {{0, 1, 1.0}});
  const AnnealParams params{1.0, 3, 1.0, 0.05};
  const TrotterCoefficients coeffs = coefficients(params, problem.degree());
  const Eigen::VectorXd pi = oracle::exact_boltzmann(problem, params);

  double exact_corr = 0.0;
  for (Eigen::Index s = 0; s < pi.size(); ++s) {
    const SpinPath path = SpinPath::from_state_index(2, 3, static_cast<std::uint64_t>(s));
    exact_corr += pi(s) * measure(path, problem).corr_mean;
  }

  const long sweeps = 1000000;
  const long batch = 10000;
  const CounterRng rng(91);
  SpinPath path(2, 3);
  std::vector<double> counts(static_cast<std::size_t>(pi.size()), 0.0);
  std::vector<double> batch_means;
  double batch_acc = 0.0;
  for (long s = 0; s < sweeps; ++s) {
    StreamRng sweep_rng(rng, 1, static_cast<std::uint64_t>(s) << 20);
    sweep(path, problem, coeffs, sweep_rng);
    counts[path.state_index()] += 1.0;
    batch_acc += measure(path, problem).corr_mean;
    if ((s + 1) % batch == 0) {
      batch_means.push_back(batch_acc / batch);
      batch_acc = 0.0;
    }
  }

  double tv = 0.0;
  for (Eigen::Index s = 0; s < pi.size(); ++s)
    tv += 0.5 * std::abs(counts[static_cast<std::size_t>(s)] / sweeps - pi(s));

  double mean = 0.0;
  for (const double b : batch_means) mean += b;
  mean /= static_cast<double>(batch_means.size());
  double var = 0.0;
  for (const double b : batch_means) var += (b - mean) * (b - mean);
  var /= static_cast<double>(batch_means.size() - 1);
  const double se = std::sqrt(var / static_cast<double>(batch_means.size()));
  const double sigmas = std::abs(mean - exact_corr) / se;

  detail = fmt("TV %.4f (limit 0.02), corr %.5f vs exact %.5f = %.2f se (limit 3)", tv, mean,
               exact_corr, sigmas);
  return tv < 0.02 && sigmas < 3.0;
}

SchedulePolicy reference_policy(int n) {
  SchedulePolicy p;
  p.c3 = 1.0;
  p.c4 = 2.0;
  p.g = ExponentFn(1.0 / (2.0 * n));
  p.h = ExponentFn(2.0 / n);
  return p;
}

bool schedule_validation(std::string& detail) {
  std::string notes;
  bool ok = true;

  for (const int n : {2, 4, 8}) {
    const ValidationReport r = validate(reference_policy(n), n);
    if (!r.all_pass) {
      ok = false;
      notes += fmt(" baseline N=%d rejected;", n);
    }
  }

  // Each mutation must fail exactly its intended condition among 47..55.
  auto exact_failure = [&](const SchedulePolicy& policy, int n, const std::string& want,
                           const char* label) {
    const ValidationReport r = validate(policy, n);
    for (const auto& c : r.conditions) {
      if (c.id == "strict_sign_free") continue;
      if (c.pass == (c.id == want)) {
        ok = false;
        notes += fmt(" %s: condition %s %s;", label, c.id.c_str(),
                     c.pass ? "passed unexpectedly" : "failed unexpectedly");
      }
    }
  };

  SchedulePolicy mut_a = reference_policy(4);
  mut_a.h = ExponentFn(2.0 * (1.0 / 8.0));  // h = 2g
  exact_failure(mut_a, 4, "limit_nonzero", "h=2g");

  SchedulePolicy mut_b = reference_policy(4);
  mut_b.g = ExponentFn(1.0 / 4.0);  // g = 1/N
  mut_b.h = ExponentFn(3.0 / 4.0);  // keep h - 2g away from zero to isolate (48)
  exact_failure(mut_b, 4, "g_window", "g=1/N");

  SchedulePolicy mut_c = reference_policy(4);
  mut_c.h = ExponentFn(CubicTable({1.0, 1e12}, {0.5, 0.5 + 1e-5}));  // |h'| = 1e-17
  mut_c.prop_constants.d_prime = 1e-20;
  exact_failure(mut_c, 4, "h_slope", "|h'|>d'");

  detail = ok ? "reference policy passes for N in {2,4,8}; mutations isolate their conditions"
              : "violations:" + notes;
  return ok;
}

bool asymptotics(std::string& detail) {
  const SchedulePolicy policy = reference_policy(4);
  const ScheduleBase base{1.0, 2, 1};

  const TrotterCoefficients c9 = coefficients(params_at(policy, base, 1e9), base.degree);
  const CoefficientDerivatives d6 = coefficient_derivatives(policy, base, 1e6);
  const CoefficientDerivatives d9 = coefficient_derivatives(policy, base, 1e9);

  const bool alpha2_small = std::abs(c9.alpha2) < 1e-3;
  const bool alpha1_large = c9.alpha1 > 3.0;
  const double drop1 = std::abs(d6.alpha2_d1) / std::abs(d9.alpha2_d1);
  const double drop2 = std::abs(d6.alpha2_d2) / std::abs(d9.alpha2_d2);
  const bool derivs_drop = drop1 >= 10.0 && drop2 >= 10.0;

  detail = fmt("|alpha2(1e9)|=%.4g (limit 1e-3), alpha1(1e9)=%.4g (limit >3), "
               "|alpha2'| drop %.3gx, |alpha2''| drop %.3gx (limit >=10x)",
               std::abs(c9.alpha2), c9.alpha1, drop1, drop2);
  return alpha2_small && alpha1_large && derivs_drop;
}

bool ratio_decay(std::string& detail) {
  const IsingProblem problem = IsingProblem::from_bonds(2, {{0, 1, 1.0}});
  const SchedulePolicy policy = reference_policy(2);
  const ScheduleBase base{2.0, 2, 1};
  const AdiabaticReport r_early = adiabatic_ratio(problem, policy, base, 1e2);
  const AdiabaticReport r_late = adiabatic_ratio(problem, policy, base, 1e4);
  detail = fmt("ratio(1e2)=%.4g, ratio(1e4)=%.4g", r_early.ratio, r_late.ratio);
  return r_late.ratio < r_early.ratio;
}

bool simulate_determinism(std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sqa_verify_determinism";
  fs::create_directories(dir);
  const fs::path problem_path = dir / "problem.json";
  const fs::path policy_path = dir / "policy.json";
  {
    std::ofstream p(problem_path);
    p << "{\"n\": 2, \"bonds\": [[0, 1, 1.0]]}\n";
    std::ofstream q(policy_path);
    q << "{\"c3\": 1.0, \"c4\": 2.0, \"g\": 0.25, \"h\": 1.0}\n";
  }

  auto run_once = [&](const fs::path& out) {
    const std::vector<std::string> argv = {
        "simulate",       "--problem", problem_path.string(), "--policy", policy_path.string(),
        "--beta",         "2",         "--slices",            "4",        "--sweeps",
        "2000",           "--replicas", "2",                  "--seed",   "123",
        "--measure-every", "10",        "--out",              out.string()};
    return cli::run(argv);
  };

  const fs::path out_a = dir / "trace_a.csv";
  const fs::path out_b = dir / "trace_b.csv";
  const int rc_a = run_once(out_a);
  const int rc_b = run_once(out_b);
  if (rc_a != 0 || rc_b != 0) {
    detail = fmt("simulate exit codes %d, %d", rc_a, rc_b);
    return false;
  }

  std::ifstream fa(out_a, std::ios::binary), fb(out_b, std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  const bool equal = sa.str() == sb.str() && !sa.str().empty();
  detail = fmt("%zu bytes, byte-identical: %s", sa.str().size(), equal ? "yes" : "no");
  fs::remove_all(dir);
  return equal;
}

}  // namespace

int run_pair(std::ostream& out, int samples, unsigned long long seed, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures = 0;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double a = 0.05 + 1.95 * unit(rng);
    const double b_k = 0.9 * std::atanh(std::tanh(a) * std::tanh(a)) * unit(rng);
    const double err = verify_pair_identity(a, b_k);
    worst = std::max(worst, err);
    if (!(err < tol)) ++failures;
  }
  out << (failures == 0 ? "PASS" : "FAIL") << " pair-kernel identity: max rel err "
      << worst << " over " << samples << " points (limit " << tol << ", " << failures
      << " over limit)\n";
  return failures;
}

int run_all(std::ostream& out) {
  Criterion c;
  c.out = &out;

  c.run(1, "pair-kernel identity vs exponential oracle",
        [&](std::string& d) { return pair_identity(d, 100, 20240, 1e-10); });
  c.run(2, "sign-free boundary location (beta/M=1, b=4)", sign_free_boundary);
  c.run(3, "flip deltas vs global recomputation (N=3 ring, M=4)", flip_deltas);
  c.run(4, "generator stationarity and spectral structure (N=2, M=3)",
        [&](std::string& d) { return generator_suite(d, 2, 3); });
  c.run(4, "generator stationarity and spectral structure (N=3, M=3)",
        [&](std::string& d) { return generator_suite(d, 3, 3); });
  c.run(5, "Trotter convergence to the quantum partition function", trotter_convergence);
  c.run(6, "Monte Carlo equilibrium vs exact Boltzmann (N=2, M=3)", mc_equilibrium);
  c.run(7, "schedule validation and mutation isolation", schedule_validation);
  c.run(8, "asymptotic coupling thresholds and derivative decay", asymptotics);
  c.run(9, "adiabatic-ratio decay along the schedule", ratio_decay);
  c.run(10, "simulate determinism (byte-identical CSV)", simulate_determinism);

  out << (c.failures == 0 ? "all criteria passed\n"
                          : fmt("%d criterion(s) failed\n", c.failures));
  return c.failures;
}

}  // namespace sqa::verify
