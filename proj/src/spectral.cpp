#include "sqa/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sqa/energy.hpp"

namespace sqa {

StateSpace::StateSpace(int n_sites_, int n_slices_) : n_sites(n_sites_), n_slices(n_slices_) {
  const long bits = static_cast<long>(n_sites) * n_slices;
  if (bits < 2 || bits > 20) throw std::invalid_argument("state space supports 2..20 path spins");
  n_states = std::uint64_t{1} << bits;
}

namespace {

// Enumerate moves from a path: flip positions as (i, j, k) with j = -1 for
// single flips. Calls fn(target_path_index_delta...) via the flipped path.
template <typename Fn>
void for_each_move(const IsingProblem& problem, SpinPath& path, MoveSet moves, Fn&& fn) {
  const int n = path.n_sites();
  const int m = path.n_slices();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) fn(i, -1, k);
  if (moves == MoveSet::SingleAndDouble)
    for (const Bond& b : problem.bonds())
      for (int k = 0; k < m; ++k) fn(b.i, b.j, k);
}

double heat_bath_w(double delta) { return 1.0 / (std::exp(0.5 * delta) + std::exp(-0.5 * delta)); }

// w * exp(-delta/2) in a cancellation- and overflow-safe form.
double heat_bath_rate(double delta) { return 1.0 / (1.0 + std::exp(delta)); }

}  // namespace

GeneratorMatrices build_generator(const IsingProblem& problem, const AnnealParams& params,
                                  MoveSet moves) {
  const StateSpace space(problem.n_spins(), params.slices);
  if (space.n_states > (std::uint64_t{1} << 12))
    throw std::invalid_argument("dense generator capped at 2^12 states");
  const TrotterCoefficients coeffs = coefficients(params, problem.degree());

  const Eigen::Index dim = static_cast<Eigen::Index>(space.n_states);
  GeneratorMatrices g;
  g.w = Eigen::MatrixXd::Zero(dim, dim);
  g.h_quantum = Eigen::MatrixXd::Zero(dim, dim);
  g.h0_diag.resize(dim);

  for (Eigen::Index s = 0; s < dim; ++s) {
    SpinPath path = space.path_of(static_cast<std::uint64_t>(s));
    g.h0_diag(s) = energy(path, problem, coeffs).total;

    for_each_move(problem, path, moves, [&](int i, int j, int k) {
      const double delta = j < 0 ? delta_single(path, problem, coeffs, i, k)
                                 : delta_double(path, problem, coeffs, i, j, k);
      path.flip(i, k);
      if (j >= 0) path.flip(j, k);
      const Eigen::Index target = static_cast<Eigen::Index>(space.index_of(path));
      path.flip(i, k);
      if (j >= 0) path.flip(j, k);

      const double rate = heat_bath_rate(delta);
      // Rate from s to target; detailed balance against exp(-beta H0).
      g.w(target, s) = rate;
      g.w(s, s) -= rate;
      g.h_quantum(target, s) = -heat_bath_w(delta);
      g.h_quantum(s, s) += rate;
    });
  }
  return g;
}

double gap_of(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return solver.eigenvalues()(1) - solver.eigenvalues()(0);
}

double spectral_gap(const GeneratorMatrices& matrices) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrices.h_quantum,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double scale = std::max(1.0, std::abs(ev(ev.size() - 1)));
  if (std::abs(ev(0)) > 1e-10 * scale)
    throw std::runtime_error("ground eigenvalue deviates from zero: " + std::to_string(ev(0)));
  return ev(1) - ev(0);
}

double spectral_gap_matfree(const IsingProblem& problem, const AnnealParams& params,
                            int max_iters, double tol) {
  const StateSpace space(problem.n_spins(), params.slices);
  const TrotterCoefficients coeffs = coefficients(params, problem.degree());
  const Eigen::Index dim = static_cast<Eigen::Index>(space.n_states);

  Eigen::VectorXd diag(dim);
  Eigen::VectorXd ground(dim);
  Eigen::VectorXd h0(dim);
  double gershgorin = 0.0;
  for (Eigen::Index s = 0; s < dim; ++s) {
    SpinPath path = space.path_of(static_cast<std::uint64_t>(s));
    h0(s) = energy(path, problem, coeffs).total;
    double d = 0.0, offsum = 0.0;
    for_each_move(problem, path, MoveSet::SingleAndDouble, [&](int i, int j, int k) {
      const double delta = j < 0 ? delta_single(path, problem, coeffs, i, k)
                                 : delta_double(path, problem, coeffs, i, j, k);
      d += heat_bath_rate(delta);
      offsum += heat_bath_w(delta);
    });
    diag(s) = d;
    gershgorin = std::max(gershgorin, d + offsum);
  }
  const double h0_min = h0.minCoeff();
  for (Eigen::Index s = 0; s < dim; ++s) ground(s) = std::exp(-0.5 * (h0(s) - h0_min));
  ground.normalize();

  auto apply_h = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = diag.cwiseProduct(x);
    for (Eigen::Index s = 0; s < dim; ++s) {
      SpinPath path = space.path_of(static_cast<std::uint64_t>(s));
      for_each_move(problem, path, MoveSet::SingleAndDouble, [&](int i, int j, int k) {
        const double delta = j < 0 ? delta_single(path, problem, coeffs, i, k)
                                   : delta_double(path, problem, coeffs, i, j, k);
        path.flip(i, k);
        if (j >= 0) path.flip(j, k);
        const Eigen::Index target = static_cast<Eigen::Index>(space.index_of(path));
        path.flip(i, k);
        if (j >= 0) path.flip(j, k);
        y(target) -= heat_bath_w(delta) * x(s);
      });
    }
    return y;
  };

  // Start vector hashed per entry so no symmetry sector is missed.
  Eigen::VectorXd seed_vec(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    std::uint64_t z = static_cast<std::uint64_t>(s) + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    seed_vec(s) = static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53 - 0.5;
  }

  // Rough top-of-spectrum estimate first; a tight shift makes the deflated
  // power iteration converge much faster than the Gershgorin bound would.
  Eigen::VectorXd top = seed_vec.normalized();
  double lambda_max = gershgorin;
  for (int it = 0; it < 80; ++it) {
    Eigen::VectorXd y = apply_h(top);
    lambda_max = y.norm();
    if (lambda_max == 0.0) break;
    top = y / lambda_max;
  }
  const double c = std::min(gershgorin, 1.02 * lambda_max) + 1e-9;

  // Power iteration on c*I - H, deflated against the known ground vector.
  Eigen::VectorXd x = seed_vec;
  x -= ground * ground.dot(x);
  x.normalize();
  double prev = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd y = c * x - apply_h(x);
    y -= ground * ground.dot(y);
    const double lam = y.norm();
    if (lam == 0.0) return c;
    y /= lam;
    if (std::abs(lam - prev) < tol * std::max(1.0, lam) && it > 10) {
      return c - lam;
    }
    prev = lam;
    x = y;
  }
  return c - prev;
}

AdiabaticReport adiabatic_ratio_from(const IsingProblem& problem,
                                     const std::function<AnnealParams(double)>& params_fn,
                                     double t, double outer_step, double inner_step) {
  auto h0_diag_at = [&](double tt) {
    const AnnealParams p = params_fn(tt);
    const StateSpace space(problem.n_spins(), p.slices);
    const TrotterCoefficients coeffs = coefficients(p, problem.degree());
    Eigen::VectorXd h0(static_cast<Eigen::Index>(space.n_states));
    for (std::uint64_t s = 0; s < space.n_states; ++s)
      h0(static_cast<Eigen::Index>(s)) = energy(space.path_of(s), problem, coeffs).total;
    return h0;
  };
  auto hcal_at = [&](double tt) {
    const GeneratorMatrices g = build_generator(problem, params_fn(tt));
    const Eigen::VectorXd dh0 =
        (h0_diag_at(tt + inner_step) - h0_diag_at(tt - inner_step)) / (2.0 * inner_step);
    Eigen::MatrixXd hcal = g.h_quantum;
    hcal -= 0.5 * Eigen::MatrixXd(dh0.asDiagonal());
    return hcal;
  };

  const GeneratorMatrices g = build_generator(problem, params_fn(t));
  const Eigen::MatrixXd dhcal = (hcal_at(t + outer_step) - hcal_at(t - outer_step)) / (2.0 * outer_step);

  AdiabaticReport r;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> norm_solver(dhcal, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = norm_solver.eigenvalues();
  r.norm_dhcal_dt = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  r.gap_h = spectral_gap(g);
  r.gap_hcal = gap_of(hcal_at(t));
  r.ratio = r.norm_dhcal_dt / (r.gap_h * r.gap_h);
  return r;
}

AdiabaticReport adiabatic_ratio(const IsingProblem& problem, const SchedulePolicy& policy,
                                const ScheduleBase& base, double t) {
  const double outer = fd_step(policy, t);
  const double inner = outer / 16.0;
  if (t - outer - inner < policy.t_switch)
    throw std::invalid_argument("stencil crosses the schedule switch point");
  return adiabatic_ratio_from(
      problem, [&](double tt) { return params_at(policy, base, tt); }, t, outer, inner);
}

GapBoundReport gap_bound_report(const IsingProblem& problem, const AnnealParams& params,
                                double a_const, double c_const) {
  const StateSpace space(problem.n_spins(), params.slices);
  if (space.n_states > (std::uint64_t{1} << 12))
    throw std::invalid_argument("gap bound report capped at 2^12 states");
  const TrotterCoefficients coeffs = coefficients(params, problem.degree());

  GapBoundReport r;
  double w_single_min = 1.0, w_double_min = 1.0;
  for (std::uint64_t s = 0; s < space.n_states; ++s) {
    SpinPath path = space.path_of(s);
    for_each_move(problem, path, MoveSet::SingleAndDouble, [&](int i, int j, int k) {
      const double delta = j < 0 ? delta_single(path, problem, coeffs, i, k)
                                 : delta_double(path, problem, coeffs, i, j, k);
      const double bh = 0.5 * std::abs(delta);  // |beta H_{i,k}| or |beta H_{i,j,k}|
      const double w = heat_bath_w(delta);
      if (j < 0) {
        r.max_abs_bh_single = std::max(r.max_abs_bh_single, bh);
        w_single_min = std::min(w_single_min, w);
      } else {
        r.max_abs_bh_double = std::max(r.max_abs_bh_double, bh);
        w_double_min = std::min(w_double_min, w);
      }
    });
  }

  const double n = problem.n_spins();
  r.bound = a_const * std::sqrt(n) * std::pow(2.0, -0.5 * n) *
            std::exp(-0.5 * n * r.max_abs_bh_double - c_const * n);
  r.measured_gap = spectral_gap(build_generator(problem, params));
  r.satisfied = r.measured_gap >= r.bound;
  r.single_branch = std::tgamma(n + 1.0) * std::pow(w_single_min, n);
  r.double_branch = std::tgamma(0.5 * n + 1.0) * std::pow(w_double_min, 0.5 * n);
  return r;
}

}  // namespace sqa
