#include "sqa/energy.hpp"

#include <stdexcept>
#include <string>

namespace sqa {

namespace {

void check_dims(const SpinPath& path, const IsingProblem& problem) {
  if (path.n_sites() != problem.n_spins())
    throw std::invalid_argument("path has " + std::to_string(path.n_sites()) +
                                " sites, problem has " + std::to_string(problem.n_spins()));
}

void check_site_slice(const SpinPath& path, int i, int k) {
  if (i < 0 || i >= path.n_sites() || k < 0 || k >= path.n_slices())
    throw std::out_of_range("site/slice index (" + std::to_string(i) + "," + std::to_string(k) +
                            ") out of range");
}

}  // namespace

EnergyBreakdown energy(const SpinPath& path, const IsingProblem& problem,
                       const TrotterCoefficients& coeffs) {
  check_dims(path, problem);
  const int M = path.n_slices();

  double ising = 0.0, a1 = 0.0, a2 = 0.0;
  for (int k = 0; k < M; ++k) {
    const int kp = path.up(k);
    for (const Bond& b : problem.bonds()) {
      const int si = path.spin(b.i, k);
      const int sj = path.spin(b.j, k);
      const int ui = path.spin(b.i, kp) * si;
      const int uj = path.spin(b.j, kp) * sj;
      ising += b.coupling * si * sj;
      a1 += ui + uj;
      a2 += ui * uj;
    }
  }

  EnergyBreakdown e;
  e.ising_part = coeffs.beta_over_m * ising;
  e.alpha1_part = coeffs.alpha1 * a1;
  e.alpha2_part = coeffs.alpha2 * a2;
  e.constant_part = coeffs.lambda * M * static_cast<double>(problem.bonds().size());
  e.total = -(e.ising_part + e.alpha1_part + e.alpha2_part + e.constant_part);
  return e;
}

double delta_single(const SpinPath& path, const IsingProblem& problem,
                    const TrotterCoefficients& coeffs, int i, int k) {
  check_dims(path, problem);
  check_site_slice(path, i, k);

  const int kp = path.up(k);
  const int km = path.down(k);
  const int si = path.spin(i, k);
  const int ui_up = path.spin(i, kp) * si;    // trotter link (k, k+1)
  const int ui_dn = si * path.spin(i, km);    // trotter link (k-1, k)

  double delta = 0.0;
  for (const auto& [l, J] : problem.neighbors(i)) {
    const int sl = path.spin(l, k);
    const int ul_up = path.spin(l, kp) * sl;
    const int ul_dn = sl * path.spin(l, km);
    delta += 2.0 * coeffs.beta_over_m * J * si * sl +
             2.0 * coeffs.alpha2 * (ui_up * ul_up + ui_dn * ul_dn) +
             2.0 * coeffs.alpha1 * (ui_up + ui_dn);
  }
  return delta;
}

double delta_double(const SpinPath& path, const IsingProblem& problem,
                    const TrotterCoefficients& coeffs, int i, int j, int k) {
  check_dims(path, problem);
  check_site_slice(path, i, k);
  check_site_slice(path, j, k);
  if (!problem.has_bond(i, j))
    throw std::invalid_argument("(" + std::to_string(i) + "," + std::to_string(j) +
                                ") is not a bond");

  const int kp = path.up(k);
  const int km = path.down(k);

  // The (i, j) bond's own Ising and four-spin terms cancel when both spins
  // flip; its slice-to-slice terms do not.
  auto site_terms = [&](int a, int excluded) {
    const int sa = path.spin(a, k);
    const int ua_up = path.spin(a, kp) * sa;
    const int ua_dn = sa * path.spin(a, km);
    double d = 0.0;
    for (const auto& [l, J] : problem.neighbors(a)) {
      d += 2.0 * coeffs.alpha1 * (ua_up + ua_dn);
      if (l == excluded) continue;
      const int sl = path.spin(l, k);
      const int ul_up = path.spin(l, kp) * sl;
      const int ul_dn = sl * path.spin(l, km);
      d += 2.0 * coeffs.beta_over_m * J * sa * sl +
           2.0 * coeffs.alpha2 * (ua_up * ul_up + ua_dn * ul_dn);
    }
    return d;
  };

  return site_terms(i, j) + site_terms(j, i);
}

}  // namespace sqa
