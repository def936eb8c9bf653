#ifndef SQA_ENERGY_HPP
#define SQA_ENERGY_HPP

#include "sqa/ising.hpp"
#include "sqa/trotter.hpp"

namespace sqa {

// Terms of the Trotterized classical action beta*H0, kept separately so
// partition-function users and Monte Carlo users agree on conventions. All
// energies carry the beta factor already; the per-bond constant (lambda) is
// included here and cancels out of all flip differences.
struct EnergyBreakdown {
  double ising_part = 0.0;     // sum of (beta J / M) s s terms
  double alpha1_part = 0.0;    // slice-to-slice couplings
  double alpha2_part = 0.0;    // four-spin slice couplings
  double constant_part = 0.0;  // lambda * M * |bonds|
  double total = 0.0;          // = -(ising + alpha1 + alpha2 + constant)
};

EnergyBreakdown energy(const SpinPath& path, const IsingProblem& problem,
                       const TrotterCoefficients& coeffs);

// beta*H0 difference for flipping spin (i, k), computed from the local
// neighborhood only (O(degree) work).
double delta_single(const SpinPath& path, const IsingProblem& problem,
                    const TrotterCoefficients& coeffs, int i, int k);

// beta*H0 difference for flipping the bonded pair (i, j) on slice k. The
// pair's own Ising and four-spin terms cancel; throws if (i, j) is not a bond.
double delta_double(const SpinPath& path, const IsingProblem& problem,
                    const TrotterCoefficients& coeffs, int i, int j, int k);

}  // namespace sqa

#endif
