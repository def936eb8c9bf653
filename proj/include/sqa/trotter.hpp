#ifndef SQA_TROTTER_HPP
#define SQA_TROTTER_HPP

#include <optional>
#include <stdexcept>

#include "sqa/ising.hpp"
#include "sqa/schedule.hpp"

namespace sqa {

// Raised when the requested parameters violate the sign-free condition
// tanh^2(beta Gamma / (b M)) >= tanh(beta K / M). margin is the left side
// minus the right side.
struct NonStoquasticError : std::runtime_error {
  NonStoquasticError(const std::string& what, double margin_, long sweep_ = -1)
      : std::runtime_error(what), margin(margin_), sweep(sweep_) {}
  double margin;
  long sweep;  // >= 0 when an annealing run left the sign-free region
};

// Weights of the two-site transverse kernel by number of flipped spins.
struct PairWeights {
  double c0 = 0.0;  // zero flips
  double c1 = 0.0;  // one flip
  double c2 = 0.0;  // two flips; nonnegative iff sign-free
};

// Matrix elements of exp(a(X_i + X_j) - b_k X_i X_j) in the computational
// basis, grouped by flip count.
PairWeights pair_kernel(double a, double b_k);

// tanh^2(a) - tanh(b_k) for the reduced couplings of params.
double sign_free_margin(const AnnealParams& params, int degree);
bool sign_free(const AnnealParams& params, int degree);

struct TrotterCoefficients {
  double a = 0.0;    // beta Gamma / (b M)
  double b_k = 0.0;  // beta K / M
  double c1 = 0.0;   // (1/2) log coth a
  double d2 = 0.0;   // (1/2) log coth b_k; +inf when K = 0
  double c0_kernel = 0.0, c1_kernel = 0.0, c2_kernel = 0.0;
  double alpha1 = 0.0;  // (1/4) log(C0/C2): slice-to-slice coupling per bond end
  double alpha2 = 0.0;  // (1/4) log(C0 C2 / C1^2): four-spin slice coupling
  double lambda = 0.0;  // (1/4) log(C0 C2 C1^2): absorbed per-bond constant
  std::optional<double> alpha3;  // d2-form constant; undefined at K = 0
  double beta_over_m = 0.0;      // scale of the target couplings in beta*H0
};

// Effective couplings for the Trotterized action. Requires the sign-free
// condition strictly (C2 > 0); throws NonStoquasticError otherwise.
TrotterCoefficients coefficients(const AnnealParams& params, int degree);
TrotterCoefficients coefficients_from_reduced(double a, double b_k, double beta_over_m = 0.0);

// Worst relative error, over the four flip patterns, between the kernel
// weights and exp(alpha1 (u+v) + alpha2 u v + lambda).
double verify_pair_identity(double a, double b_k);

struct CoefficientDerivatives {
  double alpha1_d1 = 0.0, alpha1_d2 = 0.0;
  double alpha2_d1 = 0.0, alpha2_d2 = 0.0;
  double lambda_d1 = 0.0, lambda_d2 = 0.0;
  double step = 0.0;        // finite-difference step used
  double halving_rel = 0.0; // worst relative change under step halving
};

// Central finite differences of (alpha1, alpha2, lambda) along the schedule.
// Requires the whole stencil inside the asymptotic, strictly sign-free phase.
CoefficientDerivatives coefficient_derivatives(const SchedulePolicy& policy,
                                               const ScheduleBase& base, double t);

}  // namespace sqa

#endif
