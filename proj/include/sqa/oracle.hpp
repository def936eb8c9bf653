#ifndef SQA_ORACLE_HPP
#define SQA_ORACLE_HPP

#include <Eigen/Dense>

#include "sqa/ising.hpp"
#include "sqa/trotter.hpp"

namespace sqa::oracle {

// Scaling-and-squaring matrix exponential (Taylor core). Independent of the
// closed-form routes it is used to cross-check.
Eigen::MatrixXd expm(const Eigen::MatrixXd& m);

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// exp(a (X1 + X2) - b_k X1 X2) via the commuting factorization
// exp(a X1) exp(a X2) exp(-b_k X1 X2), each factor in closed cosh/sinh form.
// Basis order: |s1 s2> with s = +1 first (index 0), row-major over (s1, s2).
Eigen::Matrix4d pair_exponential(double a, double b_k);

// Same operator through the generic exponential; used as the second route.
Eigen::Matrix4d pair_exponential_expm(double a, double b_k);

// Dense 2^N quantum Hamiltonian: -sum J Z Z - Gamma sum X + K sum X X.
Eigen::MatrixXd quantum_hamiltonian(const IsingProblem& problem, const AnnealParams& params);

// Tr exp(-beta H) by dense symmetric eigensolve (N <= 6).
double quantum_partition(const IsingProblem& problem, const AnnealParams& params);

// Same trace through scaling-and-squaring; dual-method self-check.
double quantum_partition_expm(const IsingProblem& problem, const AnnealParams& params);

// Exhaustive sum of exp(-beta H0) over all 2^{N M} paths (N*M <= 20),
// constant term included.
double st_partition(const IsingProblem& problem, const AnnealParams& params);

// Same partition sum contracted slice by slice with a 2^N x 2^N transfer
// matrix; reaches large M cheaply.
double st_partition_transfer(const IsingProblem& problem, const AnnealParams& params);

// Boltzmann distribution of beta H0 over all paths, indexed by the SpinPath
// state index. Normalized; N*M <= 20.
Eigen::VectorXd exact_boltzmann(const IsingProblem& problem, const AnnealParams& params);

// Lower-level variant for caller-supplied couplings (tests use zeroed ones).
Eigen::VectorXd boltzmann_from_coeffs(const IsingProblem& problem,
                                      const TrotterCoefficients& coeffs, int slices);

}  // namespace sqa::oracle

#endif
