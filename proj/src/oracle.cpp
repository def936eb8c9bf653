#include "sqa/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "sqa/energy.hpp"

namespace sqa::oracle {

Eigen::MatrixXd expm(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm needs a square matrix");
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();  // infinity norm
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXd a = m * scale;
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 40; ++k) {
    term = (term * a) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-300) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

Eigen::Matrix2d pauli_x() {
  Eigen::Matrix2d x;
  x << 0, 1, 1, 0;
  return x;
}

Eigen::Matrix2d pauli_z() {
  Eigen::Matrix2d z;
  z << 1, 0, 0, -1;
  return z;
}

// X acting on one of two sites / both, as dense 4x4.
Eigen::Matrix4d x1() { return kron(pauli_x(), Eigen::Matrix2d::Identity()); }
Eigen::Matrix4d x2() { return kron(Eigen::Matrix2d::Identity(), pauli_x()); }

}  // namespace

Eigen::Matrix4d pair_exponential(double a, double b_k) {
  const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
  const Eigen::Matrix4d ea1 = std::cosh(a) * id + std::sinh(a) * x1();
  const Eigen::Matrix4d ea2 = std::cosh(a) * id + std::sinh(a) * x2();
  const Eigen::Matrix4d exx = std::cosh(b_k) * id - std::sinh(b_k) * (x1() * x2());
  return ea1 * ea2 * exx;
}

Eigen::Matrix4d pair_exponential_expm(double a, double b_k) {
  const Eigen::MatrixXd gen = a * (x1() + x2()) - b_k * (x1() * x2());
  return expm(gen);
}

Eigen::MatrixXd quantum_hamiltonian(const IsingProblem& problem, const AnnealParams& params) {
  params.validate();
  const int n = problem.n_spins();
  if (n > 6) throw std::invalid_argument("quantum oracle capped at 6 spins");
  const Eigen::Index dim = Eigen::Index{1} << n;

  auto site_op = [&](const Eigen::Matrix2d& op, int site) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    for (int s = 0; s < n; ++s)
      out = kron(out, s == site ? Eigen::MatrixXd(op)
                                : Eigen::MatrixXd(Eigen::Matrix2d::Identity()));
    return out;
  };

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (const Bond& b : problem.bonds()) {
    h -= b.coupling * (site_op(pauli_z(), b.i) * site_op(pauli_z(), b.j));
    if (params.kappa != 0.0)
      h += params.kappa * (site_op(pauli_x(), b.i) * site_op(pauli_x(), b.j));
  }
  if (params.gamma != 0.0)
    for (int s = 0; s < n; ++s) h -= params.gamma * site_op(pauli_x(), s);
  return h;
}

double quantum_partition(const IsingProblem& problem, const AnnealParams& params) {
  const Eigen::MatrixXd h = quantum_hamiltonian(problem, params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  double z = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) z += std::exp(-params.beta * ev(i));
  return z;
}

double quantum_partition_expm(const IsingProblem& problem, const AnnealParams& params) {
  return expm(-params.beta * quantum_hamiltonian(problem, params)).trace();
}

namespace {

void check_path_cap(const IsingProblem& problem, const AnnealParams& params) {
  params.validate();
  const long bits = static_cast<long>(problem.n_spins()) * params.slices;
  if (bits > 20) throw std::invalid_argument("path enumeration capped at N*M = 20 spins");
}

}  // namespace

double st_partition(const IsingProblem& problem, const AnnealParams& params) {
  check_path_cap(problem, params);
  const TrotterCoefficients coeffs = coefficients(params, problem.degree());
  const std::uint64_t n_paths = std::uint64_t{1} << (problem.n_spins() * params.slices);
  double z = 0.0;
  for (std::uint64_t s = 0; s < n_paths; ++s) {
    const SpinPath path = SpinPath::from_state_index(problem.n_spins(), params.slices, s);
    z += std::exp(-energy(path, problem, coeffs).total);
  }
  return z;
}

double st_partition_transfer(const IsingProblem& problem, const AnnealParams& params) {
  params.validate();
  const int n = problem.n_spins();
  if (n > 10) throw std::invalid_argument("transfer-matrix contraction capped at 10 spins");
  const TrotterCoefficients coeffs = coefficients(params, problem.degree());
  const Eigen::Index dim = Eigen::Index{1} << n;

  auto spin = [](Eigen::Index state, int site) { return (state >> site) & 1 ? +1 : -1; };

  Eigen::VectorXd diag(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    double e = 0.0;
    for (const Bond& b : problem.bonds()) e += b.coupling * spin(s, b.i) * spin(s, b.j);
    diag(s) = std::exp(coeffs.beta_over_m * e);
  }

  Eigen::MatrixXd transfer(dim, dim);
  for (Eigen::Index to = 0; to < dim; ++to) {
    for (Eigen::Index from = 0; from < dim; ++from) {
      double w = 1.0;
      for (const Bond& b : problem.bonds()) {
        const int flips = (spin(to, b.i) != spin(from, b.i) ? 1 : 0) +
                          (spin(to, b.j) != spin(from, b.j) ? 1 : 0);
        w *= flips == 0 ? coeffs.c0_kernel : (flips == 1 ? coeffs.c1_kernel : coeffs.c2_kernel);
      }
      transfer(to, from) = w;
    }
  }

  Eigen::MatrixXd step = diag.asDiagonal() * transfer;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(dim, dim);
  for (int k = 0; k < params.slices; ++k) power = power * step;
  return power.trace();
}

Eigen::VectorXd boltzmann_from_coeffs(const IsingProblem& problem,
                                      const TrotterCoefficients& coeffs, int slices) {
  const long bits = static_cast<long>(problem.n_spins()) * slices;
  if (bits > 20) throw std::invalid_argument("path enumeration capped at N*M = 20 spins");
  const std::uint64_t n_paths = std::uint64_t{1} << bits;

  Eigen::VectorXd neg_e(static_cast<Eigen::Index>(n_paths));
  for (std::uint64_t s = 0; s < n_paths; ++s) {
    const SpinPath path = SpinPath::from_state_index(problem.n_spins(), slices, s);
    neg_e(static_cast<Eigen::Index>(s)) = -energy(path, problem, coeffs).total;
  }
  const double shift = neg_e.maxCoeff();
  Eigen::VectorXd pi = (neg_e.array() - shift).exp();
  pi /= pi.sum();
  return pi;
}

Eigen::VectorXd exact_boltzmann(const IsingProblem& problem, const AnnealParams& params) {
  check_path_cap(problem, params);
  const TrotterCoefficients coeffs = coefficients(params, problem.degree());
  return boltzmann_from_coeffs(problem, coeffs, params.slices);
}

}  // namespace sqa::oracle
