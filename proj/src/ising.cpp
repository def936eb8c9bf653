#include "sqa/ising.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace sqa {

IsingProblem IsingProblem::from_bonds(int n_spins, std::vector<Bond> bonds) {
  if (n_spins < 2) throw std::invalid_argument("problem needs at least 2 spins");
  std::set<std::pair<int, int>> seen;
  for (auto& b : bonds) {
    if (b.i == b.j) throw std::invalid_argument("self-loop at vertex " + std::to_string(b.i));
    if (b.i > b.j) std::swap(b.i, b.j);
    if (b.i < 0 || b.j >= n_spins)
      throw std::invalid_argument("bond (" + std::to_string(b.i) + "," + std::to_string(b.j) +
                                  ") out of range");
    if (!seen.insert({b.i, b.j}).second)
      throw std::invalid_argument("duplicate bond (" + std::to_string(b.i) + "," +
                                  std::to_string(b.j) + ")");
  }

  std::vector<int> deg(static_cast<std::size_t>(n_spins), 0);
  for (const auto& b : bonds) {
    ++deg[static_cast<std::size_t>(b.i)];
    ++deg[static_cast<std::size_t>(b.j)];
  }
  for (int v = 0; v < n_spins; ++v) {
    if (deg[static_cast<std::size_t>(v)] != deg[0])
      throw std::invalid_argument("graph is not regular: vertex " + std::to_string(v) +
                                  " has degree " + std::to_string(deg[static_cast<std::size_t>(v)]) +
                                  ", vertex 0 has degree " + std::to_string(deg[0]));
  }
  if (deg[0] == 0) throw std::invalid_argument("graph has no bonds");

  IsingProblem p;
  p.n_spins_ = n_spins;
  p.degree_ = deg[0];
  p.bonds_ = std::move(bonds);
  std::sort(p.bonds_.begin(), p.bonds_.end(),
            [](const Bond& a, const Bond& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  p.adjacency_.resize(static_cast<std::size_t>(n_spins));
  for (const auto& b : p.bonds_) {
    p.adjacency_[static_cast<std::size_t>(b.i)].push_back({b.j, b.coupling});
    p.adjacency_[static_cast<std::size_t>(b.j)].push_back({b.i, b.coupling});
  }
  return p;
}

IsingProblem IsingProblem::ring(int n_spins, double coupling) {
  if (n_spins < 3) throw std::invalid_argument("ring topology needs at least 3 spins");
  std::vector<Bond> bonds;
  bonds.reserve(static_cast<std::size_t>(n_spins));
  for (int i = 0; i < n_spins; ++i) bonds.push_back({i, (i + 1) % n_spins, coupling});
  return from_bonds(n_spins, std::move(bonds));
}

IsingProblem IsingProblem::complete(int n_spins, double coupling) {
  std::vector<Bond> bonds;
  for (int i = 0; i < n_spins; ++i)
    for (int j = i + 1; j < n_spins; ++j) bonds.push_back({i, j, coupling});
  return from_bonds(n_spins, std::move(bonds));
}

bool IsingProblem::has_bond(int i, int j) const {
  for (const auto& [l, J] : neighbors(i))
    if (l == j) return true;
  return false;
}

double IsingProblem::coupling(int i, int j) const {
  for (const auto& [l, J] : neighbors(i))
    if (l == j) return J;
  throw std::invalid_argument("(" + std::to_string(i) + "," + std::to_string(j) +
                              ") is not a bond");
}

void AnnealParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive and finite");
  if (slices < 2) throw std::invalid_argument("need at least 2 Trotter slices");
  if (gamma < 0.0 || kappa < 0.0) throw std::invalid_argument("gamma and kappa must be nonnegative");
  if (!std::isfinite(gamma) || !std::isfinite(kappa))
    throw std::invalid_argument("gamma and kappa must be finite");
}

SpinPath::SpinPath(int n_sites, int n_slices, int fill)
    : n_sites_(n_sites), n_slices_(n_slices),
      spins_(static_cast<std::size_t>(n_sites) * static_cast<std::size_t>(n_slices),
             static_cast<std::int8_t>(fill)) {
  if (n_sites < 1 || n_slices < 2) throw std::invalid_argument("path needs n>=1 sites, M>=2 slices");
  if (fill != 1 && fill != -1) throw std::invalid_argument("fill spin must be +-1");
}

std::uint64_t SpinPath::state_index() const {
  std::uint64_t idx = 0;
  for (std::size_t b = 0; b < spins_.size(); ++b)
    if (spins_[b] > 0) idx |= (std::uint64_t{1} << b);
  return idx;
}

SpinPath SpinPath::from_state_index(int n_sites, int n_slices, std::uint64_t index) {
  SpinPath p(n_sites, n_slices, -1);
  for (std::size_t b = 0; b < p.spins_.size(); ++b)
    if ((index >> b) & 1) p.spins_[b] = +1;
  return p;
}

IsingProblem build_problem(int n_spins, Topology topology, const std::vector<Bond>& bonds,
                           double uniform_coupling) {
  switch (topology) {
    case Topology::Ring:
      return IsingProblem::ring(n_spins, uniform_coupling);
    case Topology::Complete:
      return IsingProblem::complete(n_spins, uniform_coupling);
    case Topology::EdgeList:
      return IsingProblem::from_bonds(n_spins, bonds);
  }
  throw std::invalid_argument("unknown topology");
}

}  // namespace sqa
