#ifndef SQA_ISING_HPP
#define SQA_ISING_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sqa {

struct Bond {
  int i = 0;
  int j = 0;
  double coupling = 0.0;
};

// Target classical Ising instance on a regular graph. The per-bond splitting
// of the transverse field assumes uniform vertex degree, so irregular graphs
// are rejected at construction.
class IsingProblem {
 public:
  static IsingProblem from_bonds(int n_spins, std::vector<Bond> bonds);
  static IsingProblem ring(int n_spins, double coupling);
  static IsingProblem complete(int n_spins, double coupling);

  int n_spins() const { return n_spins_; }
  int degree() const { return degree_; }
  const std::vector<Bond>& bonds() const { return bonds_; }

  // Neighbors of site i as (site, coupling) pairs.
  const std::vector<std::pair<int, double>>& neighbors(int i) const {
    return adjacency_[static_cast<std::size_t>(i)];
  }

  bool has_bond(int i, int j) const;
  double coupling(int i, int j) const;  // throws if (i,j) is not a bond

 private:
  IsingProblem() = default;

  int n_spins_ = 0;
  int degree_ = 0;
  std::vector<Bond> bonds_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

// Instantaneous Trotterized-system parameters.
struct AnnealParams {
  double beta = 1.0;   // inverse temperature
  int slices = 2;      // Trotter slices M
  double gamma = 0.0;  // transverse field
  double kappa = 0.0;  // two-spin transverse catalyst strength

  void validate() const;  // throws std::invalid_argument on bad values
};

// N x M array of +-1 spins, periodic in the slice direction. Storage is
// site-major: entry (i, k) lives at index i*M + k, and the state-index
// bijection maps -1 -> bit 0, +1 -> bit 1 in that same order.
class SpinPath {
 public:
  SpinPath(int n_sites, int n_slices, int fill = +1);

  int n_sites() const { return n_sites_; }
  int n_slices() const { return n_slices_; }

  int spin(int i, int k) const { return spins_[index(i, k)]; }
  void set(int i, int k, int value) { spins_[index(i, k)] = static_cast<std::int8_t>(value); }
  void flip(int i, int k) { spins_[index(i, k)] = static_cast<std::int8_t>(-spins_[index(i, k)]); }

  // Slice arithmetic is modulo M.
  int up(int k) const { return k + 1 == n_slices_ ? 0 : k + 1; }
  int down(int k) const { return k == 0 ? n_slices_ - 1 : k - 1; }

  std::uint64_t state_index() const;
  static SpinPath from_state_index(int n_sites, int n_slices, std::uint64_t index);

  bool operator==(const SpinPath& other) const = default;

  const std::vector<std::int8_t>& raw() const { return spins_; }

 private:
  std::size_t index(int i, int k) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_slices_) +
           static_cast<std::size_t>(k);
  }

  int n_sites_;
  int n_slices_;
  std::vector<std::int8_t> spins_;
};

enum class Topology { Ring, Complete, EdgeList };

// Validated construction from a topology descriptor; the interface behind the
// problem-file loader.
IsingProblem build_problem(int n_spins, Topology topology, const std::vector<Bond>& bonds,
                           double uniform_coupling = 1.0);

}  // namespace sqa

#endif
