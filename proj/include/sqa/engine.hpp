#ifndef SQA_ENGINE_HPP
#define SQA_ENGINE_HPP

#include <cmath>
#include <iosfwd>
#include <vector>

#include "sqa/energy.hpp"
#include "sqa/ising.hpp"
#include "sqa/rng.hpp"
#include "sqa/schedule.hpp"
#include "sqa/trotter.hpp"

namespace sqa {

struct RunConfig {
  std::uint64_t seed = 0;
  long sweeps = 1;
  int replicas = 1;
  long measure_every = 1;
  double time_per_sweep = 1.0;  // maps sweep index to schedule time

  void validate() const;
};

struct SweepStats {
  long single_proposed = 0;
  long single_accepted = 0;
  long double_proposed = 0;
  long double_accepted = 0;

  SweepStats& operator+=(const SweepStats& o) {
    single_proposed += o.single_proposed;
    single_accepted += o.single_accepted;
    double_proposed += o.double_proposed;
    double_accepted += o.double_accepted;
    return *this;
  }
};

// Heat-bath acceptance for a proposed flip with beta*H0 difference delta.
inline double heat_bath_probability(double delta) { return 1.0 / (1.0 + std::exp(delta)); }
inline bool heat_bath_accept(double delta, double u) { return u < heat_bath_probability(delta); }

// One sweep: every (site, slice) single flip, then every (bond, slice) pair
// flip, in lexicographic order; one uniform draw per proposal. Single flips
// alone keep the chain ergodic on the path space, but there are no cluster
// updates: autocorrelation times grow as the slice coupling stiffens late in
// a schedule, so long tails deserve longer runs, not larger step sizes.
SweepStats sweep(SpinPath& path, const IsingProblem& problem, const TrotterCoefficients& coeffs,
                 StreamRng& rng);

struct Measurements {
  std::vector<double> slice_energy;   // target Ising energy per slice
  std::vector<double> bond_corr;      // per bond, averaged over slices
  double corr_mean = 0.0;             // averaged over bonds and slices
  double magnetization = 0.0;         // mean spin over the whole path
};

Measurements measure(const SpinPath& path, const IsingProblem& problem);

struct TraceRow {
  long sweep = 0;
  double t = 0.0;
  double gamma = 0.0, kappa = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  EnergyBreakdown breakdown;
  double energy_ising = 0.0;  // slice-0 target energy
  double corr_mean = 0.0;
  double acc_single = 0.0, acc_double = 0.0;  // rates since the last record
  int replica = 0;
};

struct ObservableTrace {
  std::vector<TraceRow> rows;
};

struct AnnealResult {
  ObservableTrace trace;
  std::vector<SpinPath> final_paths;
  SweepStats totals;
};

// Annealing run along a schedule policy. Replicas use disjoint RNG substreams
// and may execute in parallel (SQA_THREADS); traces are collected per replica
// and concatenated in replica order, so output is independent of threading.
// Throws NonStoquasticError carrying the sweep index if the schedule leaves
// the sign-free region mid-run.
AnnealResult anneal(const IsingProblem& problem, const SchedulePolicy& policy,
                    const ScheduleBase& base, const RunConfig& config);

// Fixed-parameter run (frozen schedule); same trace format with t = sweep.
AnnealResult run_fixed(const IsingProblem& problem, const AnnealParams& params,
                       const RunConfig& config);

// CSV with the fixed column set
// sweep,t,gamma,kappa,alpha1,alpha2,energy_ising,corr_mean,acc_single,acc_double,replica.
void write_trace_csv(std::ostream& out, const ObservableTrace& trace);

}  // namespace sqa

#endif
