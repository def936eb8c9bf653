#include "sqa/engine.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace sqa {

void RunConfig::validate() const {
  if (sweeps < 1) throw std::invalid_argument("need at least one sweep");
  if (replicas < 1) throw std::invalid_argument("need at least one replica");
  if (measure_every < 1) throw std::invalid_argument("measure_every must be positive");
  if (!(time_per_sweep > 0.0)) throw std::invalid_argument("time_per_sweep must be positive");
}

namespace {

// Substream layout: stream = replica*2 + purpose (0 init, 1 dynamics);
// dynamics counter = sweep << 20 | move index.
constexpr int kMoveBits = 20;

std::uint64_t moves_per_sweep(const IsingProblem& problem, int slices) {
  return static_cast<std::uint64_t>(problem.n_spins() + problem.bonds().size()) *
         static_cast<std::uint64_t>(slices);
}

SpinPath random_path(const IsingProblem& problem, int slices, const CounterRng& rng, int replica) {
  SpinPath path(problem.n_spins(), slices);
  const std::uint64_t stream = static_cast<std::uint64_t>(replica) * 2;
  std::uint64_t counter = 0;
  for (int i = 0; i < problem.n_spins(); ++i)
    for (int k = 0; k < slices; ++k)
      path.set(i, k, rng.uniform(stream, counter++) < 0.5 ? -1 : +1);
  return path;
}

}  // namespace

SweepStats sweep(SpinPath& path, const IsingProblem& problem, const TrotterCoefficients& coeffs,
                 StreamRng& rng) {
  SweepStats stats;
  const int n = path.n_sites();
  const int m = path.n_slices();

  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) {
      const double delta = delta_single(path, problem, coeffs, i, k);
      ++stats.single_proposed;
      if (heat_bath_accept(delta, rng.uniform())) {
        path.flip(i, k);
        ++stats.single_accepted;
      }
    }
  }
  for (const Bond& b : problem.bonds()) {
    for (int k = 0; k < m; ++k) {
      const double delta = delta_double(path, problem, coeffs, b.i, b.j, k);
      ++stats.double_proposed;
      if (heat_bath_accept(delta, rng.uniform())) {
        path.flip(b.i, k);
        path.flip(b.j, k);
        ++stats.double_accepted;
      }
    }
  }
  return stats;
}

Measurements measure(const SpinPath& path, const IsingProblem& problem) {
  Measurements m;
  const int slices = path.n_slices();
  m.slice_energy.assign(static_cast<std::size_t>(slices), 0.0);
  m.bond_corr.assign(problem.bonds().size(), 0.0);

  for (int k = 0; k < slices; ++k) {
    double e = 0.0;
    for (std::size_t bi = 0; bi < problem.bonds().size(); ++bi) {
      const Bond& b = problem.bonds()[bi];
      const int ss = path.spin(b.i, k) * path.spin(b.j, k);
      e -= b.coupling * ss;
      m.bond_corr[bi] += static_cast<double>(ss) / slices;
    }
    m.slice_energy[static_cast<std::size_t>(k)] = e;
  }
  for (const double c : m.bond_corr) m.corr_mean += c;
  if (!m.bond_corr.empty()) m.corr_mean /= static_cast<double>(m.bond_corr.size());

  double mag = 0.0;
  for (int i = 0; i < path.n_sites(); ++i)
    for (int k = 0; k < slices; ++k) mag += path.spin(i, k);
  m.magnetization = mag / (static_cast<double>(path.n_sites()) * slices);
  return m;
}

namespace {

struct ReplicaOutput {
  ObservableTrace trace;
  SpinPath path{1, 2};
  SweepStats totals;
  bool aborted = false;
  long abort_sweep = -1;
  double abort_margin = 0.0;
};

// params_fn(t) supplies the instantaneous parameters; gamma/kappa are cached
// into coefficients with a 1e-12 relative-change threshold.
template <typename ParamsFn>
ReplicaOutput run_replica(const IsingProblem& problem, ParamsFn&& params_fn,
                          const RunConfig& config, int replica, bool t_is_sweep) {
  ReplicaOutput out;
  const CounterRng rng(config.seed);

  AnnealParams params = params_fn(0.0);
  out.path = random_path(problem, params.slices, rng, replica);

  if (moves_per_sweep(problem, params.slices) >= (std::uint64_t{1} << kMoveBits))
    throw std::invalid_argument("too many moves per sweep for the RNG substream layout");

  TrotterCoefficients coeffs{};
  bool have_coeffs = false;
  double cached_gamma = 0.0, cached_kappa = 0.0;

  SweepStats window;
  const std::uint64_t stream = static_cast<std::uint64_t>(replica) * 2 + 1;

  for (long s = 0; s < config.sweeps; ++s) {
    const double t = t_is_sweep ? static_cast<double>(s) : s * config.time_per_sweep;
    params = params_fn(t_is_sweep ? 0.0 : t);

    auto changed = [](double now, double cached) {
      return std::abs(now - cached) > 1e-12 * std::max({std::abs(now), std::abs(cached), 1e-30});
    };
    if (!have_coeffs || changed(params.gamma, cached_gamma) || changed(params.kappa, cached_kappa)) {
      try {
        coeffs = coefficients(params, problem.degree());
      } catch (const NonStoquasticError& e) {
        out.aborted = true;
        out.abort_sweep = s;
        out.abort_margin = e.margin;
        return out;
      }
      cached_gamma = params.gamma;
      cached_kappa = params.kappa;
      have_coeffs = true;
    }

    StreamRng sweep_rng(rng, stream, static_cast<std::uint64_t>(s) << kMoveBits);
    const SweepStats stats = sweep(out.path, problem, coeffs, sweep_rng);
    window += stats;
    out.totals += stats;

    if ((s + 1) % config.measure_every == 0) {
      const Measurements m = measure(out.path, problem);
      TraceRow row;
      row.sweep = s;
      row.t = t;
      row.gamma = params.gamma;
      row.kappa = params.kappa;
      row.alpha1 = coeffs.alpha1;
      row.alpha2 = coeffs.alpha2;
      row.breakdown = energy(out.path, problem, coeffs);
      row.energy_ising = m.slice_energy.empty() ? 0.0 : m.slice_energy[0];
      row.corr_mean = m.corr_mean;
      row.acc_single = window.single_proposed
                           ? static_cast<double>(window.single_accepted) / window.single_proposed
                           : 0.0;
      row.acc_double = window.double_proposed
                           ? static_cast<double>(window.double_accepted) / window.double_proposed
                           : 0.0;
      row.replica = replica;
      out.trace.rows.push_back(row);
      window = SweepStats{};
    }
  }
  return out;
}

int thread_budget() {
  if (const char* env = std::getenv("SQA_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

template <typename ParamsFn>
AnnealResult run_replicas(const IsingProblem& problem, ParamsFn&& params_fn,
                          const RunConfig& config, bool t_is_sweep) {
  config.validate();
  std::vector<ReplicaOutput> outputs(static_cast<std::size_t>(config.replicas));

  const int threads = std::min(thread_budget(), config.replicas);
  if (threads <= 1) {
    for (int r = 0; r < config.replicas; ++r)
      outputs[static_cast<std::size_t>(r)] = run_replica(problem, params_fn, config, r, t_is_sweep);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        try {
          for (int r = next.fetch_add(1); r < config.replicas; r = next.fetch_add(1))
            outputs[static_cast<std::size_t>(r)] =
                run_replica(problem, params_fn, config, r, t_is_sweep);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  AnnealResult result;
  for (const auto& out : outputs) {
    if (out.aborted)
      throw NonStoquasticError("schedule left the sign-free region at sweep " +
                                   std::to_string(out.abort_sweep),
                               out.abort_margin, out.abort_sweep);
    result.trace.rows.insert(result.trace.rows.end(), out.trace.rows.begin(),
                             out.trace.rows.end());
    result.final_paths.push_back(out.path);
    result.totals += out.totals;
  }
  return result;
}

}  // namespace

AnnealResult anneal(const IsingProblem& problem, const SchedulePolicy& policy,
                    const ScheduleBase& base, const RunConfig& config) {
  if (base.degree != problem.degree())
    throw std::invalid_argument("schedule base degree does not match the problem");
  return run_replicas(
      problem, [&](double t) { return params_at(policy, base, t); }, config, false);
}

AnnealResult run_fixed(const IsingProblem& problem, const AnnealParams& params,
                       const RunConfig& config) {
  params.validate();
  return run_replicas(
      problem, [&](double) { return params; }, config, true);
}

void write_trace_csv(std::ostream& out, const ObservableTrace& trace) {
  out << "sweep,t,gamma,kappa,alpha1,alpha2,energy_ising,corr_mean,acc_single,acc_double,replica\n";
  char buf[512];
  for (const TraceRow& r : trace.rows) {
    std::snprintf(buf, sizeof(buf), "%ld,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                  r.sweep, r.t, r.gamma, r.kappa, r.alpha1, r.alpha2, r.energy_ising, r.corr_mean,
                  r.acc_single, r.acc_double, r.replica);
    out << buf;
  }
}

}  // namespace sqa
