#include "sqa/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "sqa/engine.hpp"
#include "sqa/io.hpp"
#include "sqa/oracle.hpp"
#include "sqa/spectral.hpp"
#include "sqa/trotter.hpp"
#include "sqa/verify.hpp"

namespace sqa::cli {

namespace {

struct GridAxis {
  double lo = 0.0, hi = 0.0, step = 1.0;
};

// "gamma=0:3:0.05,kappa=0:1:0.02"
void parse_grid(const std::string& grid, GridAxis& gamma, GridAxis& kappa) {
  auto parse_axis = [](const std::string& part, const std::string& name, GridAxis& axis) {
    const std::string prefix = name + "=";
    if (part.rfind(prefix, 0) != 0)
      throw io::InputError("grid axis must start with \"" + prefix + "\"");
    const std::string range = part.substr(prefix.size());
    double lo, hi, step;
    if (std::sscanf(range.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
      throw io::InputError("grid axis \"" + part + "\" must be lo:hi:step with step > 0");
    axis = {lo, hi, step};
  };
  const auto comma = grid.find(',');
  if (comma == std::string::npos) throw io::InputError("grid needs gamma=...,kappa=...");
  parse_axis(grid.substr(0, comma), "gamma", gamma);
  parse_axis(grid.substr(comma + 1), "kappa", kappa);
}

std::unique_ptr<std::ostream> open_output(const std::string& path, std::ostream*& out) {
  if (path.empty() || path == "-") {
    out = &std::cout;
    return nullptr;
  }
  auto file = std::make_unique<std::ofstream>(path);
  if (!*file) throw io::InputError("cannot write " + path);
  out = file.get();
  return file;
}

int cmd_coeff(const std::string& grid_spec, double beta_over_m, int degree,
              const std::string& out_path) {
  GridAxis gamma_axis, kappa_axis;
  parse_grid(grid_spec, gamma_axis, kappa_axis);

  std::ostream* out = nullptr;
  auto holder = open_output(out_path, out);
  *out << "a,b_k,C0,C1,C2,alpha1,alpha2,lambda,sign_free\n";
  char buf[512];
  for (double gamma = gamma_axis.lo; gamma <= gamma_axis.hi + 1e-12 * gamma_axis.step;
       gamma += gamma_axis.step) {
    for (double kappa = kappa_axis.lo; kappa <= kappa_axis.hi + 1e-12 * kappa_axis.step;
         kappa += kappa_axis.step) {
      const double a = beta_over_m * gamma / degree;
      const double b_k = beta_over_m * kappa;
      const PairWeights w = pair_kernel(a, b_k);
      const bool ok = w.c2 >= 0.0;
      double a1 = std::nan(""), a2 = std::nan(""), lam = std::nan("");
      if (w.c2 > 0.0) {
        const TrotterCoefficients c = coefficients_from_reduced(a, b_k, beta_over_m);
        a1 = c.alpha1;
        a2 = c.alpha2;
        lam = c.lambda;
      }
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n", a,
                    b_k, w.c0, w.c1, w.c2, a1, a2, lam, ok ? 1 : 0);
      *out << buf;
    }
  }
  return 0;
}

int cmd_validate(const std::string& policy_path, int n_spins, double t_max) {
  const SchedulePolicy policy = [&] {
    SchedulePolicy p = io::load_policy(policy_path);
    if (p.t_switch < 0.0) p.t_switch = 0.0;  // condition checks live in the asymptotic phase
    return p;
  }();
  const ValidationReport report = validate(policy, n_spins, t_max);

  std::cout << "{\n  \"conditions\": [\n";
  for (std::size_t i = 0; i < report.conditions.size(); ++i) {
    const ConditionResult& c = report.conditions[i];
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "    {\"id\": \"%s\", \"description\": \"%s\", \"pass\": %s, "
                  "\"witness_t\": %.6g, \"witness_value\": %.6g}%s\n",
                  c.id.c_str(), c.description.c_str(), c.pass ? "true" : "false", c.witness_t,
                  c.witness_value, i + 1 < report.conditions.size() ? "," : "");
    std::cout << buf;
  }
  std::cout << "  ],\n  \"all_pass\": " << (report.all_pass ? "true" : "false") << "\n}\n";
  return report.all_pass ? 0 : 1;
}

int cmd_simulate(const std::string& problem_path, const std::string& policy_path, double beta,
                 int slices, long sweeps, int replicas, std::uint64_t seed, long measure_every,
                 double time_per_sweep, const std::string& out_path) {
  const IsingProblem problem = io::load_problem(problem_path);
  SchedulePolicy policy = io::load_policy(policy_path);
  const ScheduleBase base{beta, slices, problem.degree()};
  resolve_t_switch(policy, base);

  RunConfig config;
  config.seed = seed;
  config.sweeps = sweeps;
  config.replicas = replicas;
  config.measure_every = measure_every;
  config.time_per_sweep = time_per_sweep;

  const AnnealResult result = anneal(problem, policy, base, config);

  std::ostream* out = nullptr;
  auto holder = open_output(out_path, out);
  write_trace_csv(*out, result.trace);
  return 0;
}

int cmd_spectrum(const std::string& problem_path, const std::string& policy_path, double beta,
                 int slices, double t_lo, double t_hi, int t_points,
                 const std::string& out_path) {
  const IsingProblem problem = io::load_problem(problem_path);
  SchedulePolicy policy = io::load_policy(policy_path);
  const ScheduleBase base{beta, slices, problem.degree()};
  resolve_t_switch(policy, base);

  std::ostream* out = nullptr;
  auto holder = open_output(out_path, out);
  *out << "t,gamma,kappa,alpha1,alpha2,gap_H,gap_Hcal,norm_dHdt,ratio\n";
  char buf[512];
  for (int i = 0; i < t_points; ++i) {
    const double t = t_points == 1
                         ? t_lo
                         : t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (t_points - 1));
    const AnnealParams params = params_at(policy, base, t);
    const TrotterCoefficients coeffs = coefficients(params, problem.degree());
    const AdiabaticReport r = adiabatic_ratio(problem, policy, base, t);
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", t,
                  params.gamma, params.kappa, coeffs.alpha1, coeffs.alpha2, r.gap_h, r.gap_hcal,
                  r.norm_dhcal_dt, r.ratio);
    *out << buf;
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"simulated quantum annealing with a two-spin transverse catalyst"};
  app.require_subcommand(1);

  // coeff
  std::string grid_spec;
  double beta_over_m = 1.0;
  int degree = 1;
  std::string coeff_out;
  CLI::App* coeff = app.add_subcommand("coeff", "tabulate kernel weights and couplings");
  coeff->add_option("--grid", grid_spec, "gamma=lo:hi:step,kappa=lo:hi:step")->required();
  coeff->add_option("--beta-over-m", beta_over_m, "beta / M")->required();
  coeff->add_option("--b", degree, "vertex degree b")->required();
  coeff->add_option("--out", coeff_out, "output CSV (default stdout)");

  // validate-schedule
  std::string policy_path;
  int n_spins = 2;
  double t_max = 1e12;
  CLI::App* vs = app.add_subcommand("validate-schedule", "check the convergence conditions");
  vs->add_option("--policy", policy_path, "policy JSON file")->required();
  vs->add_option("--n", n_spins, "system size N")->required();
  vs->add_option("--t-max", t_max, "grid upper end");

  // simulate
  std::string sim_problem, sim_policy, sim_out;
  double beta = 1.0;
  int slices = 2;
  long sweeps = 1;
  int replicas = 1;
  std::uint64_t seed = 0;
  long measure_every = 1;
  double time_per_sweep = 1.0;
  CLI::App* sim = app.add_subcommand("simulate", "run the annealing sampler");
  sim->add_option("--problem", sim_problem)->required();
  sim->add_option("--policy", sim_policy)->required();
  sim->add_option("--beta", beta)->required();
  sim->add_option("--slices", slices)->required();
  sim->add_option("--sweeps", sweeps)->required();
  sim->add_option("--replicas", replicas);
  sim->add_option("--seed", seed)->required();
  sim->add_option("--measure-every", measure_every);
  sim->add_option("--time-per-sweep", time_per_sweep);
  sim->add_option("--out", sim_out, "trace CSV path")->required();

  // spectrum
  std::string spec_problem, spec_policy, spec_out;
  double sbeta = 1.0;
  int sslices = 2;
  double t_lo = 1e2, t_hi = 1e4;
  int t_points = 5;
  CLI::App* spectrum = app.add_subcommand("spectrum", "gap and adiabatic-ratio table");
  spectrum->add_option("--problem", spec_problem)->required();
  spectrum->add_option("--policy", spec_policy)->required();
  spectrum->add_option("--beta", sbeta)->required();
  spectrum->add_option("--slices", sslices)->required();
  spectrum->add_option("--t-lo", t_lo);
  spectrum->add_option("--t-hi", t_hi);
  spectrum->add_option("--t-points", t_points);
  spectrum->add_option("--out", spec_out, "output CSV (default stdout)");

  // verify
  std::string verify_what;
  int samples = 100;
  std::uint64_t vseed = 7;
  CLI::App* ver = app.add_subcommand("verify", "oracle cross-checks");
  ver->add_option("what", verify_what, "pair | all")->required();
  ver->add_option("--samples", samples);
  ver->add_option("--seed", vseed);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (coeff->parsed()) return cmd_coeff(grid_spec, beta_over_m, degree, coeff_out);
    if (vs->parsed()) return cmd_validate(policy_path, n_spins, t_max);
    if (sim->parsed())
      return cmd_simulate(sim_problem, sim_policy, beta, slices, sweeps, replicas, seed,
                          measure_every, time_per_sweep, sim_out);
    if (spectrum->parsed())
      return cmd_spectrum(spec_problem, spec_policy, sbeta, sslices, t_lo, t_hi, t_points,
                          spec_out);
    if (ver->parsed()) {
      if (verify_what == "pair")
        return verify::run_pair(std::cout, samples, vseed) == 0 ? 0 : 1;
      if (verify_what == "all") return verify::run_all(std::cout) == 0 ? 0 : 1;
      throw io::InputError("unknown verify target \"" + verify_what + "\"");
    }
  } catch (const NonStoquasticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const io::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace sqa::cli
