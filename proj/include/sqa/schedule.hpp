#ifndef SQA_SCHEDULE_HPP
#define SQA_SCHEDULE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqa/ising.hpp"

namespace sqa {

// Natural cubic spline through (t, y) knots, extended linearly (with the end
// slopes) outside the knot range so the interpolant stays twice differentiable.
class CubicTable {
 public:
  CubicTable(std::vector<double> t, std::vector<double> y);

  double value(double t) const;
  double deriv1(double t) const;
  double deriv2(double t) const;

  const std::vector<double>& knots_t() const { return t_; }
  const std::vector<double>& knots_y() const { return y_; }

 private:
  int segment(double t) const;

  std::vector<double> t_, y_, m_;  // m_: second derivatives at knots
};

// Exponent function for the schedule: a constant or a tabulated curve.
class ExponentFn {
 public:
  ExponentFn(double constant) : fn_(constant) {}                // NOLINT(google-explicit-constructor)
  ExponentFn(CubicTable table) : fn_(std::move(table)) {}       // NOLINT(google-explicit-constructor)

  double value(double t) const;
  double deriv1(double t) const;
  double deriv2(double t) const;
  bool is_constant() const { return std::holds_alternative<double>(fn_); }

 private:
  std::variant<double, CubicTable> fn_;
};

struct PropConstants {
  double c_prime = 0.1;
  double c_dprime = 0.1;
  double d_prime = 0.1;
  double d_dprime = 0.1;
};

// Annealing policy: asymptotic forms
//   Gamma(t) = (b M / beta) atanh((c3 t + c4)^{-g(t)})
//   K(t)     = (M / beta)   atanh((c3 t + c4)^{-h(t)})
// preceded by a linear ramp from (gamma0, K=0) on [0, t_switch). The degree
// factor b is folded into Gamma so that the log-form identity for the Trotter
// coupling holds exactly; field_without_degree drops it for comparison runs.
struct SchedulePolicy {
  double c3 = 1.0;
  double c4 = 2.0;
  ExponentFn g{0.25};
  ExponentFn h{1.0};
  double t_switch = 0.0;
  double gamma0 = 0.0;  // ramp start value; required when t_switch > 0
  PropConstants prop_constants;
  bool field_without_degree = false;
  bool kappa_off = false;  // force K(t) = 0: reduction to the catalyst-free engine

  void validate_fields() const;  // throws std::invalid_argument
};

// Fixed physics of a run: the schedule maps t to (gamma, kappa) on top of these.
struct ScheduleBase {
  double beta = 1.0;
  int slices = 2;
  int degree = 1;
};

AnnealParams params_at(const SchedulePolicy& policy, const ScheduleBase& base, double t);

// Smallest t at which the asymptotic Gamma has decayed to gamma0, so the ramp
// meets the asymptotic branch continuously.
double default_t_switch(const SchedulePolicy& policy, const ScheduleBase& base);

// Fills an unresolved t_switch (negative sentinel from the policy loader) with
// the default continuity value for this base.
void resolve_t_switch(SchedulePolicy& policy, const ScheduleBase& base);

struct ConditionResult {
  std::string id;           // "limit_nonzero", "g_window", ..., or "strict_sign_free"
  std::string description;
  bool pass = false;
  double witness_t = 0.0;   // grid point of the worst margin / failure
  double witness_value = 0.0;
};

struct ValidationReport {
  std::vector<ConditionResult> conditions;
  bool all_pass = false;          // the nine numbered conditions
  bool strict_sign_free = false;  // tail strictness h > 2g
};

// Checks the nine asymptotic convergence conditions on a geometric t-grid up
// to t_max, plus tail strictness of the sign-free inequality. Always returns a
// report; never throws on failed conditions.
ValidationReport validate(const SchedulePolicy& policy, int n_spins, double t_max = 1e12);

struct TrajectoryReport {
  bool all_ok = false;
  double margin_min = 0.0;  // min of h(t) - 2 g(t) over asymptotic grid points
  double worst_t = 0.0;
};

// Sign-free status along a t-grid. Asymptotic points use the exponent margin
// h - 2g; ramp points fall back to the direct tanh inequality.
TrajectoryReport trajectory_sign_free(const SchedulePolicy& policy, const ScheduleBase& base,
                                      const std::vector<double>& t_grid);

std::vector<double> geometric_grid(double t_lo, double t_hi, int points_per_decade = 8);

// Step size for schedule-time finite differences; schedules move on a
// logarithmic clock, so the step scales with t + c4/c3.
double fd_step(const SchedulePolicy& policy, double t);

}  // namespace sqa

#endif
