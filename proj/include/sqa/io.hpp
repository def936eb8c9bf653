#ifndef SQA_IO_HPP
#define SQA_IO_HPP

#include <stdexcept>
#include <string>

#include "sqa/ising.hpp"
#include "sqa/schedule.hpp"

namespace sqa::io {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem file: {"n": int, "topology": "ring"|"complete"|"edge-list",
// "bonds": [[i, j, J], ...], "coupling": J}. "bonds" is required for
// edge-list (and implied when "topology" is absent); "coupling" feeds the
// generated topologies.
IsingProblem load_problem(const std::string& path);
IsingProblem parse_problem(const std::string& text);
std::string problem_to_json(const IsingProblem& problem);

// Policy file: {"c3":, "c4":, "g": number|{"t":[...],"y":[...]}, "h": ...,
// "t_switch":, "gamma0":, "prop_constants": {"c_prime":, "c_dprime":,
// "d_prime":, "d_dprime":}, "field_without_degree":, "kappa_off":}. A missing
// t_switch with gamma0 > 0 is left unresolved (negative sentinel) for
// resolve_t_switch.
SchedulePolicy load_policy(const std::string& path);
SchedulePolicy parse_policy(const std::string& text);

// Path file: "n m" header line, then n rows of m '+'/'-' characters.
void save_path(const std::string& path, const SpinPath& spins);
SpinPath load_path(const std::string& path);
std::string path_to_text(const SpinPath& spins);
SpinPath parse_path(const std::string& text);

}  // namespace sqa::io

#endif
