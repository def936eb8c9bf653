#include "sqa/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sqa::io {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError(std::string("malformed JSON in ") + what);
  return j;
}

std::vector<Bond> parse_bonds(const json& j) {
  std::vector<Bond> bonds;
  if (!j.is_array()) throw InputError("\"bonds\" must be an array of [i, j, J]");
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 3)
      throw InputError("each bond must be [i, j, J]");
    bonds.push_back({entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>()});
  }
  return bonds;
}

ExponentFn parse_exponent(const json& j, const char* name) {
  if (j.is_number()) return ExponentFn(j.get<double>());
  if (j.is_object() && j.contains("t") && j.contains("y")) {
    const auto t = j["t"].get<std::vector<double>>();
    const auto y = j["y"].get<std::vector<double>>();
    return ExponentFn(CubicTable(t, y));
  }
  throw InputError(std::string("\"") + name + "\" must be a number or {\"t\": [...], \"y\": [...]}");
}

}  // namespace

IsingProblem parse_problem(const std::string& text) {
  const json j = parse_json(text, "problem file");
  try {
    if (!j.contains("n")) throw InputError("problem file needs \"n\"");
    const int n = j["n"].get<int>();
    const std::string topology = j.value("topology", std::string("edge-list"));
    if (topology == "ring")
      return build_problem(n, Topology::Ring, {}, j.value("coupling", 1.0));
    if (topology == "complete")
      return build_problem(n, Topology::Complete, {}, j.value("coupling", 1.0));
    if (topology == "edge-list") {
      if (!j.contains("bonds")) throw InputError("edge-list problem needs \"bonds\"");
      return build_problem(n, Topology::EdgeList, parse_bonds(j["bonds"]));
    }
    throw InputError("unknown topology \"" + topology + "\"");
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid problem: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid problem: ") + e.what());
  }
}

IsingProblem load_problem(const std::string& path) { return parse_problem(read_file(path)); }

std::string problem_to_json(const IsingProblem& problem) {
  json j;
  j["n"] = problem.n_spins();
  j["topology"] = "edge-list";
  json bonds = json::array();
  for (const Bond& b : problem.bonds()) bonds.push_back({b.i, b.j, b.coupling});
  j["bonds"] = bonds;
  return j.dump(2);
}

SchedulePolicy parse_policy(const std::string& text) {
  const json j = parse_json(text, "policy file");
  SchedulePolicy p;
  try {
    if (!j.contains("c3") || !j.contains("c4") || !j.contains("g") || !j.contains("h"))
      throw InputError("policy file needs \"c3\", \"c4\", \"g\", \"h\"");
    p.c3 = j["c3"].get<double>();
    p.c4 = j["c4"].get<double>();
    p.g = parse_exponent(j["g"], "g");
    p.h = parse_exponent(j["h"], "h");
    p.gamma0 = j.value("gamma0", 0.0);
    if (j.contains("t_switch"))
      p.t_switch = j["t_switch"].get<double>();
    else
      p.t_switch = p.gamma0 > 0.0 ? -1.0 : 0.0;  // resolved later against the base
    if (j.contains("prop_constants")) {
      const json& c = j["prop_constants"];
      p.prop_constants.c_prime = c.value("c_prime", p.prop_constants.c_prime);
      p.prop_constants.c_dprime = c.value("c_dprime", p.prop_constants.c_dprime);
      p.prop_constants.d_prime = c.value("d_prime", p.prop_constants.d_prime);
      p.prop_constants.d_dprime = c.value("d_dprime", p.prop_constants.d_dprime);
    }
    p.field_without_degree = j.value("field_without_degree", false);
    p.kappa_off = j.value("kappa_off", false);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid policy: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid policy: ") + e.what());
  }
  return p;
}

SchedulePolicy load_policy(const std::string& path) { return parse_policy(read_file(path)); }

std::string path_to_text(const SpinPath& spins) {
  std::ostringstream out;
  out << spins.n_sites() << " " << spins.n_slices() << "\n";
  for (int i = 0; i < spins.n_sites(); ++i) {
    for (int k = 0; k < spins.n_slices(); ++k) out << (spins.spin(i, k) > 0 ? '+' : '-');
    out << "\n";
  }
  return out.str();
}

SpinPath parse_path(const std::string& text) {
  std::istringstream in(text);
  int n = 0, m = 0;
  if (!(in >> n >> m)) throw InputError("path file needs an \"n m\" header");
  SpinPath path(n, m);
  for (int i = 0; i < n; ++i) {
    std::string row;
    if (!(in >> row) || static_cast<int>(row.size()) != m)
      throw InputError("path file row " + std::to_string(i) + " must have " + std::to_string(m) +
                       " entries");
    for (int k = 0; k < m; ++k) {
      if (row[static_cast<std::size_t>(k)] != '+' && row[static_cast<std::size_t>(k)] != '-')
        throw InputError("path entries must be '+' or '-'");
      path.set(i, k, row[static_cast<std::size_t>(k)] == '+' ? +1 : -1);
    }
  }
  return path;
}

void save_path(const std::string& path, const SpinPath& spins) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << path_to_text(spins);
}

SpinPath load_path(const std::string& path) { return parse_path(read_file(path)); }

}  // namespace sqa::io
