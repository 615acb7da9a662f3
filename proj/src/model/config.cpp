#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "roacert/model.hpp"
#include "roacert/parse.hpp"

namespace roacert {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

using ParamMap = std::map<std::string, double, std::less<>>;

double constant_expr(const std::string& text, const ParamMap& params) {
  const Polynomial p = parse_poly(text, std::span<const std::string>{}, params);
  return p.coefficient(Exponents{});
}

}  // namespace

double parse_number(const std::string& text) { return constant_expr(trim(text), {}); }

Eigen::VectorXd parse_vector(const std::string& text) {
  const auto parts = split(text, ',');
  Eigen::VectorXd v(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) v(i) = parse_number(parts[i]);
  return v;
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
  const auto rows = split(text, ';');
  std::vector<Eigen::VectorXd> vals;
  for (const auto& r : rows) vals.push_back(parse_vector(r));
  const auto cols = vals.front().size();
  Eigen::MatrixXd m(vals.size(), cols);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i].size() != cols) throw std::invalid_argument("matrix rows have different lengths");
    m.row(i) = vals[i].transpose();
  }
  return m;
}

ProblemConfig parse_config(const std::string& text) {
  ProblemConfig cfg;
  ParamMap params;
  std::vector<std::string> variables;
  std::string time_name;
  std::map<std::string, std::string> dynamics;
  std::vector<std::pair<std::string, std::pair<int, int>>> recasts;
  std::optional<int> taylor_degree;
  bool have_x_star = false, have_delta = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string lhs = trim(line.substr(0, eq));
    const std::string rhs = trim(line.substr(eq + 1));
    std::istringstream lhs_in(lhs);
    std::string key, arg;
    lhs_in >> key >> arg;
    try {
      if (key == "param") {
        params[arg] = constant_expr(rhs, params);
      } else if (key == "f") {
        dynamics[arg] = rhs;
      } else if (key == "recast") {
        const auto idx = split(rhs, ',');
        if (idx.size() != 2) throw std::invalid_argument("recast needs two 1-based positions");
        recasts.push_back({arg, {std::stoi(idx[0]) - 1, std::stoi(idx[1]) - 1}});
      } else if (key == "name") {
        cfg.name = rhs;
      } else if (key == "variables") {
        variables = split(rhs, ',');
      } else if (key == "time") {
        time_name = rhs;
      } else if (key == "taylor_degree") {
        taylor_degree = std::stoi(rhs);
      } else if (key == "x_star") {
        cfg.sys.x_star = parse_vector(rhs);
        have_x_star = true;
      } else if (key == "delta_x") {
        cfg.sys.delta_x = parse_vector(rhs);
        have_delta = true;
      } else if (key == "T") {
        cfg.query.T = parse_number(rhs);
      } else if (key == "epsilon") {
        cfg.query.eps = parse_number(rhs);
      } else if (key == "A") {
        cfg.query.A = parse_matrix(rhs);
      } else if (key == "d") {
        cfg.query.d = std::stoi(rhs);
      } else if (key == "mode") {
        cfg.mode = mode_from_string(rhs);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (variables.empty()) throw std::invalid_argument("config: 'variables' is required");
  if (!have_x_star || !have_delta) throw std::invalid_argument("config: 'x_star' and 'delta_x' are required");

  // Ring: variables, then sin/cos images of recast phases, then time.
  std::vector<std::string> ring = variables;
  TrigPolicy trig;
  trig.taylor_degree = taylor_degree;
  PhaseDynamics raw;
  raw.names = variables;
  for (const auto& [name, pos] : recasts) {
    auto it = std::find(variables.begin(), variables.end(), name);
    if (it == variables.end()) throw std::invalid_argument("config: recast of unknown variable '" + name + "'");
    raw.phases.push_back(static_cast<int>(it - variables.begin()));
  }
  for (std::size_t k = 0; k < recasts.size(); ++k) {
    const std::string& nm = recasts[k].first;
    trig.recast[nm] = {static_cast<int>(ring.size()), static_cast<int>(ring.size() + 1)};
    ring.push_back("sin_" + nm);
    ring.push_back("cos_" + nm);
  }
  const bool time_varying = !time_name.empty();
  if (time_varying) {
    if (!recasts.empty()) throw std::invalid_argument("config: time-varying dynamics cannot be combined with recasting");
    ring.push_back(time_name);
  }

  for (const auto& v : variables) {
    auto it = dynamics.find(v);
    if (it == dynamics.end()) throw std::invalid_argument("config: missing dynamics 'f " + v + " = ...'");
    raw.rhs.push_back(parse_poly(it->second, ring, params, trig));
  }
  if (dynamics.size() != variables.size()) throw std::invalid_argument("config: dynamics given for an undeclared variable");

  if (recasts.empty()) {
    cfg.sys.names = variables;
    cfg.sys.f = raw.rhs;
    cfg.sys.time_varying = time_varying;
  } else {
    std::vector<std::pair<int, int>> placement;
    for (const auto& r : recasts) placement.push_back(r.second);
    const RecastDynamics rc = recast_trig(raw, placement);
    cfg.sys.names = rc.names;
    cfg.sys.f = rc.f;
    cfg.sys.angle_pairs = rc.angle_pairs;
  }
  if (cfg.query.A.size() == 0) cfg.query.A = Eigen::MatrixXd::Identity(cfg.sys.n(), cfg.sys.n());
  if (cfg.name.empty()) cfg.name = "config";
  check_system(cfg.sys);
  check_target(cfg.query.target(cfg.sys.n()), cfg.sys);
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace roacert
