#include <cmath>
#include <numbers>
#include <stdexcept>

#include "roacert/model.hpp"
#include "roacert/parse.hpp"

namespace roacert {

namespace {

using ParamMap = std::map<std::string, double, std::less<>>;

std::vector<std::pair<std::string, double>> to_list(const ParamMap& params) {
  return {params.begin(), params.end()};
}

}  // namespace

Preset build_pll() {
  const double K = 1.0;
  const double wn = 10.813;
  const double zeta = 1.3303;
  ParamMap params{{"K", K}, {"wn", wn}, {"zeta", zeta}, {"tau1", K / (wn * wn)}, {"tau2", 2.0 * zeta / wn}};

  const std::vector<std::string> names{"phi", "omega"};
  TrigPolicy trig;
  trig.taylor_degree = 10;

  Preset p;
  p.name = "pll";
  p.sys.names = names;
  p.sys.f.push_back(parse_poly("omega", names, params, trig));
  p.sys.f.push_back(parse_poly("-K*tau2/tau1*cos(phi)*omega - K/tau1*sin(phi)", names, params, trig));
  p.sys.x_star = Eigen::Vector2d(0.0, 0.0);
  p.sys.delta_x = Eigen::Vector2d(std::numbers::pi, 20.0 * std::numbers::pi);
  p.published_x_star = p.sys.x_star;

  p.query.d = 16;
  p.query.T = 1.0;
  p.query.eps = 1.7;
  p.query.A = Eigen::Vector2d(std::sqrt(20.0), 1.0 / std::sqrt(20.0)).asDiagonal();
  p.mode = Mode::Outer;
  p.parameters = to_list(params);
  return p;
}

PhaseDynamics smib_phase_dynamics() {
  const double Td = 9.67, xd = 2.38, xpd = 0.336, xq = 1.21, r = 0.002, H = 3.0, ws = 1.0;
  const double R = 0.01, X = 1.185, V = 1.0;
  const double Ta = 1.0, Ka = 70.0, Tg = 0.4, Kg = 0.5, P = 0.7;

  PhaseDynamics raw;
  raw.names = {"theta", "omega", "eqp", "efd", "pm"};
  raw.phases = {0};
  const int ring = 7;
  auto var = [&](int i) { return Polynomial::variable(ring, i); };
  auto cst = [&](double c) { return Polynomial::constant(ring, c); };
  const Polynomial omega = var(1), eqp = var(2), efd = var(3), pm = var(4), s = var(5), c = var(6);

  // Network currents and terminal voltage in the rotating frame.
  const double den = (R + r) * (R + r) + (X + xpd) * (X + xq);
  const Polynomial iq = scale((X + xpd) * V * s - (R + r) * (V * c - eqp), 1.0 / den);
  const Polynomial id = (X + xq) / (R + r) * iq - V / (R + r) * s;
  const Polynomial vd = xq * iq - r * id;
  const Polynomial vq = R * iq + X * id + V * c;

  raw.rhs.push_back(omega - cst(ws));
  raw.rhs.push_back(scale(pm - (vd * id + vq * iq + r * id * id + r * iq * iq), 1.0 / (2.0 * H)));
  raw.rhs.push_back(scale(efd - eqp - (xd - xpd) * id, 1.0 / Td));
  raw.rhs.push_back(scale(Ka * (cst(V * V) - (vd * vd + vq * vq)) - efd, 1.0 / Ta));
  raw.rhs.push_back(scale(cst(P) - pm + Kg * (cst(ws) - omega), 1.0 / Tg));
  return raw;
}

Preset build_smib() {
  const PhaseDynamics raw = smib_phase_dynamics();
  const std::pair<int, int> placement{0, 1};
  const RecastDynamics rc = recast_trig(raw, std::span(&placement, 1));

  Eigen::VectorXd published(5);
  published << 1.539, 1.0, 1.070, 2.459, 0.7;
  const Eigen::VectorXd refined = refine_equilibrium(raw, published, 1e-10);

  auto to_recast = [](const Eigen::VectorXd& st) {
    Eigen::VectorXd x(6);
    x << std::sin(st(0)), std::cos(st(0)), st(1), st(2), st(3), st(4);
    return x;
  };

  Preset p;
  p.name = "smib";
  p.sys.names = rc.names;
  p.sys.f = rc.f;
  p.sys.angle_pairs = rc.angle_pairs;
  p.sys.x_star = to_recast(refined);
  p.sys.delta_x = (Eigen::VectorXd(6) << 1.0, 1.0, 1.0, 1.0, 20.0, 4.0).finished();
  p.published_x_star = to_recast(published);

  p.query.d = 6;
  p.query.T = 10.0;
  p.query.eps = 0.2;
  p.query.A = Eigen::MatrixXd::Identity(6, 6);
  p.mode = Mode::Inner;
  p.parameters = {{"Td", 9.67}, {"xd", 2.38}, {"xpd", 0.336}, {"xq", 1.21}, {"r", 0.002}, {"H", 3.0},
                  {"ws", 1.0},  {"R", 0.01},  {"X", 1.185},   {"V", 1.0},   {"Ta", 1.0},  {"Ka", 70.0},
                  {"Tg", 0.4},  {"Kg", 0.5},  {"P", 0.7}};
  return p;
}

Preset build_vdp() {
  const std::vector<std::string> names{"x1", "x2"};
  Preset p;
  p.name = "vdp";
  p.sys.names = names;
  p.sys.f.push_back(parse_poly("-2*x2", names));
  p.sys.f.push_back(parse_poly("0.8*x1 + 10*(x1^2 - 0.21)*x2", names));
  p.sys.x_star = Eigen::Vector2d(0.0, 0.0);
  p.sys.delta_x = Eigen::Vector2d(1.1, 1.1);
  p.published_x_star = p.sys.x_star;
  p.query.d = 12;
  p.query.T = 1.0;
  p.query.eps = 0.5;
  p.query.A = Eigen::MatrixXd::Identity(2, 2);
  p.mode = Mode::Outer;
  return p;
}

Preset build_preset(const std::string& name) {
  if (name == "pll") return build_pll();
  if (name == "smib") return build_smib();
  if (name == "vdp") return build_vdp();
  throw std::invalid_argument("unknown preset '" + name + "' (expected pll, smib or vdp)");
}

}  // namespace roacert
