#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "roacert/cert.hpp"

namespace roacert::cert {

namespace {

/// Uniform point of the box; recast (sin, cos) pairs get a uniform phase
/// and are rejected (nullopt) when the phase point leaves the box.
std::optional<Eigen::VectorXd> draw(const DynSystem& sys, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd x(sys.n());
  for (int i = 0; i < sys.n(); ++i) x(i) = sys.x_star(i) + sys.delta_x(i) * unit(rng);
  for (const auto& [si, ci] : sys.angle_pairs) {
    const double th = std::numbers::pi * unit(rng);
    x(si) = std::sin(th);
    x(ci) = std::cos(th);
  }
  if (((x - sys.x_star).cwiseAbs().array() > sys.delta_x.array()).any()) return std::nullopt;
  return x;
}

}  // namespace

ValidationReport validate(const Certificate& cert, const ValidateOptions& opts) {
  ValidationReport r;
  r.mode = cert.mode;
  r.samples_requested = opts.samples;
  r.unreliable = cert.unreliable;
  r.seed = opts.seed;
  r.margin = opts.margin;
  if (opts.samples <= 0) return r;
  std::mt19937_64 rng(opts.seed);
  const TargetEllipsoid target = cert.query.target(cert.sys.n());
  const long budget = static_cast<long>(opts.samples) * opts.attempts_per_sample;
  int drawn = 0;
  while (drawn < opts.samples && r.attempts < budget) {
    ++r.attempts;
    const auto x = draw(cert.sys, rng);
    if (!x || !(cert.v0(*x) < -opts.margin)) continue;
    ++drawn;
    const Trajectory tr = simulate(cert.sys, *x, cert.query.T, target, opts.steps, false);
    if (tr.outcome == Outcome::Indeterminate) {
      ++r.indeterminate;
      continue;
    }
    ++r.certified_checked;
    // Inner: v(0, x) < 0 promises reaching the target inside the box.
    // Outer: v(0, x) < 0 promises x is not in the region of attraction.
    const bool violated =
        cert.mode == Mode::Inner ? tr.outcome != Outcome::HitTarget : tr.outcome == Outcome::HitTarget;
    if (violated) {
      ++r.violations;
      r.violating_points.push_back(*x);
    }
  }
  return r;
}

std::string report_to_json(const ValidationReport& r) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(r.mode);
  j["samples_requested"] = r.samples_requested;
  j["certified_checked"] = r.certified_checked;
  j["violations"] = r.violations;
  j["indeterminate"] = r.indeterminate;
  j["attempts"] = r.attempts;
  j["unreliable"] = r.unreliable;
  j["seed"] = r.seed;
  j["margin"] = r.margin;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& p : r.violating_points) pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  j["violating_points"] = pts;
  return j.dump(2);
}

}  // namespace roacert::cert
