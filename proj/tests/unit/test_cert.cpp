#include <cmath>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "roacert/cert.hpp"
#include "roacert/parse.hpp"

using namespace roacert;
using namespace roacert::cert;

namespace {

// Synthetic certificate on the unit disc: v(t, x) = 0.25 - x1^2 - x2^2 on
// a box of half-width 1 (scaled and original coordinates coincide).
Certificate disc(Mode mode) {
  Certificate c;
  c.mode = mode;
  c.d = 2;
  c.sys.names = {"x1", "x2"};
  c.sys.f = {parse_poly("-x1", c.sys.names), parse_poly("-x2", c.sys.names)};
  c.sys.x_star = Eigen::Vector2d::Zero();
  c.sys.delta_x = Eigen::Vector2d::Ones();
  c.query.T = 1.0;
  c.query.eps = 0.1;
  c.query.A = Eigen::Matrix2d::Identity();
  const std::vector<std::string> ring = {"s", "y1", "y2"};
  c.v_scaled = parse_poly("0.25 - y1^2 - y2^2", ring);
  c.v = parse_poly("0.25 - y1^2 - y2^2", ring);
  c.w_scaled = parse_poly("1 + x1^2", c.sys.names);
  c.w = c.w_scaled;
  return c;
}

Grid radial_grid(int n) {
  Grid g;
  for (int i = 0; i < n; ++i) g.xs.push_back(-1.0 + 2.0 * i / (n - 1));
  g.ys = g.xs;
  g.values.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g.values(j, i) = 0.25 - g.xs[i] * g.xs[i] - g.ys[j] * g.ys[j];
  return g;
}

}  // namespace

TEST_CASE("classify by sign and mode") {
  auto inner = disc(Mode::Inner), outer = disc(Mode::Outer);
  // v(0, 0) = 0.25 > 0.
  CHECK_FALSE(classify(inner, Eigen::Vector2d::Zero()).inside);
  CHECK(classify(outer, Eigen::Vector2d::Zero()).inside);
  CHECK(classify(inner, Eigen::Vector2d(0.9, 0.0)).inside);
  CHECK_FALSE(classify(outer, Eigen::Vector2d(0.9, 0.0)).inside);
  auto far = classify(outer, Eigen::Vector2d(1.5, 0.0));
  CHECK_FALSE(far.in_box);
  CHECK_FALSE(far.inside);
  CHECK(classify(outer, Eigen::Vector2d(0.5, 0.0)).value == doctest::Approx(0.0));
}

TEST_CASE("property: classification is invariant under rescaling the box") {
  auto c = disc(Mode::Outer);
  auto big = c;
  big.sys.delta_x = Eigen::Vector2d(2.0, 3.0);
  for (double a = -0.95; a < 1.0; a += 0.1)
    for (double b = -0.95; b < 1.0; b += 0.1) {
      Eigen::Vector2d y(a, b);
      CHECK(classify(c, y).inside == classify(big, big.sys.delta_x.cwiseProduct(y)).inside);
    }
}

TEST_CASE("slice specifications") {
  auto s = parse_slice("1,2");
  CHECK(s.abscissa == 0);
  CHECK(s.ordinate == 1);
  CHECK_FALSE(s.angle);
  auto a = parse_slice("(1,2),3");
  REQUIRE(a.angle);
  CHECK(a.angle->first == 0);
  CHECK(a.angle->second == 1);
  CHECK(a.ordinate == 2);
  CHECK_THROWS(parse_slice("1"));
  CHECK_THROWS(parse_slice("a,b"));

  const auto sys = disc(Mode::Outer).sys;
  CHECK_NOTHROW(check_slice(s, sys));
  CHECK_THROWS(check_slice(parse_slice("1,1"), sys));
  CHECK_THROWS(check_slice(parse_slice("1,3"), sys));
  CHECK_THROWS(check_slice(a, sys));
  auto p = slice_point(s, sys, 0.2, -0.4);
  CHECK(p(0) == 0.2);
  CHECK(p(1) == -0.4);
}

TEST_CASE("marching squares traces a circle") {
  auto g = radial_grid(41);
  auto lines = marching_squares(g);
  REQUIRE(lines.size() == 1);
  const auto& l = lines[0];
  CHECK(l.front().isApprox(l.back()));
  // Linear-interpolation error bound: |grad v| * cell diagonal, with 10x slack.
  const double h = 2.0 / 40.0, bound = 10.0 * 2.0 * std::sqrt(2.0) * h * h;
  for (const auto& p : l) CHECK(std::abs(0.25 - p.squaredNorm()) <= bound);
  // Level shift: v = 0 vs level 0.25 - 0.09 (radius 0.3).
  auto inner = marching_squares(g, 0.25 - 0.09);
  REQUIRE(inner.size() == 1);
  for (const auto& p : inner[0]) CHECK(std::abs(p.norm() - 0.3) <= 0.02);
}

TEST_CASE("marching squares skips NaN cells and open curves") {
  auto g = radial_grid(21);
  for (int j = 0; j < 21; ++j)
    for (int i = 0; i < 10; ++i) g.values(j, i) = std::numeric_limits<double>::quiet_NaN();
  auto lines = marching_squares(g);
  REQUIRE(lines.size() == 1);
  CHECK_FALSE(lines[0].front().isApprox(lines[0].back()));
  for (const auto& p : lines[0]) CHECK(p.x() >= g.xs[10] - 1e-12);
  auto flat = radial_grid(5);
  flat.values.setConstant(1.0);
  CHECK(marching_squares(flat).empty());
}

TEST_CASE("slices, surfaces and CSV output") {
  auto c = disc(Mode::Outer);
  SliceSpec s = parse_slice("1,2");
  s.nx = s.ny = 60;
  auto sl = roa_slice(c, s, true);
  CHECK(sl.contours.size() == 1);
  REQUIRE(sl.target.size() == 1);
  for (const auto& p : sl.target[0]) CHECK(p.norm() == doctest::Approx(0.1).epsilon(0.02));
  auto w = surface(c, Surface::W, s);
  CHECK(w.values(0, 0) == doctest::Approx(2.0));
  CHECK(surface_from_string("v") == Surface::V);
  CHECK_THROWS(surface_from_string("q"));

  std::ostringstream csv;
  write_contours_csv(csv, sl.contours);
  CHECK(csv.str().rfind("polyline,x,y\n", 0) == 0);
  std::ostringstream gcsv;
  write_grid_csv(gcsv, w);
  CHECK(gcsv.str().rfind("x,y,value\n", 0) == 0);
}

TEST_CASE("RK4 simulation outcomes") {
  auto c = disc(Mode::Inner);
  const auto target = c.query.target(2);
  // x(t) = x0 e^{-t}.
  auto tr = simulate(c.sys, Eigen::Vector2d(0.2, 0.0), 1.0, target);
  CHECK(tr.states.back()(0) == doctest::Approx(0.2 * std::exp(-1.0)).epsilon(1e-10));
  CHECK(tr.outcome == Outcome::HitTarget);
  CHECK(simulate(c.sys, Eigen::Vector2d(0.9, 0.0), 1.0, target).outcome == Outcome::MissedTarget);
  auto edge = simulate(c.sys, Eigen::Vector2d(0.1 * std::exp(1.0), 0.0), 1.0, target);
  CHECK(edge.outcome == Outcome::Indeterminate);

  auto up = c;
  up.sys.f = {parse_poly("x1", up.sys.names), parse_poly("0", up.sys.names)};
  auto out = simulate(up.sys, Eigen::Vector2d(0.5, 0.0), 1.0, target);
  CHECK(out.outcome == Outcome::LeftBox);
  CHECK(out.t_exit == doctest::Approx(std::log(2.0)).epsilon(1e-2));
  CHECK(std::string(to_string(Outcome::LeftBox)) == "LeftBox");
}

TEST_CASE("property: halving the RK4 step barely moves preset endpoints") {
  for (const char* name : {"vdp", "pll", "smib"}) {
    const auto p = build_preset(name);
    const auto target = p.query.target(p.sys.n());
    Eigen::VectorXd x0 = p.sys.x_star + 0.2 * p.sys.delta_x.cwiseProduct(Eigen::VectorXd::LinSpaced(p.sys.n(), -1.0, 1.0));
    for (const auto& [si, ci] : p.sys.angle_pairs) {
      const double th = std::atan2(p.sys.x_star(si), p.sys.x_star(ci)) + 0.2;
      x0(si) = std::sin(th);
      x0(ci) = std::cos(th);
    }
    auto a = simulate(p.sys, x0, p.query.T, target, 2000);
    auto b = simulate(p.sys, x0, p.query.T, target, 4000);
    REQUIRE(a.outcome != Outcome::LeftBox);
    CHECK((a.states.back() - b.states.back()).lpNorm<Eigen::Infinity>() <= 1e-6);
  }
}

TEST_CASE("validation of synthetic certificates") {
  // Flow x' = -x with target radius 0.1 and T = 1 has RoA |x| < 0.1 e.
  // Inner set {v < 0} with v = r^2 - 0.2^2 lies inside it.
  auto c = disc(Mode::Inner);
  c.v_scaled = parse_poly("y1^2 + y2^2 - 0.04", std::vector<std::string>{"s", "y1", "y2"});
  c.v = c.v_scaled;
  ValidateOptions o;
  o.samples = 50;
  auto r = validate(c, o);
  CHECK(r.certified_checked + r.indeterminate == 50);
  CHECK(r.violations == 0);
  // The complement of a too-large set is not an inner approximation.
  c.v_scaled = parse_poly("y1^2 + y2^2 - 0.64", std::vector<std::string>{"s", "y1", "y2"});
  c.v = c.v_scaled;
  CHECK(validate(c, o).violations > 0);
  // Outer: v < 0 outside radius 0.5 is truly outside the RoA.
  auto outer = disc(Mode::Outer);
  CHECK(validate(outer, o).violations == 0);

  o.samples = 0;
  auto empty = validate(c, o);
  CHECK(empty.certified_checked == 0);
  CHECK(empty.attempts == 0);

  c.unreliable = true;
  o.samples = 5;
  CHECK(validate(c, o).unreliable);
}

TEST_CASE("property: validation is deterministic for a seed") {
  auto c = disc(Mode::Outer);
  ValidateOptions o;
  o.samples = 30;
  o.seed = 9;
  CHECK(report_to_json(validate(c, o)) == report_to_json(validate(c, o)));
  o.seed = 10;
  auto other = validate(c, o);
  CHECK(other.seed == 10);
}
