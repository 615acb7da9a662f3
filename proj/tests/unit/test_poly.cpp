#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "roacert/parse.hpp"
#include "roacert/poly.hpp"

using namespace roacert;

namespace {

const std::vector<std::string> kXY = {"x1", "x2"};

Polynomial random_poly(std::mt19937& rng, int nvars, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Polynomial p(nvars);
  for (const auto& e : monomials_up_to(nvars, degree))
    if (u(rng) > 0.0) p.add_term(e, u(rng));
  return p;
}

double max_coeff_diff(const Polynomial& a, const Polynomial& b) {
  double m = 0.0;
  for (const auto& [e, c] : (a - b).terms()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TEST_CASE("graded-lex ordering and basis size") {
  auto b = monomials_up_to(2, 1);
  REQUIRE(b.size() == 3);
  CHECK(b[0] == Exponents{0, 0});
  CHECK(b[1] == Exponents{1, 0});
  CHECK(b[2] == Exponents{0, 1});
  CHECK(monomials_up_to(3, 2).size() == 10);
  CHECK(monomials_up_to(7, 3).size() == 120);
}

TEST_CASE("parse examples") {
  auto p = parse_poly("x1^2 - 0.21", kXY);
  CHECK(p.terms().size() == 2);
  CHECK(p.coefficient({2, 0}) == 1.0);
  CHECK(p.coefficient({0, 0}) == doctest::Approx(-0.21));

  auto z = parse_poly("0", std::vector<std::string>{"x1"});
  CHECK(z.is_zero());
  CHECK(z.degree() == 0);

  auto k = parse_poly("K*(x1+x2)^2", kXY, {{"K", 2.0}});
  CHECK(k.coefficient({2, 0}) == 2.0);
  CHECK(k.coefficient({1, 1}) == 4.0);
  CHECK(k.coefficient({0, 2}) == 2.0);
  CHECK(k.terms().size() == 3);

  CHECK(parse_poly("-x1^2", kXY).coefficient({2, 0}) == -1.0);
  CHECK(parse_poly("x1/4", kXY).coefficient({1, 0}) == 0.25);
}

TEST_CASE("parse errors report a position") {
  CHECK_THROWS_AS(parse_poly("x1 + y", kXY), ParseError);
  CHECK_THROWS_AS(parse_poly("x1^-1", kXY), ParseError);
  CHECK_THROWS_AS(parse_poly("x1^1.5", kXY), ParseError);
  CHECK_THROWS_AS(parse_poly("(x1 + 1", kXY), ParseError);
  CHECK_THROWS_AS(parse_poly("sin(x1)", kXY), ParseError);
  try {
    parse_poly("x1 + y", kXY);
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("parse with trig policies") {
  TrigPolicy taylor;
  taylor.taylor_degree = 3;
  auto s = parse_poly("sin(x1)", kXY, {}, taylor);
  CHECK(s.coefficient({1, 0}) == 1.0);
  CHECK(s.coefficient({3, 0}) == doctest::Approx(-1.0 / 6.0));

  const std::vector<std::string> ring = {"w", "s", "c"};
  TrigPolicy recast;
  recast.recast["th"] = {1, 2};
  auto r = parse_poly("sin(th) - 2*cos(th)", ring, {}, recast);
  CHECK(r.coefficient({0, 1, 0}) == 1.0);
  CHECK(r.coefficient({0, 0, 1}) == -2.0);
  CHECK_THROWS_AS(parse_poly("sin(2*th)", ring, {}, recast), ParseError);
}

TEST_CASE("arithmetic examples") {
  auto x = Polynomial::variable(2, 0);
  auto y = Polynomial::variable(2, 1);
  auto one = Polynomial::constant(2, 1.0);
  CHECK((x + (-x)).is_zero());
  CHECK((x + one) * (x - one) == x * x - one);
  CHECK(scale(x * x + 2.0 * y, 0.5) == 0.5 * x * x + y);
  CHECK_THROWS(add(x, Polynomial::variable(3, 0)));
  CHECK_THROWS(mul(x, Polynomial::variable(3, 0)));
}

TEST_CASE("differentiation examples") {
  auto p = parse_poly("x1^2*x2", kXY);
  CHECK(differentiate(p, 0) == parse_poly("2*x1*x2", kXY));
  CHECK(differentiate(Polynomial::constant(3, 5.0), 2).is_zero());
  CHECK(differentiate(parse_poly("x1^2 - 4.2*x2^2", kXY), 1) == parse_poly("-8.4*x2", kXY));
  CHECK_THROWS(differentiate(p, 2));
}

TEST_CASE("evaluation examples") {
  CHECK(parse_poly("x1^2 + x2^2", kXY).evaluate(std::vector<double>{3, 4}) == 25.0);
  CHECK(Polynomial(2).evaluate(std::vector<double>{7, -1}) == 0.0);
  auto f2 = parse_poly("0.8*x1 + 10*(x1^2 - 0.21)*x2", kXY);
  CHECK(f2.evaluate(std::vector<double>{1, 1}) == doctest::Approx(8.7));
  CHECK_THROWS(f2.evaluate(std::vector<double>{1}));
}

TEST_CASE("affine composition") {
  auto p = parse_poly("x1^2 + x1*x2", kXY);
  Eigen::VectorXd D(2), c(2);
  D << 2.0, 0.5;
  c << 1.0, -1.0;
  auto q = compose_affine(p, D, c);
  CHECK(q.degree() == p.degree());
  for (double a : {-1.0, 0.3, 0.9})
    for (double b : {-0.7, 0.0, 1.0}) {
      std::vector<double> y = {a, b}, x = {1.0 + 2.0 * a, -1.0 + 0.5 * b};
      CHECK(q.evaluate(y) == doctest::Approx(p.evaluate(x)));
    }
  D(1) = 0.0;
  CHECK_THROWS(compose_affine(p, D, c));
}

TEST_CASE("taylor truncations") {
  auto s = taylor_trig(TrigKind::Sin, 5);
  auto c = taylor_trig(TrigKind::Cos, 4);
  CHECK(s.degree() == 5);
  CHECK(c.degree() == 4);
  CHECK(s.coefficient({5}) == doctest::Approx(1.0 / 120.0));
  CHECK(c.coefficient({4}) == doctest::Approx(1.0 / 24.0));
  CHECK(taylor_trig(TrigKind::Sin, 1) == Polynomial::variable(1, 0));
  auto s10 = taylor_trig(TrigKind::Sin, 10);
  CHECK(s10.degree() == 9);
  CHECK(s10.coefficient({9}) == doctest::Approx(1.0 / 362880.0));
  CHECK(taylor_trig(TrigKind::Cos, 10).coefficient({10}) == doctest::Approx(-1.0 / 3628800.0));
}

TEST_CASE("property: Lagrange remainder bound of the degree-10 sine") {
  auto s10 = taylor_trig(TrigKind::Sin, 10);
  const double fact11 = 39916800.0;
  for (int k = -50; k <= 50; ++k) {
    const double z = std::numbers::pi * k / 50.0;
    CHECK(std::abs(s10.evaluate(std::vector<double>{z}) - std::sin(z)) <= std::pow(std::abs(z), 11) / fact11 + 1e-15);
  }
}

TEST_CASE("canonical text round-trips") {
  auto names = default_names(2);
  auto p = parse_poly("x1^2*x2 - 0.21*x2 + 3", kXY);
  auto text = to_string(p, names);
  CHECK(parse_poly(text, names) == p);
  CHECK(to_string(parse_poly("x1^2*x2 - 0.21*x2", kXY), names) == "1.0*x1^2*x2 - 0.21*x2");
}

TEST_CASE("property: ring axioms on random polynomials") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    auto p = random_poly(rng, 3, 3), q = random_poly(rng, 3, 2), r = random_poly(rng, 3, 2);
    CHECK(p + q == q + p);
    CHECK(max_coeff_diff(p * q, q * p) < 1e-13);
    CHECK(max_coeff_diff(p * (q + r), p * q + p * r) < 1e-12);
    CHECK(max_coeff_diff((p * q) * r, p * (q * r)) < 1e-12);
    CHECK((p - p).is_zero());
    CHECK((p * q).degree() <= p.degree() + q.degree());
    // Leibniz rule.
    CHECK(max_coeff_diff(differentiate(p * q, 1), differentiate(p, 1) * q + p * differentiate(q, 1)) < 1e-12);
    // Evaluation is a ring homomorphism.
    std::vector<double> z = {0.3 * trial / 25.0, -0.4, 0.7};
    CHECK((p * q).evaluate(z) == doctest::Approx(p.evaluate(z) * q.evaluate(z)));
    CHECK(pow(q, 3).evaluate(z) == doctest::Approx(std::pow(q.evaluate(z), 3)));
    // Text round trip.
    auto names = default_names(3);
    CHECK(max_coeff_diff(parse_poly(to_string(p, names), names), p) == 0.0);
  }
}

TEST_CASE("substitution, fixing and embedding") {
  auto p = parse_poly("x1^2 + 3*x2", kXY);
  auto fixed = fix_variable(p, 0, 2.0);
  CHECK(fixed == parse_poly("4 + 3*x2", kXY));
  std::vector<int> place = {2, 0};
  auto e = embed(p, 3, place);
  CHECK(e.nvars() == 3);
  CHECK(e.coefficient({0, 0, 2}) == 1.0);
  CHECK(e.coefficient({1, 0, 0}) == 3.0);
  auto s = substitute(p, {parse_poly("x2", kXY), parse_poly("x1", kXY)});
  CHECK(s == parse_poly("x2^2 + 3*x1", kXY));
}
