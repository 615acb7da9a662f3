// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are pinned
// here and never read from the environment.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "../common/fixtures.hpp"
#include "roacert/cert.hpp"
#include "roacert/cli.hpp"
#include "roacert/parse.hpp"
#include "roacert/roa.hpp"
#include "roacert/sos.hpp"

namespace fs = std::filesystem;
using namespace roacert;

namespace {

// Criterion 1.
constexpr double kPll4Lambda = 4.0000, kPll4RelTol = 5e-3;
constexpr double kPll8Lambda = 3.5892, kPll8RelTol = 5e-2;
constexpr double kPll12Lambda = 3.1284, kPll16Lambda = 2.9346, kStretchRelTol = 1e-1;
constexpr double kPllSecondsPerDegree = 300.0, kStretchSeconds = 1800.0;
// Criterion 2.
constexpr double kMonotoneSlack = 1e-6;
// Criterion 3.
constexpr int kVdpDegree = 12, kSandwichGrid = 40, kMinCertified = 100, kValidationSamples = 200;
constexpr double kValidationMargin = 1e-3, kVdpSeconds = 600.0;
// Criterion 4.
constexpr int kPllInnerDegree = 8;
// Criterion 5.
constexpr int kSmibDegree = 4;
constexpr double kSmibStatusTol = 1e-6, kSmibMembershipTol = 1e-5;
constexpr int kSmibBlockD6 = 120;
// Criterion 6.
constexpr int kRandomSosTargets = 20;
constexpr double kSosResidualTol = 1e-8, kSosSolveTol = 1e-10;
// Criterion 7.
constexpr int kMomentVectors = 50, kMomentSamples = 1000000, kMaxMomentDim = 6;
constexpr double kMomentSigmas = 3.0;
// Criterion 8.
constexpr int kRandomSdps = 50;
constexpr double kKktTol = 1e-7, kTwoByTwoTol = 1e-7;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Solved {
  Certificate cert;
  double seconds = 0.0;
};

// Solves are shared between criteria.
std::map<std::tuple<std::string, Mode, int>, Solved> g_cache;

const Solved& solved(const std::string& preset, Mode mode, int d) {
  const auto key = std::make_tuple(preset, mode, d);
  if (auto it = g_cache.find(key); it != g_cache.end()) return it->second;
  const Preset p = build_preset(preset);
  RoaQuery q = p.query;
  q.d = d;
  const auto t0 = std::chrono::steady_clock::now();
  Solved s;
  s.cert = solve_roa(p.sys, q, mode);
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "  solved " << preset << " " << to_string(mode) << " d=" << d << ": lambda=" << s.cert.lambda_scaled
            << " status=" << s.cert.stats.status << " time=" << s.seconds << "s\n";
  return g_cache.emplace(key, std::move(s)).first->second;
}

std::string row(const Solved& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "d=%d lambda=%.4f %s %.1fs", s.cert.d, s.cert.lambda_scaled,
                s.cert.stats.status.c_str(), s.seconds);
  return buf;
}

Outcome criterion1(bool stretch) {
  const auto& d4 = solved("pll", Mode::Outer, 4);
  const auto& d8 = solved("pll", Mode::Outer, 8);
  bool ok = rel(d4.cert.lambda_scaled, kPll4Lambda) <= kPll4RelTol && d4.seconds <= kPllSecondsPerDegree;
  ok = ok && rel(d8.cert.lambda_scaled, kPll8Lambda) <= kPll8RelTol && d8.seconds <= kPllSecondsPerDegree;
  std::string detail = row(d4) + "; " + row(d8);
  if (stretch) {
    double prev = d8.cert.lambda_scaled;
    for (auto [d, ref] : {std::pair{12, kPll12Lambda}, std::pair{16, kPll16Lambda}}) {
      const auto& s = solved("pll", Mode::Outer, d);
      detail += "; " + row(s);
      if (s.seconds > kStretchSeconds) continue;
      ok = ok && s.cert.lambda_scaled <= prev + kMonotoneSlack && rel(s.cert.lambda_scaled, ref) <= kStretchRelTol;
      prev = s.cert.lambda_scaled;
    }
  }
  return {ok, detail};
}

Outcome criterion2() {
  const std::vector<std::pair<std::string, std::vector<int>>> lists = {
      {"pll", {2, 4, 6, 8}}, {"vdp", {2, 4, 6, 8, 10, 12}}, {"smib", {2, kSmibDegree}}};
  bool ok = true;
  std::string detail;
  for (const auto& [preset, degrees] : lists) {
    std::vector<SweepRow> rows;
    std::string seq;
    for (int d : degrees) {
      const auto& s = solved(preset, Mode::Outer, d);
      seq += (seq.empty() ? "" : ",") + fmt("%.4f", s.cert.lambda_scaled) + (s.cert.stats.status == "Optimal" ? "" : "*");
      if (s.cert.stats.status == "Optimal") rows.push_back({d, s.cert.lambda_scaled, s.seconds, "Optimal", false});
    }
    const bool mono = is_nonincreasing(rows, kMonotoneSlack);
    ok = ok && mono;
    detail += (detail.empty() ? "" : "; ") + preset + " [" + seq + "]" + (mono ? "" : " increases");
  }
  return {ok, detail + " (* = not Optimal, excluded)"};
}

Outcome criterion3() {
  const auto& in = solved("vdp", Mode::Inner, kVdpDegree);
  const auto& out = solved("vdp", Mode::Outer, kVdpDegree);
  int bad = 0;
  const auto& sys = in.cert.sys;
  for (int i = 0; i < kSandwichGrid; ++i)
    for (int j = 0; j < kSandwichGrid; ++j) {
      Eigen::Vector2d y(-1.0 + 2.0 * i / (kSandwichGrid - 1), -1.0 + 2.0 * j / (kSandwichGrid - 1));
      const Eigen::VectorXd x = sys.x_star + sys.delta_x.cwiseProduct(y);
      if (cert::classify(in.cert, x).inside && !cert::classify(out.cert, x).inside) ++bad;
    }
  cert::ValidateOptions o;
  o.samples = kValidationSamples;
  o.margin = kValidationMargin;
  const auto ri = cert::validate(in.cert, o);
  const auto ro = cert::validate(out.cert, o);
  const double secs = in.seconds + out.seconds;
  const bool ok = bad == 0 && ri.certified_checked >= kMinCertified && ri.violations == 0 &&
                  ro.certified_checked >= kMinCertified && ro.violations == 0 && secs <= kVdpSeconds;
  std::ostringstream d;
  d << "inner " << row(in) << ", outer " << row(out) << "; grid conflicts " << bad << "; inner samples "
    << ri.certified_checked << " violations " << ri.violations << "; outer samples " << ro.certified_checked
    << " violations " << ro.violations;
  return {ok, d.str()};
}

Outcome criterion4() {
  const auto& in = solved("pll", Mode::Inner, kPllInnerDegree);
  cert::ValidateOptions o;
  o.samples = kValidationSamples;
  o.margin = kValidationMargin;
  const auto r = cert::validate(in.cert, o);
  std::ostringstream d;
  d << row(in) << "; certified samples " << r.certified_checked << " (" << r.attempts << " draws), violations "
    << r.violations << ", indeterminate " << r.indeterminate;
  return {r.certified_checked >= kMinCertified && r.violations == 0, d.str()};
}

Outcome criterion5() {
  const auto& s = solved("smib", Mode::Outer, kSmibDegree);
  const auto& c = s.cert;
  const double worst_status = std::max({c.stats.prim_res, c.stats.dual_res, c.stats.gap});
  const bool status_ok =
      c.stats.status == "Optimal" || (c.stats.status == "SlowProgress" && worst_status <= kSmibStatusTol);
  double worst_member = 0.0;
  for (const auto& [label, r] : c.membership_residuals) worst_member = std::max(worst_member, r);
  const auto cls = cert::classify(c, c.sys.x_star);
  const int block = static_cast<int>(sos::gram_basis(7, 3).size());
  std::ostringstream d;
  d << row(s) << "; solver residual " << fmt("%.2e", worst_status) << "; max membership residual "
    << fmt("%.2e", worst_member) << "; x* " << (cls.inside ? "inside" : "outside") << "; d=6 Gram block " << block;
  return {status_ok && worst_member <= kSmibMembershipTol && cls.inside && block == kSmibBlockD6, d.str()};
}

Outcome criterion6() {
  sdp::SolverOptions tight;
  tight.tol = kSosSolveTol;
  auto plain = [](const Polynomial& p, int degree) {
    sos::SosProgram prog;
    sos::QModuleMembership m;
    m.label = "sos";
    m.target = sos::AffinePolyExpr::of_constant(p);
    m.degree = degree;
    prog.constraints.push_back(m);
    return prog;
  };
  auto residual = [&](const sos::SosProgram& prog) {
    auto [cp, map] = sos::compile(prog);
    const auto sol = sdp::solve_ipm(cp, tight);
    if (sol.status != sdp::Status::Optimal) return std::numeric_limits<double>::infinity();
    return sos::verify_membership(sos::recover(sol, map, prog).memberships[0]);
  };
  const auto motzkin = parse_poly("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", std::vector<std::string>{"x", "y"});
  auto [mcp, mmap] = sos::compile(plain(motzkin, 6));
  const auto mstatus = sdp::solve_ipm(mcp, {}).status;
  const double r1 = residual(plain(parse_poly("1 + y^2", std::vector<std::string>{"y"}), 2));
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> N;
  double worst = 0.0;
  for (int k = 0; k < kRandomSosTargets; ++k) {
    const int nvars = 1 + k % 3, half = 1 + k % 3;
    Polynomial sum(nvars);
    for (int t = 0; t < 3; ++t) {
      Polynomial q(nvars);
      for (const auto& e : monomials_up_to(nvars, half)) q.add_term(e, N(rng));
      sum += q * q;
    }
    worst = std::max(worst, residual(plain(sum, 2 * half)));
  }
  std::ostringstream d;
  d << "Motzkin " << sdp::to_string(mstatus) << "; 1+y^2 residual " << fmt("%.2e", r1) << "; worst of "
    << kRandomSosTargets << " random squares " << fmt("%.2e", worst);
  return {mstatus == sdp::Status::Infeasible && r1 <= kSosResidualTol && worst <= kSosResidualTol, d.str()};
}

Outcome criterion7() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, kMaxMomentDim), ex(0, 4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int failures = 0;
  double worst = 0.0;
  for (int k = 0; k < kMomentVectors; ++k) {
    const int n = dim(rng);
    std::vector<int> alpha(n);
    for (auto& a : alpha) a = ex(rng);
    double sum = 0.0, sum2 = 0.0;
    std::vector<double> y(n);
    for (int s = 0; s < kMomentSamples; ++s) {
      double m = 1.0;
      for (int i = 0; i < n; ++i) m *= std::pow(u(rng), alpha[i]);
      sum += m;
      sum2 += m * m;
    }
    const double vol = std::pow(2.0, n), mean = sum / kMomentSamples;
    const double se = vol * std::sqrt(std::max(sum2 / kMomentSamples - mean * mean, 0.0) / kMomentSamples);
    const double z = std::abs(vol * mean - sos::box_moment(alpha)) / std::max(se, 1e-300);
    if (!(z <= kMomentSigmas)) ++failures;
    worst = std::max(worst, z);
  }
  return {failures == 0, std::to_string(kMomentVectors) + " vectors, worst deviation " + fmt("%.2f", worst) +
                             " standard errors"};
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  double worst = 0.0;
  int not_optimal = 0;
  for (int k = 0; k < kRandomSdps; ++k) {
    const auto p = testing::random_sdp(rng);
    const auto sol = sdp::solve_ipm(p, {});
    if (sol.status != sdp::Status::Optimal) ++not_optimal;
    worst = std::max(worst, sdp::residuals(p, sol.x, sol.y, sol.s).max());
  }
  const auto two = sdp::solve_ipm(testing::two_by_two(), {});
  const double x11 = two.x(0);
  std::ostringstream d;
  d << kRandomSdps << " random SDPs, worst KKT " << fmt("%.2e", worst) << ", not Optimal " << not_optimal
    << "; 2x2 X11 = " << fmt("%.10f", x11);
  return {worst <= kKktTol && not_optimal == 0 && std::abs(x11 - 0.25) <= kTwoByTwoTol, d.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion9() {
  const fs::path base = fs::temp_directory_path() / "roacert_acceptance_determinism";
  fs::remove_all(base);
  auto run = [&](const std::string& dir, std::vector<std::string> args) {
    fs::create_directories(base / dir);
    args.insert(args.begin(), "roacert");
    args.push_back("--out");
    args.push_back((base / dir).string());
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    std::string s = out.str();
    // Only the output directory and the wall time may differ.
    const std::string where = (base / dir).string();
    for (auto pos = s.find(where); pos != std::string::npos; pos = s.find(where, pos)) s.replace(pos, where.size(), "<out>");
    for (auto pos = s.find("time="); pos != std::string::npos; pos = s.find("time=", pos + 1))
      s.erase(pos, s.find_first_of(" \n", pos) - pos);
    return s;
  };
  bool ok = true;
  std::vector<std::string> checked;
  const std::vector<std::vector<std::string>> solves = {
      {"solve", "--preset", "vdp", "--mode", "outer", "--d", "8"},
      {"solve", "--preset", "pll", "--mode", "inner", "--d", "6"},
      {"solve", "--preset", "smib", "--mode", "outer", "--d", "2"}};
  for (const auto& args : solves) {
    const auto a = run("a", args), b = run("b", args);
    ok = ok && a == b;
    checked.push_back(args[2] + " " + args[4] + " d=" + args[6]);
  }
  for (const auto& e : fs::directory_iterator(base / "a")) {
    const bool same = slurp(e.path()) == slurp(base / "b" / e.path().filename());
    ok = ok && same && !slurp(e.path()).empty();
  }
  const std::string cert = (base / "a" / "vdp_outer_d8.json").string();
  const auto va = run("va", {"validate", cert, "--samples", "50", "--seed", "3"});
  const auto vb = run("vb", {"validate", cert, "--samples", "50", "--seed", "3"});
  ok = ok && va == vb && slurp(base / "va" / "vdp_outer_d8_validation.json") == slurp(base / "vb" / "vdp_outer_d8_validation.json");
  const auto sa = run("sa", {"sweep", "--preset", "vdp", "--degrees", "2,4"});
  const auto sb = run("sb", {"sweep", "--preset", "vdp", "--degrees", "2,4"});
  ok = ok && sa == sb;
  std::string detail = "byte-identical certificates and summaries for";
  for (const auto& c : checked) detail += " [" + c + "]";
  return {ok, detail + ", validate and sweep reruns"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-9"};
  std::vector<int> only;
  bool stretch = false;
  app.add_option("--criterion", only, "Run only these criteria (repeatable)");
  app.add_flag("--stretch", stretch, "Also attempt the PLL d=12 and d=16 stretch rows");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"PLL accuracy table", [&] { return criterion1(stretch); }},
      {"outer monotonicity", criterion2},
      {"Van der Pol sandwich", criterion3},
      {"PLL inner soundness", criterion4},
      {"SMIB desk scale", criterion5},
      {"SOS compiler oracle", criterion6},
      {"box moments", criterion7},
      {"SDP solver", criterion8},
      {"determinism", criterion9},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
