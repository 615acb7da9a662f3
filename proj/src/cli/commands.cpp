#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "roacert/cert.hpp"
#include "roacert/cli.hpp"
#include "roacert/roa.hpp"

namespace roacert::cli {

namespace {

namespace fs = std::filesystem;

/// Problem source plus query overrides shared by solve, sweep and dump-sdp.
struct ProblemFlags {
  std::string preset;
  std::string config;
  std::string mode;
  std::optional<int> d;
  std::optional<double> T;
  std::optional<std::string> eps;
  std::optional<std::string> A;
};

struct Problem {
  std::string name;
  DynSystem sys;
  RoaQuery query;
  Mode mode = Mode::Outer;
};

struct SolverFlags {
  int max_iter = 200;
  double tol = 1e-8;
  bool verbose = false;
};

void add_problem_flags(CLI::App* cmd, ProblemFlags& f) {
  auto* p = cmd->add_option("--preset", f.preset, "Built-in case study: pll, smib or vdp");
  auto* c = cmd->add_option("--config", f.config, "Problem configuration file");
  p->excludes(c);
  c->excludes(p);
  cmd->add_option("--mode", f.mode, "inner or outer (default: the problem's own)");
  cmd->add_option("--d", f.d, "Relaxation degree (even)");
  cmd->add_option("--T", f.T, "Time horizon");
  cmd->add_option("--eps", f.eps, "Target radius");
  cmd->add_option("--A", f.A, "Target shape matrix, rows separated by ';'");
}

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--max-iter", f.max_iter, "Interior-point iteration limit");
  cmd->add_option("--tol", f.tol, "Interior-point tolerance");
  cmd->add_flag("--verbose", f.verbose, "Print the solver log");
}

Problem load_problem(const ProblemFlags& f, std::ostream& err) {
  Problem p;
  if (!f.preset.empty()) {
    Preset pre = build_preset(f.preset);
    p = {pre.name, pre.sys, pre.query, pre.mode};
  } else if (!f.config.empty()) {
    ProblemConfig cfg = load_config(f.config);
    p = {cfg.name, cfg.sys, cfg.query, cfg.mode};
  } else {
    throw CLI::RequiredError("--preset or --config");
  }
  if (!f.mode.empty()) p.mode = mode_from_string(f.mode);
  if (f.d) p.query.d = *f.d;
  if (f.T) p.query.T = *f.T;
  if (f.eps) p.query.eps = parse_number(*f.eps);
  if (f.A) p.query.A = parse_matrix(*f.A);
  const double residual = check_system(p.sys);
  if (residual > kEquilibriumTolerance) {
    err << "warning: equilibrium residual " << residual << " exceeds " << kEquilibriumTolerance << "\n";
  }
  return p;
}

RoaOptions roa_options(const SolverFlags& f, std::ostream& out) {
  RoaOptions o;
  o.solver.max_iter = f.max_iter;
  o.solver.tol = f.tol;
  o.solver.verbose = f.verbose;
  o.log = f.verbose ? &out : nullptr;
  return o;
}

fs::path output_dir(const std::string& flag) {
  fs::path dir = ".";
  if (!flag.empty()) {
    dir = flag;
  } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    dir = env;
  }
  fs::create_directories(dir);
  return dir;
}

std::string stem(const Problem& p, int d) {
  return p.name + "_" + to_string(p.mode) + "_d" + std::to_string(d);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
}

/// Matplotlib script that renders the CSV files written by `plot`.
std::string plot_script(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                        const std::optional<std::string>& contour, const std::optional<std::string>& target,
                        const std::optional<std::string>& surface) {
  std::ostringstream s;
  s << "import csv\n"
       "import matplotlib.pyplot as plt\n\n"
       "def polylines(path):\n"
       "    lines = {}\n"
       "    with open(path) as f:\n"
       "        for row in csv.DictReader(f):\n"
       "            lines.setdefault(row['polyline'], []).append((float(row['x']), float(row['y'])))\n"
       "    return lines.values()\n\n";
  if (surface) {
    s << "xs, ys, zs = [], [], []\n"
         "with open('" << *surface << "') as f:\n"
         "    for row in csv.DictReader(f):\n"
         "        xs.append(float(row['x'])); ys.append(float(row['y'])); zs.append(float(row['value']))\n"
         "ax = plt.figure().add_subplot(projection='3d')\n"
         "ax.plot_trisurf(xs, ys, zs, cmap='viridis')\n";
  } else {
    s << "ax = plt.figure().add_subplot()\n";
    if (contour) {
      s << "for k, line in enumerate(polylines('" << *contour << "')):\n"
           "    ax.plot(*zip(*line), 'b-', label='v(0, x) = 0' if k == 0 else None)\n";
    }
    if (target) {
      s << "for k, line in enumerate(polylines('" << *target << "')):\n"
           "    ax.plot(*zip(*line), 'r--', label='target' if k == 0 else None)\n";
    }
    s << "ax.legend()\n";
  }
  s << "ax.set_xlabel('" << xlabel << "')\n"
    << "ax.set_ylabel('" << ylabel << "')\n"
    << "ax.set_title('" << title << "')\n"
    << "plt.savefig('" << title << ".png', dpi=150)\n";
  return s.str();
}

int cmd_solve(const ProblemFlags& pf, const SolverFlags& sf, const std::string& out_flag, std::ostream& out,
              std::ostream& err) {
  const Problem p = load_problem(pf, err);
  const auto t0 = std::chrono::steady_clock::now();
  const Certificate cert = solve_roa(p.sys, p.query, p.mode, roa_options(sf, out));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const fs::path path = output_dir(out_flag) / (stem(p, p.query.d) + ".json");
  save_certificate(cert, path.string());
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %s d=%d lambda=%.4f status=%s time=%.1fs%s\n", p.name.c_str(),
                to_string(p.mode), p.query.d, cert.lambda_scaled, cert.stats.status.c_str(), secs,
                cert.unreliable ? " (unreliable)" : "");
  out << buf;
  const WDiagnosis diag = diagnose_w(cert);
  if (diag.flat) err << "warning: w is flat (min " << diag.min_w << "); the degree is likely too low\n";
  out << "certificate: " << path.string() << "\n";
  return cert.unreliable ? 1 : 0;
}

int cmd_sweep(const ProblemFlags& pf, const SolverFlags& sf, const std::vector<int>& degrees,
              const std::string& out_flag, std::ostream& out, std::ostream& err) {
  const Problem p = load_problem(pf, err);
  const auto rows = degree_sweep(p.sys, p.query, degrees, p.mode, roa_options(sf, out));
  const std::string table = format_sweep(rows);
  const fs::path path = output_dir(out_flag) / (p.name + "_" + to_string(p.mode) + "_sweep.txt");
  write_file(path, table);
  out << table << "table: " << path.string() << "\n";
  if (!is_nonincreasing(rows) && p.mode == Mode::Outer) err << "warning: lambda increases along the sweep\n";
  for (const auto& r : rows) {
    if (r.unreliable) return 1;
  }
  return 0;
}

struct PlotFlags {
  std::string file;
  std::string slice = "1,2";
  bool target = false;
  std::string surface;
  int nx = 40;
  int ny = 40;
};

int cmd_plot(const PlotFlags& f, const std::string& out_flag, std::ostream& out) {
  const Certificate cert = load_certificate(f.file);
  cert::SliceSpec spec = cert::parse_slice(f.slice);
  spec.nx = f.nx;
  spec.ny = f.ny;
  cert::check_slice(spec, cert.sys);
  const fs::path dir = output_dir(out_flag);
  const std::string base = fs::path(f.file).stem().string();
  auto label = [&](int i) { return cert.sys.names.empty() ? "x" + std::to_string(i + 1) : cert.sys.names[i]; };
  const std::string xlabel = spec.angle ? "theta" : label(spec.abscissa);
  const std::string ylabel = label(spec.ordinate);
  std::optional<std::string> contour, target, surf;
  std::string title;
  if (!f.surface.empty()) {
    const cert::Surface which = cert::surface_from_string(f.surface);
    const cert::Grid g = cert::surface(cert, which, spec);
    title = base + "_surface_" + f.surface;
    std::ostringstream os;
    cert::write_grid_csv(os, g);
    write_file(dir / (title + ".csv"), os.str());
    surf = title + ".csv";
  } else {
    const cert::Slice s = cert::roa_slice(cert, spec, f.target);
    title = base + "_slice";
    std::ostringstream os;
    cert::write_contours_csv(os, s.contours);
    write_file(dir / (title + "_contour.csv"), os.str());
    contour = title + "_contour.csv";
    if (f.target) {
      std::ostringstream ot;
      cert::write_contours_csv(ot, s.target);
      write_file(dir / (title + "_target.csv"), ot.str());
      target = title + "_target.csv";
    }
    out << s.contours.size() << " contour polylines\n";
  }
  const fs::path script = dir / (title + ".py");
  write_file(script, plot_script(title, xlabel, ylabel, contour, target, surf));
  out << "script: " << script.string() << " (run it from " << dir.string() << ")\n";
  return 0;
}

int cmd_validate(const std::string& file, const cert::ValidateOptions& opts, const std::string& out_flag,
                 std::ostream& out) {
  const Certificate cert = load_certificate(file);
  const cert::ValidationReport r = cert::validate(cert, opts);
  const fs::path path = output_dir(out_flag) / (fs::path(file).stem().string() + "_validation.json");
  write_file(path, cert::report_to_json(r) + "\n");
  out << "certified samples " << r.certified_checked << ", violations " << r.violations << ", indeterminate "
      << r.indeterminate << (r.unreliable ? " (certificate flagged unreliable)" : "") << "\n"
      << "report: " << path.string() << "\n";
  return 0;
}

int cmd_dump(const ProblemFlags& pf, const std::string& out_flag, std::ostream& out, std::ostream& err) {
  const Problem p = load_problem(pf, err);
  const sdp::ConicProblem prob = compile_roa(p.sys, p.query, p.mode);
  const fs::path path = output_dir(out_flag) / (stem(p, p.query.d) + ".sdp");
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  sdp::write_triplets(f, prob);
  out << prob.num_rows() << " rows, " << prob.num_cols() << " columns: " << path.string() << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-time region-of-attraction certificates for polynomial systems"};
  app.require_subcommand(1);
  std::string out_flag;
  app.add_option("--out", out_flag, std::string("Output directory (default: $") + kOutputDirEnv + " or .)");

  ProblemFlags solve_pf, sweep_pf, dump_pf;
  SolverFlags solve_sf, sweep_sf;
  auto* solve = app.add_subcommand("solve", "Solve one relaxation and write its certificate");
  add_problem_flags(solve, solve_pf);
  add_solver_flags(solve, solve_sf);

  auto* sweep = app.add_subcommand("sweep", "Solve a list of degrees and tabulate lambda");
  add_problem_flags(sweep, sweep_pf);
  add_solver_flags(sweep, sweep_sf);
  std::vector<int> degrees;
  sweep->add_option("--degrees", degrees, "Comma-separated even degrees")->delimiter(',')->required();

  PlotFlags plot_f;
  auto* plot = app.add_subcommand("plot", "Slice contours or surfaces of a certificate as CSV plus a script");
  plot->add_option("certificate", plot_f.file, "Certificate JSON")->required();
  plot->add_option("--slice", plot_f.slice, "1-based axes: \"i,j\" or \"(i,j),k\" for a phase abscissa");
  plot->add_flag("--target", plot_f.target, "Also trace the target set");
  plot->add_option("--surface", plot_f.surface, "Heightfield of v or w instead of contours");
  plot->add_option("--nx", plot_f.nx, "Grid points along the abscissa");
  plot->add_option("--ny", plot_f.ny, "Grid points along the ordinate");

  std::string validate_file;
  cert::ValidateOptions vopts;
  auto* validate = app.add_subcommand("validate", "Check a certificate against RK4 simulations");
  validate->add_option("certificate", validate_file, "Certificate JSON")->required();
  validate->add_option("--samples", vopts.samples, "Number of certified samples to simulate");
  validate->add_option("--seed", vopts.seed, "Random seed");
  validate->add_option("--margin", vopts.margin, "Samples satisfy v(0, x) < -margin");

  auto* dump = app.add_subcommand("dump-sdp", "Write the compiled SDP as sparse triplets");
  add_problem_flags(dump, dump_pf);

  for (auto* sub : {solve, sweep, plot, validate, dump}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    if (*solve) return cmd_solve(solve_pf, solve_sf, out_flag, out, err);
    if (*sweep) return cmd_sweep(sweep_pf, sweep_sf, degrees, out_flag, out, err);
    if (*plot) return cmd_plot(plot_f, out_flag, out);
    if (*validate) return cmd_validate(validate_file, vopts, out_flag, out);
    if (*dump) return cmd_dump(dump_pf, out_flag, out, err);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace roacert::cli
