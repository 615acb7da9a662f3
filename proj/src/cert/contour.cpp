#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <regex>
#include <stdexcept>

#include "roacert/cert.hpp"

namespace roacert::cert {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Axis range of the slice: theta for an angle abscissa, the box otherwise.
std::pair<double, double> axis_range(const DynSystem& sys, int index, bool angle) {
  if (angle) return {-std::numbers::pi, std::numbers::pi};
  return {sys.x_star(index) - sys.delta_x(index), sys.x_star(index) + sys.delta_x(index)};
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

template <typename F>
Grid sample(const SliceSpec& spec, const DynSystem& sys, int nx, int ny, F&& fn) {
  check_slice(spec, sys);
  Grid g;
  const auto [x0, x1] = axis_range(sys, spec.angle ? spec.angle->first : spec.abscissa, spec.angle.has_value());
  const auto [y0, y1] = axis_range(sys, spec.ordinate, false);
  g.xs = linspace(x0, x1, nx);
  g.ys = linspace(y0, y1, ny);
  g.values.resize(ny, nx);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Eigen::VectorXd x = slice_point(spec, sys, g.xs[i], g.ys[j]);
      const bool in_box = ((x - sys.x_star).cwiseAbs().array() <= sys.delta_x.array() * (1.0 + 1e-12)).all();
      g.values(j, i) = in_box ? fn(x) : kNaN;
    }
  }
  return g;
}

}  // namespace

SliceSpec parse_slice(const std::string& text) {
  static const std::regex plain(R"(\s*(\d+)\s*,\s*(\d+)\s*)");
  static const std::regex angle(R"(\s*[\(\[]\s*(\d+)\s*,\s*(\d+)\s*[\)\]]\s*,\s*(\d+)\s*)");
  std::smatch m;
  SliceSpec s;
  if (std::regex_match(text, m, plain)) {
    s.abscissa = std::stoi(m[1]) - 1;
    s.ordinate = std::stoi(m[2]) - 1;
  } else if (std::regex_match(text, m, angle)) {
    s.angle = std::pair{std::stoi(m[1]) - 1, std::stoi(m[2]) - 1};
    s.abscissa = s.angle->first;
    s.ordinate = std::stoi(m[3]) - 1;
  } else {
    throw std::invalid_argument("slice: expected \"i,j\" or \"(i,j),k\" but got '" + text + "'");
  }
  return s;
}

void check_slice(const SliceSpec& spec, const DynSystem& sys) {
  const int n = sys.n();
  auto in_range = [n](int i) { return i >= 0 && i < n; };
  if (spec.nx < 2 || spec.ny < 2) throw std::invalid_argument("slice: need at least 2 grid points per axis");
  if (!in_range(spec.ordinate)) throw std::invalid_argument("slice: ordinate out of range");
  if (spec.angle) {
    const auto [i, j] = *spec.angle;
    if (!in_range(i) || !in_range(j)) throw std::invalid_argument("slice: angle indices out of range");
    bool declared = false;
    for (const auto& p : sys.angle_pairs) declared = declared || p == *spec.angle;
    if (!declared) throw std::invalid_argument("slice: (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                               ") is not a declared angle pair");
    if (spec.ordinate == i || spec.ordinate == j) throw std::invalid_argument("slice: ordinate repeats the angle pair");
  } else {
    if (!in_range(spec.abscissa)) throw std::invalid_argument("slice: abscissa out of range");
    if (spec.abscissa == spec.ordinate) throw std::invalid_argument("slice: abscissa equals ordinate");
  }
}

Eigen::VectorXd slice_point(const SliceSpec& spec, const DynSystem& sys, double a, double b) {
  Eigen::VectorXd x = sys.x_star;
  if (spec.angle) {
    x(spec.angle->first) = std::sin(a);
    x(spec.angle->second) = std::cos(a);
  } else {
    x(spec.abscissa) = a;
  }
  x(spec.ordinate) = b;
  return x;
}

std::vector<Polyline> marching_squares(const Grid& g, double level) {
  const int nx = static_cast<int>(g.xs.size()), ny = static_cast<int>(g.ys.size());
  if (nx < 2 || ny < 2) throw std::invalid_argument("marching_squares: degenerate grid");
  // Edge ids: horizontal edge (i, j)-(i+1, j) -> 2 (j nx + i); vertical
  // edge (i, j)-(i, j+1) -> 2 (j nx + i) + 1.
  auto hid = [nx](int i, int j) { return 2L * (static_cast<long>(j) * nx + i); };
  auto vid = [nx](int i, int j) { return 2L * (static_cast<long>(j) * nx + i) + 1; };
  std::map<long, Eigen::Vector2d> point;
  auto cross = [&](long id, int i0, int j0, int i1, int j1) {
    if (!point.count(id)) {
      const double a = g.values(j0, i0) - level, b = g.values(j1, i1) - level;
      const double t = a == b ? 0.5 : a / (a - b);
      point[id] = Eigen::Vector2d(g.xs[i0] + t * (g.xs[i1] - g.xs[i0]), g.ys[j0] + t * (g.ys[j1] - g.ys[j0]));
    }
    return id;
  };
  std::vector<std::pair<long, long>> segs;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double v00 = g.values(j, i), v10 = g.values(j, i + 1), v11 = g.values(j + 1, i + 1),
                   v01 = g.values(j + 1, i);
      if (std::isnan(v00) || std::isnan(v10) || std::isnan(v11) || std::isnan(v01)) continue;
      const int code = (v00 > level ? 1 : 0) | (v10 > level ? 2 : 0) | (v11 > level ? 4 : 0) | (v01 > level ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const long b = hid(i, j), r = vid(i + 1, j), t = hid(i, j + 1), l = vid(i, j);
      auto use = [&](long e) {
        if (e == b) return cross(b, i, j, i + 1, j);
        if (e == r) return cross(r, i + 1, j, i + 1, j + 1);
        if (e == t) return cross(t, i, j + 1, i + 1, j + 1);
        return cross(l, i, j, i, j + 1);
      };
      auto seg = [&](long e1, long e2) { segs.emplace_back(use(e1), use(e2)); };
      switch (code) {
        case 1: case 14: seg(l, b); break;
        case 2: case 13: seg(b, r); break;
        case 3: case 12: seg(l, r); break;
        case 4: case 11: seg(r, t); break;
        case 6: case 9: seg(b, t); break;
        case 7: case 8: seg(l, t); break;
        case 5: case 10: {
          // Saddle: the centre average decides which corners connect.
          const bool centre = 0.25 * (v00 + v10 + v11 + v01) > level;
          if ((code == 5) == centre) {
            seg(l, t);
            seg(b, r);
          } else {
            seg(l, b);
            seg(r, t);
          }
          break;
        }
        default: break;
      }
    }
  }
  // Chain segments through shared edge points.
  std::map<long, std::vector<std::size_t>> at;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    at[segs[k].first].push_back(k);
    at[segs[k].second].push_back(k);
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<Polyline> out;
  auto next_seg = [&](long p) -> std::optional<std::size_t> {
    for (std::size_t k : at[p]) {
      if (!used[k]) return k;
    }
    return std::nullopt;
  };
  // Open chains start at points of degree one, closed ones anywhere.
  std::vector<long> starts;
  for (const auto& [p, ks] : at) {
    if (ks.size() == 1) starts.push_back(p);
  }
  for (const auto& [p, ks] : at) starts.push_back(p);
  for (long s : starts) {
    while (auto k0 = next_seg(s)) {
      std::vector<long> ids{s};
      long cur = s;
      std::optional<std::size_t> k = k0;
      while (k) {
        used[*k] = true;
        cur = segs[*k].first == cur ? segs[*k].second : segs[*k].first;
        ids.push_back(cur);
        k = next_seg(cur);
      }
      Polyline line;
      for (long id : ids) line.push_back(point.at(id));
      out.push_back(std::move(line));
    }
  }
  return out;
}

Slice roa_slice(const Certificate& cert, const SliceSpec& spec, bool include_target) {
  Slice s;
  s.grid = sample(spec, cert.sys, spec.nx, spec.ny, [&](const Eigen::VectorXd& x) { return cert.v0(x); });
  s.contours = marching_squares(s.grid);
  if (include_target) {
    const TargetEllipsoid t = cert.query.target(cert.sys.n());
    const int fine = std::max(200, 4 * std::max(spec.nx, spec.ny));
    const Grid tg = sample(spec, cert.sys, fine, fine, [&](const Eigen::VectorXd& x) {
      return t.eps * t.eps - (t.A * (x - cert.sys.x_star)).squaredNorm();
    });
    s.target = marching_squares(tg);
  }
  return s;
}

Surface surface_from_string(const std::string& s) {
  if (s == "v") return Surface::V;
  if (s == "w") return Surface::W;
  throw std::invalid_argument("surface: expected 'v' or 'w' but got '" + s + "'");
}

Grid surface(const Certificate& cert, Surface which, const SliceSpec& spec) {
  return sample(spec, cert.sys, spec.nx, spec.ny, [&](const Eigen::VectorXd& x) {
    return which == Surface::V ? cert.v0(x) : cert.w_at(x);
  });
}

void write_contours_csv(std::ostream& os, const std::vector<Polyline>& lines) {
  os << "polyline,x,y\n";
  os.precision(10);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    for (const auto& p : lines[k]) os << k << ',' << p.x() << ',' << p.y() << '\n';
  }
}

void write_grid_csv(std::ostream& os, const Grid& g) {
  os << "x,y,value\n";
  os.precision(10);
  for (std::size_t j = 0; j < g.ys.size(); ++j) {
    for (std::size_t i = 0; i < g.xs.size(); ++i) {
      const double v = g.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      if (!std::isnan(v)) os << g.xs[i] << ',' << g.ys[j] << ',' << v << '\n';
    }
  }
}

}  // namespace roacert::cert
