#include <cmath>
#include <limits>
#include <stdexcept>

#include "roacert/roa.hpp"

namespace roacert {

WDiagnosis diagnose_w(const Certificate& cert, int resolution) {
  if (resolution < 2) throw std::invalid_argument("diagnose_w: resolution must be at least 2");
  const int n = cert.w_scaled.nvars();
  int r = resolution;
  while (r > 2 && std::pow(static_cast<double>(r), n) > 2e5) --r;

  WDiagnosis out;
  out.min_w = std::numeric_limits<double>::infinity();
  out.max_w = -std::numeric_limits<double>::infinity();
  std::vector<int> idx(n, 0);
  Eigen::VectorXd y(n);
  while (true) {
    for (int i = 0; i < n; ++i) y(i) = -1.0 + 2.0 * idx[i] / (r - 1);
    const double w = cert.w_scaled.evaluate(y);
    out.min_w = std::min(out.min_w, w);
    out.max_w = std::max(out.max_w, w);
    int k = 0;
    while (k < n && ++idx[k] == r) idx[k++] = 0;
    if (k == n) break;
  }
  out.flat = out.min_w >= kFlatThreshold;
  return out;
}

}  // namespace roacert
