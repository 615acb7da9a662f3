#include "roacert/cert.hpp"

namespace roacert::cert {

Classification classify(const Certificate& cert, const Eigen::VectorXd& x) {
  Classification c;
  const DynSystem& sys = cert.sys;
  if (x.size() != sys.n()) throw std::invalid_argument("classify: dimension mismatch");
  c.value = cert.v0(x);
  c.in_box = ((x - sys.x_star).cwiseAbs().array() <= sys.delta_x.array()).all();
  if (!c.in_box) return c;
  c.inside = cert.mode == Mode::Inner ? c.value < 0.0 : c.value >= 0.0;
  return c;
}

}  // namespace roacert::cert
