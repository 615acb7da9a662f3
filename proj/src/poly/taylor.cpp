#include "roacert/poly.hpp"

namespace roacert {

Polynomial taylor_trig(TrigKind kind, int degree) {
  if (degree < 0) throw std::invalid_argument("taylor_trig: negative degree");
  Polynomial p(1);
  double factorial = 1.0;
  for (int k = 0; k <= degree; ++k) {
    if (k > 0) factorial *= k;
    const bool odd = (k % 2) == 1;
    if ((kind == TrigKind::Sin) != odd) continue;
    const int half = odd ? (k - 1) / 2 : k / 2;
    const double sign = (half % 2 == 0) ? 1.0 : -1.0;
    p.add_term({k}, sign / factorial);
  }
  return p;
}

}  // namespace roacert
