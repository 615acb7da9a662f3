// Text format (1-based indices, values with 17 significant digits):
//
//   roacert-sdp 1
//   dims <rows> <cols>
//   cones <count>
//   F <k> | L <k> | S <m>        one line per cone, in column order
//   c <nnz>
//   <col> <value>                nonzeros of c
//   A <nnz>
//   <row> <col> <value>
//   b <nnz>
//   <row> <value>
//
// S blocks use the scaled svec layout (lower triangle by columns, sqrt(2)
// on off-diagonals), so an external solver must apply the same convention.

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "roacert/sdp.hpp"

namespace roacert::sdp {

namespace {

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word) {
    throw std::runtime_error("triplet dump: expected '" + word + "' but found '" + got + "'");
  }
}

template <typename T>
T read_value(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw std::runtime_error(std::string("triplet dump: cannot read ") + what);
  return v;
}

}  // namespace

void write_triplets(std::ostream& out, const ConicProblem& p) {
  p.check();
  std::ostringstream os;
  os.precision(17);
  os << "roacert-sdp 1\n";
  os << "dims " << p.num_rows() << ' ' << p.num_cols() << '\n';
  os << "cones " << p.cones.size() << '\n';
  for (const auto& k : p.cones) {
    const char tag = k.kind == ConeKind::Free ? 'F' : k.kind == ConeKind::Nonneg ? 'L' : 'S';
    os << tag << ' ' << k.size << '\n';
  }
  os << "c " << (p.c.array() != 0.0).count() << '\n';
  for (Eigen::Index j = 0; j < p.c.size(); ++j) {
    if (p.c(j) != 0.0) os << j + 1 << ' ' << p.c(j) << '\n';
  }
  os << "A " << p.A.nonZeros() << '\n';
  for (int i = 0; i < p.A.outerSize(); ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(p.A, i); it; ++it) {
      os << i + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  os << "b " << (p.b.array() != 0.0).count() << '\n';
  for (Eigen::Index i = 0; i < p.b.size(); ++i) {
    if (p.b(i) != 0.0) os << i + 1 << ' ' << p.b(i) << '\n';
  }
  out << os.str();
}

ConicProblem read_triplets(std::istream& in) {
  expect(in, "roacert-sdp");
  if (read_value<int>(in, "version") != 1) throw std::runtime_error("triplet dump: unsupported version");
  expect(in, "dims");
  const int m = read_value<int>(in, "row count");
  const int n = read_value<int>(in, "column count");
  if (m < 0 || n < 0) throw std::runtime_error("triplet dump: negative dimensions");

  ConicProblem p;
  expect(in, "cones");
  const int nc = read_value<int>(in, "cone count");
  for (int k = 0; k < nc; ++k) {
    const auto tag = read_value<std::string>(in, "cone tag");
    const int size = read_value<int>(in, "cone size");
    if (tag == "F") p.cones.push_back({ConeKind::Free, size});
    else if (tag == "L") p.cones.push_back({ConeKind::Nonneg, size});
    else if (tag == "S") p.cones.push_back({ConeKind::Psd, size});
    else throw std::runtime_error("triplet dump: unknown cone tag '" + tag + "'");
  }

  auto check_index = [](long idx, int bound, const char* what) {
    if (idx < 1 || idx > bound) throw std::runtime_error(std::string("triplet dump: ") + what + " index out of range");
    return static_cast<int>(idx - 1);
  };

  p.c = Eigen::VectorXd::Zero(n);
  expect(in, "c");
  const long nc_nz = read_value<long>(in, "c count");
  for (long t = 0; t < nc_nz; ++t) {
    const int j = check_index(read_value<long>(in, "c index"), n, "c");
    p.c(j) = read_value<double>(in, "c value");
  }

  expect(in, "A");
  const long nnz = read_value<long>(in, "A count");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nnz));
  for (long t = 0; t < nnz; ++t) {
    const int i = check_index(read_value<long>(in, "A row"), m, "A row");
    const int j = check_index(read_value<long>(in, "A column"), n, "A column");
    trip.emplace_back(i, j, read_value<double>(in, "A value"));
  }
  p.A.resize(m, n);
  p.A.setFromTriplets(trip.begin(), trip.end());

  p.b = Eigen::VectorXd::Zero(m);
  expect(in, "b");
  const long nb = read_value<long>(in, "b count");
  for (long t = 0; t < nb; ++t) {
    const int i = check_index(read_value<long>(in, "b index"), m, "b");
    p.b(i) = read_value<double>(in, "b value");
  }
  p.check();
  return p;
}

}  // namespace roacert::sdp
