#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "roacert/roa.hpp"

namespace roacert {

using nlohmann::json;

namespace {

json terms_to_json(const Polynomial& p) {
  json arr = json::array();
  for (const auto& [e, c] : p.terms()) arr.push_back(json::array({e, c}));
  return arr;
}

Polynomial terms_from_json(const json& j, int nvars) {
  Polynomial p(nvars);
  for (const auto& t : j) {
    Exponents e = t.at(0).get<Exponents>();
    if (static_cast<int>(e.size()) != nvars) throw std::runtime_error("certificate: exponent length mismatch");
    p.add_term(e, t.at(1).get<double>());
  }
  return p;
}

json vec_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vec_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mat_to_json(const Eigen::MatrixXd& A) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) rows.push_back(vec_to_json(A.row(i).transpose()));
  return rows;
}

Eigen::MatrixXd mat_from_json(const json& j) {
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd r = vec_from_json(j.at(i));
    if (r.size() != n) throw std::runtime_error("certificate: A must be square");
    A.row(i) = r.transpose();
  }
  return A;
}

std::vector<std::string> with_front(const std::string& first, const std::vector<std::string>& rest) {
  std::vector<std::string> out{first};
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace

std::string certificate_to_json(const Certificate& c) {
  const int n = c.sys.n();
  const auto scaled_names = default_names(n, "y");
  std::vector<std::string> f_names = c.sys.names;
  if (c.sys.time_varying) f_names.push_back("t");

  json sys;
  sys["names"] = c.sys.names;
  sys["time_varying"] = c.sys.time_varying;
  sys["x_star"] = vec_to_json(c.sys.x_star);
  sys["delta_x"] = vec_to_json(c.sys.delta_x);
  sys["angle_pairs"] = c.sys.angle_pairs;
  json f_text = json::array(), f_terms = json::array();
  for (const auto& fi : c.sys.f) {
    f_text.push_back(to_string(fi, f_names));
    f_terms.push_back(terms_to_json(fi));
  }
  sys["f"] = f_text;
  sys["f_terms"] = f_terms;

  json j;
  j["format"] = "roacert-certificate";
  j["version"] = c.version;
  j["mode"] = to_string(c.mode);
  j["d"] = c.d;
  j["T"] = c.query.T;
  j["eps"] = c.query.eps;
  j["A"] = mat_to_json(c.query.A.size() ? c.query.A : Eigen::MatrixXd::Identity(n, n));
  j["lambda_scaled"] = c.lambda_scaled;
  j["lambda_original"] = c.lambda_original;
  j["unreliable"] = c.unreliable;
  j["system"] = sys;
  j["v_terms"] = {{"scaled", to_string(c.v_scaled, with_front("s", scaled_names))},
                  {"original", to_string(c.v, with_front("t", c.sys.names))}};
  j["w_terms"] = {{"scaled", to_string(c.w_scaled, scaled_names)}, {"original", to_string(c.w, c.sys.names)}};
  j["v_coefficients"] = {{"scaled", terms_to_json(c.v_scaled)}, {"original", terms_to_json(c.v)}};
  j["w_coefficients"] = {{"scaled", terms_to_json(c.w_scaled)}, {"original", terms_to_json(c.w)}};
  j["solver"] = {{"status", c.stats.status},     {"iterations", c.stats.iterations},
                 {"prim_res", c.stats.prim_res}, {"dual_res", c.stats.dual_res},
                 {"gap", c.stats.gap},           {"rows", c.stats.rows},
                 {"cols", c.stats.cols},         {"largest_block", c.stats.largest_block},
                 {"memberships", c.stats.memberships}};
  json res = json::array();
  for (const auto& [label, r] : c.membership_residuals) res.push_back({{"membership", label}, {"residual", r}});
  j["membership_residuals"] = res;
  return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("certificate: invalid JSON: ") + e.what());
  }
  if (j.value("format", "") != "roacert-certificate") throw std::runtime_error("certificate: unrecognized format");
  try {
    Certificate c;
    const json& s = j.at("system");
    c.sys.names = s.at("names").get<std::vector<std::string>>();
    c.sys.time_varying = s.at("time_varying").get<bool>();
    c.sys.x_star = vec_from_json(s.at("x_star"));
    c.sys.delta_x = vec_from_json(s.at("delta_x"));
    c.sys.angle_pairs = s.at("angle_pairs").get<std::vector<std::pair<int, int>>>();
    const int n = static_cast<int>(c.sys.names.size());
    const int fring = n + (c.sys.time_varying ? 1 : 0);
    for (const auto& ft : s.at("f_terms")) c.sys.f.push_back(terms_from_json(ft, fring));

    c.version = j.at("version").get<std::string>();
    c.mode = mode_from_string(j.at("mode").get<std::string>());
    c.d = j.at("d").get<int>();
    c.query.d = c.d;
    c.query.T = j.at("T").get<double>();
    c.query.eps = j.at("eps").get<double>();
    c.query.A = mat_from_json(j.at("A"));
    c.lambda_scaled = j.at("lambda_scaled").get<double>();
    c.lambda_original = j.at("lambda_original").get<double>();
    c.unreliable = j.at("unreliable").get<bool>();
    c.v_scaled = terms_from_json(j.at("v_coefficients").at("scaled"), n + 1);
    c.v = terms_from_json(j.at("v_coefficients").at("original"), n + 1);
    c.w_scaled = terms_from_json(j.at("w_coefficients").at("scaled"), n);
    c.w = terms_from_json(j.at("w_coefficients").at("original"), n);
    const json& st = j.at("solver");
    c.stats.status = st.at("status").get<std::string>();
    c.stats.iterations = st.at("iterations").get<int>();
    c.stats.prim_res = st.at("prim_res").get<double>();
    c.stats.dual_res = st.at("dual_res").get<double>();
    c.stats.gap = st.at("gap").get<double>();
    c.stats.rows = st.at("rows").get<int>();
    c.stats.cols = st.at("cols").get<int>();
    c.stats.largest_block = st.at("largest_block").get<int>();
    c.stats.memberships = st.at("memberships").get<int>();
    for (const auto& r : j.at("membership_residuals")) {
      c.membership_residuals.emplace_back(r.at("membership").get<std::string>(), r.at("residual").get<double>());
    }
    return c;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("certificate: ") + e.what());
  }
}

void save_certificate(const Certificate& cert, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write certificate '" + path + "'");
  out << certificate_to_json(cert);
  if (!out) throw std::runtime_error("failed writing certificate '" + path + "'");
}

Certificate load_certificate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read certificate '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return certificate_from_json(ss.str());
}

}  // namespace roacert
