#include "gbm_cutoff/json_io.hpp"

#include "gbm_cutoff/error.hpp"

namespace gbm {

namespace {

double number_at(const Json& j, const std::string& field) {
  if (!j.is_number()) fail("bad_matrix", field + ": expected a number");
  return j.get<double>();
}

template <class T>
void put(Json& out, const char* key, const std::optional<T>& v) {
  out[key] = v ? Json(*v) : Json(nullptr);
}

Json complex_vector(const CVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

}  // namespace

MatrixD matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail("bad_matrix", field + ": expected a non-empty array of rows");
  const auto d = j.size();
  Eigen::MatrixXd m(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    const Json& row = j[r];
    if (!row.is_array()) fail("bad_matrix", field + ": expected an array of rows");
    if (row.size() != d) fail("not_square", field + ": matrix is not square");
    for (std::size_t c = 0; c < d; ++c) m(r, c) = number_at(row[c], field);
  }
  return MatrixD(std::move(m));
}

Vec vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail("bad_vector", field + ": expected a non-empty array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail("bad_vector", field + ": expected numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json to_json(const MatrixD& m) { return m.rows(); }

Json to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Json to_json(const HypothesisReport& r) {
  return Json{{"normal_B", r.normal_B},
              {"commutative", r.commutative},
              {"normal_C", r.normal_C},
              {"first_order", r.first_order},
              {"residuals", r.residuals},
              {"thresholds", r.thresholds},
              {"nilpotence_witness", r.nilpotence_witness},
              {"c_nilpotent", r.c_nilpotent},
              {"hypothesis_set_infeasible", r.hypothesis_set_infeasible},
              {"tol", r.tol}};
}

Json to_json(const SpectralAsymptotics& s) {
  Json vs = Json::array();
  for (const auto& v : s.vs) vs.push_back(complex_vector(v));
  return Json{{"q", s.q},         {"ell", s.ell}, {"m", s.m}, {"thetas", s.thetas},
              {"vs", vs},         {"K0", s.K0},   {"K1", s.K1}};
}

Json to_json(const CutoffSchedule& s) {
  Json out{{"regime", std::string(to_string(s.regime))}, {"eps", s.eps}};
  put(out, "q", s.q);
  put(out, "ell", s.ell);
  put(out, "gamma", s.gamma);
  put(out, "b", s.b);
  put(out, "a", s.a);
  put(out, "ell_star", s.ell_star);
  put(out, "selected_mode", s.selected_mode);
  put(out, "t_eps", s.t_eps);
  put(out, "w_eps", s.w_eps);
  put(out, "r_eps", s.r_eps);
  put(out, "T_eps", s.T_eps);
  put(out, "tau_eps", s.tau_eps);
  if (!s.diagnostic.empty()) out["diagnostic"] = s.diagnostic;
  return out;
}

Json to_json(const ModeDecomposition& d) {
  Json modes = Json::array();
  for (std::size_t j = 0; j < d.a_coeffs.size(); ++j) {
    const Vec v = d.basis.col(static_cast<Eigen::Index>(j));
    modes.push_back({{"v", to_json(v)},
                     {"a", d.a_coeffs[j]},
                     {"b", d.b_coeffs[j]},
                     {"gamma", d.g_coeffs[j]},
                     {"lambda", d.lambda[j]},
                     {"ell", d.ell[j]},
                     {"overlap", d.overlaps[j]}});
  }
  return Json{{"p_Gamma", d.matrices.p_Gamma},
              {"synthetic", d.matrices.synthetic},
              {"alpha", to_json(d.matrices.alpha)},
              {"beta", to_json(d.matrices.beta)},
              {"Gamma", to_json(d.matrices.Gamma)},
              {"A_tilde", to_json(d.matrices.A_tilde)},
              {"modes", modes}};
}

Json to_json(const MCEstimate& e) {
  return Json{{"value", e.value},
              {"std_error", e.std_error},
              {"n_paths", e.n_paths},
              {"seed", e.seed},
              {"scheme", std::string(to_string(e.scheme))}};
}

Json to_json(const MixingTimeResult& r) {
  Json out{{"eps", r.eps},     {"delta", r.delta},           {"tau", r.tau},
           {"t_ref", r.t_ref}, {"bracket_width", r.bracket_width}};
  put(out, "tau_over_t_eps", r.tau_over_t_ref);
  put(out, "tau_ratio", r.tau_ratio);
  return out;
}

}  // namespace gbm
