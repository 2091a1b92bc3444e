#include "gbm_cutoff/hypotheses.hpp"

#include <algorithm>
#include <cmath>

#include "gbm_cutoff/error.hpp"

namespace gbm {

std::vector<double> nilpotence_diagnostic(const GBMSystem& sys) {
  const Eigen::MatrixXd c = commutator(sys.A, sys.B).mat();
  std::vector<double> traces;
  Eigen::MatrixXd power = c;
  for (Eigen::Index k = 1; k <= sys.dim(); ++k) {
    traces.push_back(power.trace());
    power = power * c;
  }
  return traces;
}

HypothesisReport check_hypotheses(const GBMSystem& sys) {
  const MatrixD& a = sys.A;
  const MatrixD& b = sys.B;
  const MatrixD bs = b.adjoint();
  const MatrixD c = commutator(a, b);
  const MatrixD cs = c.adjoint();
  const double sa = 1.0 + a.norm();
  const double sb = 1.0 + b.norm();
  const double tol = sys.tol;

  HypothesisReport r;
  r.tol = tol;
  auto record = [&](const std::string& name, const MatrixD& m, double scale) {
    r.residuals[name] = m.norm();
    r.thresholds[name] = tol * scale;
    return r.residuals[name] <= r.thresholds[name];
  };

  r.normal_B = record("[B,B*]", commutator(b, bs), sb * sb);
  const bool ab = record("[A,B]", c, sa * sb);
  const bool abs = record("[A,B*]", commutator(a, bs), sa * sb);
  r.commutative = ab && abs;
  r.normal_C = record("[C,C*]", commutator(c, cs), sa * sa * sb * sb);
  const bool ac = record("[A,C]", commutator(a, c), sa * sa * sb);
  const bool acs = record("[A,C*]", commutator(a, cs), sa * sa * sb);
  const bool bc = record("[B,C]", commutator(b, c), sa * sb * sb);
  const bool bcs = record("[B,C*]", commutator(b, cs), sa * sb * sb);

  const bool c_nonzero = r.residuals["[A,B]"] > 10.0 * r.thresholds["[A,B]"];
  const bool abs_nonzero = r.residuals["[A,B*]"] > 10.0 * r.thresholds["[A,B*]"];
  r.first_order = c_nonzero && abs_nonzero && ac && acs && bc && bcs;

  r.nilpotence_witness = nilpotence_diagnostic(sys);
  const double d = static_cast<double>(sys.dim());
  const double trace_bound = d * tol * std::pow(1.0 + c.norm(), d);
  r.c_nilpotent = std::all_of(r.nilpotence_witness.begin(), r.nilpotence_witness.end(),
                              [&](double tr) { return std::abs(tr) <= trace_bound; });
  r.hypothesis_set_infeasible = ac && r.c_nilpotent && c_nonzero;
  return r;
}

}  // namespace gbm
