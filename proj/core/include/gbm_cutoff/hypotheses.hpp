#pragma once

#include <map>
#include <string>
#include <vector>

#include "gbm_cutoff/system.hpp"

namespace gbm {

// Which coefficient hypotheses a pair (A, B) satisfies. C = [A, B] here.
// Each residual is a Frobenius norm; the matching threshold is
// tol * (1 + |A|)^i (1 + |B|)^j with (i, j) the bracket's degree in A and B.
struct HypothesisReport {
  bool normal_B = false;     // [B, B*] = O
  bool commutative = false;  // [A, B] = [A, B*] = O
  bool normal_C = false;     // [C, C*] = O
  bool first_order = false;  // C != O, [A, B*] != O, [A|B, C|C*] = O
  std::map<std::string, double> residuals;
  std::map<std::string, double> thresholds;
  std::vector<double> nilpotence_witness;  // trace(C^k), k = 1..d
  bool c_nilpotent = false;
  // [A, C] = O forces C nilpotent, and a nilpotent normal C is O, so the
  // first-order hypothesis set cannot hold with C != O.
  bool hypothesis_set_infeasible = false;
  double tol = kDefaultTol;
};

HypothesisReport check_hypotheses(const GBMSystem& sys);

// trace(C^k) for C = [A, B], k = 1..d.
std::vector<double> nilpotence_diagnostic(const GBMSystem& sys);

}  // namespace gbm
