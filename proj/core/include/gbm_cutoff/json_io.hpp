#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "gbm_cutoff/hypotheses.hpp"
#include "gbm_cutoff/mixing.hpp"
#include "gbm_cutoff/noncommutative.hpp"
#include "gbm_cutoff/schedule.hpp"
#include "gbm_cutoff/simulate.hpp"
#include "gbm_cutoff/spectral.hpp"

namespace gbm {

using Json = nlohmann::json;

// Matrices are arrays of rows. Malformed input raises "bad_matrix" (or
// "not_square") with the field name in the message.
MatrixD matrix_from_json(const Json& j, const std::string& field);
Vec vector_from_json(const Json& j, const std::string& field);

Json to_json(const MatrixD& m);
Json to_json(const Vec& v);
Json to_json(const HypothesisReport& r);
Json to_json(const SpectralAsymptotics& s);
Json to_json(const CutoffSchedule& s);
Json to_json(const ModeDecomposition& d);
Json to_json(const MCEstimate& e);
Json to_json(const MixingTimeResult& r);

}  // namespace gbm
