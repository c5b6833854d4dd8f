#pragma once

#include <nlohmann/json.hpp>

#include "het/eval.hpp"
#include "het/tracker.hpp"

namespace het {

// Versioned projection blob so a tracking run can be replayed bit-exactly.
nlohmann::json projection_to_json(const SparseProjection& proj);
SparseProjection projection_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const TrackerConfig& config);
TrackerConfig config_from_json(const nlohmann::json& j);

// Full tracker snapshot: config, projection, classifier banks, Kalman
// state, RNG stream. Restoring resumes the track exactly.
nlohmann::json tracker_to_json(const Tracker& tracker);
Tracker tracker_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const MetricReport& report);

// One diagnostics line per frame (votes, weights, Kalman state, update
// selection), for the --diag JSON-lines stream.
nlohmann::json output_to_json(const TrackOutput& out);

}  // namespace het
