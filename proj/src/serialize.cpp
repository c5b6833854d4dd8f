#include "het/serialize.hpp"

#include "het/errors.hpp"

namespace het {

namespace {

constexpr int kProjectionSchemaVersion = 1;
constexpr int kTrackerSchemaVersion = 1;

nlohmann::json rect_to_json(const Rect& r) {
  return nlohmann::json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
}

Rect rect_from_json(const nlohmann::json& j) {
  return Rect{j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(),
              j.at("h").get<int>()};
}

nlohmann::json classifier_to_json(const PatchClassifier& pc) {
  nlohmann::json weak = nlohmann::json::array();
  for (const auto& wc : pc.weak) {
    weak.push_back({{"mu_pos", wc.mu_pos()},
                    {"sigma_pos", wc.sigma_pos()},
                    {"mu_neg", wc.mu_neg()},
                    {"sigma_neg", wc.sigma_neg()}});
  }
  return nlohmann::json{{"weak", std::move(weak)}};
}

PatchClassifier classifier_from_json(const nlohmann::json& j) {
  const auto& weak = j.at("weak");
  PatchClassifier pc(static_cast<int>(weak.size()));
  for (std::size_t i = 0; i < weak.size(); ++i) {
    pc.weak[i].set(weak[i].at("mu_pos").get<double>(), weak[i].at("sigma_pos").get<double>(),
                   weak[i].at("mu_neg").get<double>(), weak[i].at("sigma_neg").get<double>());
  }
  return pc;
}

template <typename Matrix>
nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Matrix>
Matrix matrix_from_json(const nlohmann::json& j) {
  Matrix m;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = j.at(r).at(c).get<double>();
    }
  }
  return m;
}

}  // namespace

nlohmann::json projection_to_json(const SparseProjection& proj) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : proj.rows) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : row.entries) {
      entries.push_back({{"rect", rect_to_json(e.rect)}, {"weight", e.weight}});
    }
    rows.push_back(std::move(entries));
  }
  return nlohmann::json{{"schema_version", kProjectionSchemaVersion},
                        {"patch_w", proj.patch_w},
                        {"patch_h", proj.patch_h},
                        {"seed", proj.seed},
                        {"z_max", proj.z_max},
                        {"rows", std::move(rows)}};
}

SparseProjection projection_from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != kProjectionSchemaVersion) {
    throw ParseError("unsupported projection schema version");
  }
  SparseProjection proj;
  proj.patch_w = j.at("patch_w").get<int>();
  proj.patch_h = j.at("patch_h").get<int>();
  proj.seed = j.at("seed").get<std::uint64_t>();
  proj.z_max = j.at("z_max").get<int>();
  for (const auto& row_json : j.at("rows")) {
    ProjectionRow row;
    for (const auto& e : row_json) {
      row.entries.push_back(
          ProjectionEntry{rect_from_json(e.at("rect")), e.at("weight").get<double>()});
    }
    proj.rows.push_back(std::move(row));
  }
  return proj;
}

nlohmann::json config_to_json(const TrackerConfig& c) {
  return nlohmann::json{{"m", c.m},
                        {"q_patches", c.q_patches},
                        {"z_max", c.z_max},
                        {"learning_rate", c.learning_rate},
                        {"beta", c.beta},
                        {"pi", c.pi},
                        {"stride", c.stride},
                        {"n_update", c.n_update},
                        {"patch_scale", c.patch_scale},
                        {"predictive_search", c.predictive_search},
                        {"seed", c.seed},
                        {"kalman",
                         {{"p0", c.kalman.p0},
                          {"q_pos", c.kalman.q_pos},
                          {"q_vel", c.kalman.q_vel},
                          {"r_pos", c.kalman.r_pos}}}};
}

TrackerConfig config_from_json(const nlohmann::json& j) {
  TrackerConfig c;
  c.m = j.at("m").get<int>();
  c.q_patches = j.at("q_patches").get<int>();
  c.z_max = j.at("z_max").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.beta = j.at("beta").get<double>();
  c.pi = j.at("pi").get<double>();
  c.stride = j.at("stride").get<int>();
  c.n_update = j.at("n_update").get<int>();
  c.patch_scale = j.at("patch_scale").get<double>();
  c.predictive_search = j.at("predictive_search").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto& k = j.at("kalman");
  c.kalman.p0 = k.at("p0").get<double>();
  c.kalman.q_pos = k.at("q_pos").get<double>();
  c.kalman.q_vel = k.at("q_vel").get<double>();
  c.kalman.r_pos = k.at("r_pos").get<double>();
  return c;
}

nlohmann::json tracker_to_json(const Tracker& tracker) {
  const TrackerState s = tracker.state();
  nlohmann::json patches = nlohmann::json::array();
  for (const auto& p : s.patches.patches) {
    patches.push_back({{"classifier", classifier_to_json(p.classifier)},
                       {"rel_offset", {p.rel_offset.x, p.rel_offset.y}},
                       {"location", {p.location.x, p.location.y}},
                       {"score", p.score},
                       {"weight", p.weight},
                       {"matched", p.matched}});
  }
  return nlohmann::json{
      {"schema_version", kTrackerSchemaVersion},
      {"config", config_to_json(s.config)},
      {"frame_w", s.frame_w},
      {"frame_h", s.frame_h},
      {"target_w", s.target_w},
      {"target_h", s.target_h},
      {"frame_index", s.frame_index},
      {"last_box", {s.last_box.x, s.last_box.y, s.last_box.w, s.last_box.h}},
      {"projection", projection_to_json(s.projection)},
      {"patch_w", s.patches.patch_w},
      {"patch_h", s.patches.patch_h},
      {"patches", std::move(patches)},
      {"kalman",
       {{"x", matrix_to_json(s.kalman_x)},
        {"p", matrix_to_json(s.kalman_p)},
        {"q_cur", matrix_to_json(s.kalman_q_cur)},
        {"r_cur", matrix_to_json(s.kalman_r_cur)}}},
      {"score_stats",
       {{"mean", s.score_mean}, {"sigma", s.score_sigma}, {"ready", s.score_stats_ready}}},
      {"rng_state", s.rng_state}};
}

Tracker tracker_from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != kTrackerSchemaVersion) {
    throw ParseError("unsupported tracker schema version");
  }
  TrackerState s;
  s.config = config_from_json(j.at("config"));
  s.frame_w = j.at("frame_w").get<int>();
  s.frame_h = j.at("frame_h").get<int>();
  s.target_w = j.at("target_w").get<int>();
  s.target_h = j.at("target_h").get<int>();
  s.frame_index = j.at("frame_index").get<int>();
  const auto& box = j.at("last_box");
  s.last_box = Box{box.at(0).get<int>(), box.at(1).get<int>(), box.at(2).get<int>(),
                   box.at(3).get<int>()};
  s.projection = projection_from_json(j.at("projection"));
  s.patches.patch_w = j.at("patch_w").get<int>();
  s.patches.patch_h = j.at("patch_h").get<int>();
  for (const auto& p : j.at("patches")) {
    SubPatch patch;
    patch.classifier = classifier_from_json(p.at("classifier"));
    patch.rel_offset = Vec2{p.at("rel_offset").at(0).get<double>(),
                            p.at("rel_offset").at(1).get<double>()};
    patch.location = Point{p.at("location").at(0).get<int>(), p.at("location").at(1).get<int>()};
    patch.score = p.at("score").get<double>();
    patch.weight = p.at("weight").get<double>();
    patch.matched = p.at("matched").get<bool>();
    s.patches.patches.push_back(std::move(patch));
  }
  const auto& k = j.at("kalman");
  s.kalman_x = matrix_from_json<Eigen::Vector4d>(k.at("x"));
  s.kalman_p = matrix_from_json<Eigen::Matrix4d>(k.at("p"));
  s.kalman_q_cur = matrix_from_json<Eigen::Matrix4d>(k.at("q_cur"));
  s.kalman_r_cur = matrix_from_json<Eigen::Matrix2d>(k.at("r_cur"));
  const auto& stats = j.at("score_stats");
  s.score_mean = stats.at("mean").get<double>();
  s.score_sigma = stats.at("sigma").get<double>();
  s.score_stats_ready = stats.at("ready").get<bool>();
  s.rng_state = j.at("rng_state").get<std::string>();
  return Tracker(s);
}

nlohmann::json report_to_json(const MetricReport& report) {
  return nlohmann::json{{"center_errors", report.center_errors},
                        {"overlaps", report.overlaps},
                        {"precision_curve", report.precision_curve},
                        {"success_curve", report.success_curve},
                        {"success_auc", report.success_auc},
                        {"precision_at_20", report.precision_at_20}};
}

nlohmann::json output_to_json(const TrackOutput& out) {
  nlohmann::json votes = nlohmann::json::array();
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json selected = nlohmann::json::array();
  for (std::size_t i = 0; i < out.patches.size(); ++i) {
    const auto& p = out.patches[i];
    votes.push_back({{"location", {p.location.x, p.location.y}},
                     {"score", p.score},
                     {"matched", p.matched},
                     {"update_score", p.update_score}});
    weights.push_back(p.weight);
    if (p.updated) selected.push_back(i);
  }
  return nlohmann::json{
      {"frame", out.frame_index},
      {"box", {out.box.x, out.box.y, out.box.w, out.box.h}},
      {"measurement",
       {{"center", {out.measurement.center.x, out.measurement.center.y}},
        {"confidence", out.measurement.confidence}}},
      {"kalman",
       {{"position", {out.kalman_position.x, out.kalman_position.y}},
        {"velocity", {out.kalman_velocity.x, out.kalman_velocity.y}}}},
      {"votes", std::move(votes)},
      {"weights", std::move(weights)},
      {"selected_updates", std::move(selected)}};
}

}  // namespace het
