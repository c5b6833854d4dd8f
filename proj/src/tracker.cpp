#include "het/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "het/errors.hpp"

namespace het {

namespace {

constexpr int kSampleAttemptFactor = 200;

struct FeatureStats {
  std::vector<double> mu;
  std::vector<double> sigma;
};

FeatureStats feature_stats(const CompiledProjection& proj, const IntegralImage& ii,
                           std::span<const Point> positions) {
  const int m = proj.feature_count();
  std::vector<double> sum(m, 0.0), sum_sq(m, 0.0);
  CompressedFeature feat(m);
  const std::int64_t* padded = ii.padded_data();
  const int stride = ii.padded_stride();
  for (const Point& p : positions) {
    const std::size_t base = static_cast<std::size_t>(p.y) * stride + p.x;
    proj.compress_into(padded, base, feat);
    for (int i = 0; i < m; ++i) {
      sum[i] += feat[i];
      sum_sq[i] += feat[i] * feat[i];
    }
  }
  const double n = static_cast<double>(positions.size());
  FeatureStats stats;
  stats.mu.resize(m);
  stats.sigma.resize(m);
  for (int i = 0; i < m; ++i) {
    const double mu = sum[i] / n;
    const double var = std::max(0.0, sum_sq[i] / n - mu * mu);
    stats.mu[i] = mu;
    stats.sigma[i] = std::sqrt(var);
  }
  return stats;
}

int round_to_int(double v) { return static_cast<int>(std::lround(v)); }

}  // namespace

void TrackerConfig::validate() const {
  if (m < 1) throw ConfigError("m must be >= 1");
  if (q_patches < 11) throw ConfigError("q_patches must be >= 11 so that W >= 1");
  if (z_max < 2) throw ConfigError("z_max must be >= 2");
  if (!(learning_rate > 0.0 && learning_rate < 1.0)) {
    throw ConfigError("learning_rate must lie in (0, 1)");
  }
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (!(pi > beta)) throw ConfigError("pi must exceed beta");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (n_update < 2) throw ConfigError("n_update must be >= 2");
  if (!(patch_scale > 0.0 && patch_scale <= 1.0)) {
    throw ConfigError("patch_scale must lie in (0, 1]");
  }
  if (!(kalman.p0 > 0.0 && kalman.q_pos > 0.0 && kalman.q_vel > 0.0 && kalman.r_pos > 0.0)) {
    throw ConfigError("Kalman covariance bases must be positive");
  }
}

Tracker::Tracker(const Frame& first_frame, Box init_box, const TrackerConfig& config)
    : cfg_(config),
      frame_w_(first_frame.width()),
      frame_h_(first_frame.height()),
      kalman_(box_center(init_box), config.kalman),
      rng_(config.seed) {
  cfg_.validate();
  if (init_box.w < 1 || init_box.h < 1 || init_box.x < 0 || init_box.y < 0 ||
      init_box.x + init_box.w > frame_w_ || init_box.y + init_box.h > frame_h_) {
    throw DimensionError("init box does not lie inside the frame");
  }
  target_w_ = init_box.w;
  target_h_ = init_box.h;
  const int patch_w = round_to_int(cfg_.patch_scale * target_w_);
  const int patch_h = round_to_int(cfg_.patch_scale * target_h_);
  if (patch_w < 2 || patch_h < 2) {
    throw DimensionError("init box too small to host sub-patches at this patch_scale");
  }

  proj_ = generate_projection(rng_.next_u64(), cfg_.m, cfg_.z_max, patch_w, patch_h);
  compiled_ = CompiledProjection(proj_, frame_w_ + 1);

  // Q patch positions uniform inside the target box; the layout is rigid
  // for the whole track.
  patches_.patch_w = patch_w;
  patches_.patch_h = patch_h;
  patches_.patches.resize(cfg_.q_patches);
  const Vec2 center = box_center(init_box);
  for (auto& patch : patches_.patches) {
    const int px = init_box.x + rng_.uniform_int(0, target_w_ - patch_w);
    const int py = init_box.y + rng_.uniform_int(0, target_h_ - patch_h);
    patch.location = Point{px, py};
    patch.rel_offset = center - Vec2{static_cast<double>(px), static_cast<double>(py)};
    patch.classifier = PatchClassifier(cfg_.m);
    patch.matched = true;
  }

  const IntegralImage ii(first_frame);
  train_initial_classifiers(ii);
  last_box_ = init_box;
  frame_index_ = 1;
}

std::vector<Point> Tracker::sample_around(Point base, double lo_exclusive, double hi,
                                          bool hi_inclusive, int count) {
  const int reach = static_cast<int>(std::ceil(hi));
  const int max_x = frame_w_ - patches_.patch_w;
  const int max_y = frame_h_ - patches_.patch_h;
  std::vector<Point> out;
  out.reserve(count);
  int attempts = count * kSampleAttemptFactor;
  while (static_cast<int>(out.size()) < count && attempts-- > 0) {
    const int dx = rng_.uniform_int(-reach, reach);
    const int dy = rng_.uniform_int(-reach, reach);
    const double d = std::hypot(static_cast<double>(dx), static_cast<double>(dy));
    if (d <= lo_exclusive) continue;
    if (hi_inclusive ? d > hi : d >= hi) continue;
    const int x = base.x + dx;
    const int y = base.y + dy;
    if (x < 0 || y < 0 || x > max_x || y > max_y) continue;
    out.push_back(Point{x, y});
  }
  return out;
}

// Positive samples live well inside the search radius: a patch shifted by
// anything near beta is mostly background, and classifiers trained on the
// whole disc lose the positional acuity the per-patch vote depends on.
double Tracker::positive_radius() const { return std::max(2.0, cfg_.beta / 5.0); }

void Tracker::train_initial_classifiers(const IntegralImage& ii) {
  for (auto& patch : patches_.patches) {
    const auto positives =
        sample_around(patch.location, -1.0, positive_radius(), false, cfg_.n_update);
    const auto negatives =
        sample_around(patch.location, cfg_.pi, cfg_.pi + cfg_.beta, true, cfg_.n_update);
    if (positives.size() < 2 || negatives.size() < 2) {
      throw DimensionError("frame too small to draw training samples around a sub-patch");
    }
    const FeatureStats pos = feature_stats(compiled_, ii, positives);
    const FeatureStats neg = feature_stats(compiled_, ii, negatives);
    for (int i = 0; i < cfg_.m; ++i) {
      patch.classifier.weak[i].set(pos.mu[i], pos.sigma[i], neg.mu[i], neg.sigma[i]);
    }
  }
}

TrackOutput Tracker::step(const Frame& frame) {
  if (frame.width() != frame_w_ || frame.height() != frame_h_) {
    throw DimensionError("frame dimensions changed mid-track");
  }
  ++frame_index_;
  const IntegralImage ii(frame);

  Point search_offset{0, 0};
  if (cfg_.predictive_search) {
    const Vec2 v = kalman_.velocity();
    search_offset = Point{round_to_int(v.x), round_to_int(v.y)};
  }

  // Bottom layer: match every patch within beta of its previous location.
  const int q = patches_.count();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < q; ++i) {
    auto& patch = patches_.patches[i];
    const Point center{patch.location.x + search_offset.x, patch.location.y + search_offset.y};
    try {
      MatchResult match = match_patch(patch.classifier, compiled_, ii, center, cfg_.beta,
                                      cfg_.stride);
      patch.location = match.best_origin;
      patch.score = match.score;
      patch.matched = true;
    } catch (const SearchDomainError&) {
      patch.matched = false;
    }
  }

  std::vector<double> matched_scores;
  matched_scores.reserve(q);
  for (const auto& patch : patches_.patches) {
    if (patch.matched) matched_scores.push_back(patch.score);
  }
  if (matched_scores.size() < 2) {
    throw TrackLostError("target left the frame: " + std::to_string(matched_scores.size()) +
                         " sub-patch searches in bounds");
  }

  // Middle layer: scores -> weights -> weighted vote.
  const std::vector<double> weights = normalize_weights(matched_scores);
  {
    std::size_t wi = 0;
    for (auto& patch : patches_.patches) {
      patch.weight = patch.matched ? weights[wi++] : 0.0;
    }
  }
  Measurement measurement = combine_votes(patches_, weights);
  measurement.confidence = level_confidence(matched_scores);

  // Top layer: confidence-adapted covariances, then the standard cycle.
  kalman_.adapt_noise(measurement.confidence);
  kalman_.predict(1.0);
  kalman_.correct(measurement.center);

  const Vec2 posterior = kalman_.position();
  Box box{round_to_int(posterior.x - 0.5 * target_w_), round_to_int(posterior.y - 0.5 * target_h_),
          target_w_, target_h_};
  box.x = std::clamp(box.x, 0, frame_w_ - target_w_);
  box.y = std::clamp(box.y, 0, frame_h_ - target_h_);
  last_box_ = box;

  TrackOutput out;
  out.frame_index = frame_index_;
  out.box = box;
  out.measurement = measurement;
  out.kalman_position = posterior;
  out.kalman_velocity = kalman_.velocity();
  out.patches.resize(q);
  for (int i = 0; i < q; ++i) {
    const auto& patch = patches_.patches[i];
    out.patches[i] =
        PatchDiag{patch.location, patch.score, patch.weight, patch.matched, false, 0.0};
  }

  model_update(ii, box_center(box), out.patches);
  return out;
}

void Tracker::model_update(const IntegralImage& ii, Vec2 final_center,
                           std::vector<PatchDiag>& diag) {
  const int q = patches_.count();
  const int max_x = frame_w_ - patches_.patch_w;
  const int max_y = frame_h_ - patches_.patch_h;

  // Relocate every patch; the rigid layout corrects detection drift.
  std::vector<double> fresh_scores(q, 0.0);
  std::vector<bool> scorable(q, false);
  CompressedFeature feat(cfg_.m);
  for (int i = 0; i < q; ++i) {
    auto& patch = patches_.patches[i];
    const Point pos{round_to_int(final_center.x - patch.rel_offset.x),
                    round_to_int(final_center.y - patch.rel_offset.y)};
    patch.location = pos;
    if (pos.x < 0 || pos.y < 0 || pos.x > max_x || pos.y > max_y) continue;

    const std::size_t base =
        static_cast<std::size_t>(pos.y) * ii.padded_stride() + pos.x;
    compiled_.compress_into(ii.padded_data(), base, feat);
    fresh_scores[i] = strong_score(patches_.patches[i].classifier, feat);
    scorable[i] = true;
    diag[i].update_score = fresh_scores[i];
  }

  std::vector<double> pool;
  std::vector<int> pool_index;
  for (int i = 0; i < q; ++i) {
    if (scorable[i]) {
      pool.push_back(fresh_scores[i]);
      pool_index.push_back(i);
    }
  }
  if (pool.empty()) return;

  for (int k : select_for_update(pool)) {
    const int i = pool_index[k];
    auto& patch = patches_.patches[i];
    const auto positives =
        sample_around(patch.location, -1.0, positive_radius(), false, cfg_.n_update);
    const auto negatives =
        sample_around(patch.location, cfg_.pi, cfg_.pi + cfg_.beta, true, cfg_.n_update);
    if (positives.size() < 2 || negatives.size() < 2) continue;
    const FeatureStats pos = feature_stats(compiled_, ii, positives);
    const FeatureStats neg = feature_stats(compiled_, ii, negatives);
    for (int f = 0; f < cfg_.m; ++f) {
      auto& wc = patch.classifier.weak[f];
      const GaussianParams new_pos = blend_gaussian({wc.mu_pos(), wc.sigma_pos()},
                                                    {pos.mu[f], pos.sigma[f]}, cfg_.learning_rate);
      const GaussianParams new_neg = blend_gaussian({wc.mu_neg(), wc.sigma_neg()},
                                                    {neg.mu[f], neg.sigma[f]}, cfg_.learning_rate);
      wc.set(new_pos.mu, new_pos.sigma, new_neg.mu, new_neg.sigma);
    }
    diag[i].updated = true;
  }
}

// Mean of per-patch weights normalized against the track's running score
// statistics, saturated into [0.1, 0.9]. Unlike the per-frame vote weights
// (which are relative by construction), this carries absolute match
// quality: when every sub-patch mismatches at once the confidence floors
// at 0.1 and the filter coasts on its motion model. The running statistics
// blend with the model-update rate, so sustained appearance change is
// absorbed rather than treated as permanent failure.
double Tracker::level_confidence(std::span<const double> matched_scores) {
  double mean = 0.0;
  for (double s : matched_scores) mean += s;
  mean /= static_cast<double>(matched_scores.size());
  double var = 0.0;
  for (double s : matched_scores) var += (s - mean) * (s - mean);
  var /= static_cast<double>(matched_scores.size());
  const double stddev = std::sqrt(var);

  double confidence = 0.5;
  if (score_stats_ready_) {
    const double scale = std::max(2.0 * score_sigma_, 1e-6 * std::max(1.0, std::abs(score_mean_)));
    double acc = 0.0;
    for (double s : matched_scores) {
      acc += std::clamp(0.5 + 0.4 * (s - score_mean_) / scale, 0.1, 0.9);
    }
    // the mean of clamped terms can land one ulp outside the interval
    confidence = std::clamp(acc / static_cast<double>(matched_scores.size()), 0.1, 0.9);
  }

  if (!score_stats_ready_) {
    score_mean_ = mean;
    score_sigma_ = stddev;
    score_stats_ready_ = true;
  } else {
    const GaussianParams blended =
        blend_gaussian({score_mean_, score_sigma_}, {mean, stddev}, cfg_.learning_rate);
    score_mean_ = blended.mu;
    score_sigma_ = blended.sigma;
  }
  return confidence;
}

std::vector<int> select_for_update(std::span<const double> scores) {
  const std::size_t n = scores.size();
  std::vector<int> selected;
  if (n == 0) return selected;
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  var /= static_cast<double>(n);
  const double stddev = std::sqrt(var);
  for (std::size_t i = 0; i < n; ++i) {
    if (scores[i] > mean - stddev && scores[i] < mean + stddev) {
      selected.push_back(static_cast<int>(i));
    }
  }
  return selected;
}

TrackerState Tracker::state() const {
  TrackerState s;
  s.config = cfg_;
  s.frame_w = frame_w_;
  s.frame_h = frame_h_;
  s.target_w = target_w_;
  s.target_h = target_h_;
  s.frame_index = frame_index_;
  s.last_box = last_box_;
  s.projection = proj_;
  s.patches = patches_;
  s.kalman_x = kalman_.state();
  s.kalman_p = kalman_.covariance();
  s.kalman_q_cur = kalman_.process_noise();
  s.kalman_r_cur = kalman_.measurement_noise();
  s.score_mean = score_mean_;
  s.score_sigma = score_sigma_;
  s.score_stats_ready = score_stats_ready_;
  std::ostringstream os;
  os << rng_.engine();
  s.rng_state = os.str();
  return s;
}

Tracker::Tracker(const TrackerState& s)
    : cfg_(s.config),
      frame_w_(s.frame_w),
      frame_h_(s.frame_h),
      target_w_(s.target_w),
      target_h_(s.target_h),
      proj_(s.projection),
      compiled_(s.projection, s.frame_w + 1),
      patches_(s.patches),
      kalman_(box_center(s.last_box), s.config.kalman),
      rng_(0),
      frame_index_(s.frame_index),
      last_box_(s.last_box) {
  kalman_.set_state(s.kalman_x, s.kalman_p);
  kalman_.set_noise(s.kalman_q_cur, s.kalman_r_cur);
  score_mean_ = s.score_mean;
  score_sigma_ = s.score_sigma;
  score_stats_ready_ = s.score_stats_ready;
  std::istringstream is(s.rng_state);
  is >> rng_.engine();
  if (!is) throw ParseError("bad RNG state in tracker snapshot");
}

}  // namespace het
