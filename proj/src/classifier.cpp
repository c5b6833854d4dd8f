#include "het/classifier.hpp"

#include <string>

#include "het/errors.hpp"

namespace het {

void WeakClassifier::set(double mu_pos, double sigma_pos, double mu_neg, double sigma_neg) {
  mu_pos_ = mu_pos;
  mu_neg_ = mu_neg;
  sigma_pos_ = sigma_pos < kSigmaFloor ? kSigmaFloor : sigma_pos;
  sigma_neg_ = sigma_neg < kSigmaFloor ? kSigmaFloor : sigma_neg;
  log_sigma_ratio_ = std::log(sigma_neg_ / sigma_pos_);
  inv_two_var_pos_ = 1.0 / (2.0 * sigma_pos_ * sigma_pos_);
  inv_two_var_neg_ = 1.0 / (2.0 * sigma_neg_ * sigma_neg_);
}

double weak_score(const WeakClassifier& wc, double l) { return wc.score(l); }

double strong_score(const PatchClassifier& pc, std::span<const double> feature) {
  if (feature.size() != pc.weak.size()) {
    throw ContractError("feature length " + std::to_string(feature.size()) +
                        " does not match classifier bank size " + std::to_string(pc.weak.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < pc.weak.size(); ++i) {
    acc += pc.weak[i].score(feature[i]);
  }
  return acc;
}

MatchResult match_patch(const PatchClassifier& pc, const CompiledProjection& proj,
                        const IntegralImage& ii, Point search_center, double beta, int stride) {
  if (stride < 1) throw ContractError("stride must be >= 1");
  if (beta <= 0.0) throw ContractError("beta must be > 0");

  const int max_off = static_cast<int>(beta);  // norm < beta, so |dx| <= floor(beta)
  const int m = proj.feature_count();
  CompressedFeature scratch(m), best(m);
  const std::int64_t* padded = ii.padded_data();
  const int table_stride = ii.padded_stride();
  const double beta_sq = beta * beta;

  bool found = false;
  double best_score = 0.0;
  Point best_origin;

  for (int dy = -max_off; dy <= max_off; dy += stride) {
    const int oy = search_center.y + dy;
    if (oy < 0 || oy + proj.patch_h() > ii.height()) continue;
    for (int dx = -max_off; dx <= max_off; dx += stride) {
      if (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy >= beta_sq) continue;
      const int ox = search_center.x + dx;
      if (ox < 0 || ox + proj.patch_w() > ii.width()) continue;

      const std::size_t base = static_cast<std::size_t>(oy) * table_stride + ox;
      proj.compress_into(padded, base, scratch);
      const double s = strong_score(pc, scratch);
      if (!found || s > best_score) {
        found = true;
        best_score = s;
        best_origin = Point{ox, oy};
        std::swap(best, scratch);
      }
    }
  }
  if (!found) {
    throw SearchDomainError("no in-bounds candidate within beta of (" +
                            std::to_string(search_center.x) + "," +
                            std::to_string(search_center.y) + ")");
  }
  return MatchResult{best_origin, std::move(best), best_score};
}

MatchResult match_patch(const PatchClassifier& pc, const SparseProjection& proj,
                        const IntegralImage& ii, Point search_center, double beta, int stride) {
  return match_patch(pc, CompiledProjection(proj, ii.padded_stride()), ii, search_center, beta,
                     stride);
}

GaussianParams blend_gaussian(GaussianParams old_params, GaussianParams sample_stats,
                              double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ContractError("blend rate must be in [0, 1]");
  const double mu = rate * old_params.mu + (1.0 - rate) * sample_stats.mu;
  const double dmu = old_params.mu - sample_stats.mu;
  const double var = rate * old_params.sigma * old_params.sigma +
                     (1.0 - rate) * sample_stats.sigma * sample_stats.sigma +
                     rate * (1.0 - rate) * dmu * dmu;
  return GaussianParams{mu, std::sqrt(var)};
}

}  // namespace het
