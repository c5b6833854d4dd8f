#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "het/projection.hpp"

namespace het {

// Stddevs below this are floored on every assignment; a feature that is
// constant over samples must not produce degenerate log-densities.
inline constexpr double kSigmaFloor = 1.0;

// Gaussian naive-Bayes weak classifier for one compressed feature:
// log N(l; mu_pos, sigma_pos) - log N(l; mu_neg, sigma_neg), equal priors.
// The log-sigma and inverse-variance terms are cached; they change only
// when the parameters do, and score() runs ~2M times per frame.
class WeakClassifier {
 public:
  WeakClassifier() { set(0.0, 1.0, 0.0, 1.0); }
  WeakClassifier(double mu_pos, double sigma_pos, double mu_neg, double sigma_neg) {
    set(mu_pos, sigma_pos, mu_neg, sigma_neg);
  }

  void set(double mu_pos, double sigma_pos, double mu_neg, double sigma_neg);

  double mu_pos() const { return mu_pos_; }
  double sigma_pos() const { return sigma_pos_; }
  double mu_neg() const { return mu_neg_; }
  double sigma_neg() const { return sigma_neg_; }

  double score(double l) const {
    const double dp = l - mu_pos_;
    const double dn = l - mu_neg_;
    return log_sigma_ratio_ - dp * dp * inv_two_var_pos_ + dn * dn * inv_two_var_neg_;
  }

 private:
  double mu_pos_, sigma_pos_, mu_neg_, sigma_neg_;
  double log_sigma_ratio_, inv_two_var_pos_, inv_two_var_neg_;
};

double weak_score(const WeakClassifier& wc, double l);

// Bank of m weak classifiers for one sub-patch; the strong classifier is
// their plain sum.
struct PatchClassifier {
  std::vector<WeakClassifier> weak;

  explicit PatchClassifier(int m = 0) : weak(m) {}
  int feature_count() const { return static_cast<int>(weak.size()); }
};

double strong_score(const PatchClassifier& pc, std::span<const double> feature);

struct MatchResult {
  Point best_origin;
  CompressedFeature best_feature;
  double score = 0.0;
};

// Evaluates the strong classifier at every in-bounds offset (dx, dy) with
// Euclidean norm < beta on the stride grid around `search_center`, and
// returns the maximizer. Ties go to the first candidate in row-major scan
// order. Throws SearchDomainError when no candidate fits in the image.
MatchResult match_patch(const PatchClassifier& pc, const CompiledProjection& proj,
                        const IntegralImage& ii, Point search_center, double beta, int stride);

MatchResult match_patch(const PatchClassifier& pc, const SparseProjection& proj,
                        const IntegralImage& ii, Point search_center, double beta, int stride);

// Exponential blend of Gaussian parameters toward fresh sample statistics:
// mu <- rate*mu + (1-rate)*sample_mu, and the blended sigma is the exact
// stddev of the rate-weighted two-component mixture. rate = 1 is a fixed
// point; positivity of sigma is preserved for any rate in (0, 1).
struct GaussianParams {
  double mu = 0.0;
  double sigma = 1.0;
};

GaussianParams blend_gaussian(GaussianParams old_params, GaussianParams sample_stats,
                              double rate);

}  // namespace het
