#include "het/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "het/errors.hpp"

namespace het {

std::vector<double> normalize_weights(std::span<const double> scores) {
  const std::size_t q = scores.size();
  if (q < 2) throw ContractError("normalize_weights needs at least 2 scores");

  const bool all_equal = std::all_of(scores.begin(), scores.end(),
                                     [&](double s) { return s == scores.front(); });
  if (all_equal) return std::vector<double>(q, 0.5);

  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(q);
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  var /= static_cast<double>(q);
  const double stddev = std::sqrt(var);

  std::vector<double> z(q);
  for (std::size_t i = 0; i < q; ++i) z[i] = (scores[i] - mean) / stddev;

  const auto [lo_it, hi_it] = std::minmax_element(z.begin(), z.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> weights(q);
  for (std::size_t i = 0; i < q; ++i) {
    weights[i] = std::lerp(0.1, 0.9, (z[i] - lo) / (hi - lo));
  }
  return weights;
}

Measurement combine_votes(std::span<const Vec2> votes, std::span<const double> weights) {
  if (votes.size() != weights.size()) {
    throw ContractError("votes and weights must be aligned");
  }
  if (votes.empty()) throw ContractError("combine_votes needs at least one vote");
  double total = 0.0;
  Vec2 acc;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.1 && w <= 0.9)) {
      throw ContractError("weight out of [0.1, 0.9]: " + std::to_string(w));
    }
    total += w;
    acc = acc + w * votes[i];
  }
  if (total < 1.0) {
    throw ConfigError("total weight W = " + std::to_string(total) +
                      " violates the W >= 1 assumption");
  }
  return Measurement{(1.0 / total) * acc, total / static_cast<double>(votes.size())};
}

Measurement combine_votes(const PatchSet& patches, std::span<const double> weights) {
  std::vector<Vec2> votes;
  std::vector<double> active;
  votes.reserve(patches.patches.size());
  active.reserve(patches.patches.size());
  std::size_t wi = 0;
  for (const auto& p : patches.patches) {
    if (!p.matched) continue;
    if (wi >= weights.size()) throw ContractError("fewer weights than matched patches");
    votes.push_back(Vec2{static_cast<double>(p.location.x), static_cast<double>(p.location.y)} +
                    p.rel_offset);
    active.push_back(weights[wi++]);
  }
  if (wi != weights.size()) throw ContractError("more weights than matched patches");
  return combine_votes(votes, active);
}

}  // namespace het
