#include "volta/convergence.hpp"

#include <cmath>

namespace volta {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Convergent: return "convergent";
    case Classification::Divergent: return "divergent";
    case Classification::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Classification classify_partial_sums(const std::vector<double>& sums, double conv_rel,
                                     double div_rel) {
  for (double s : sums)
    if (!std::isfinite(s)) return Classification::Divergent;
  if (sums.size() < 2) return Classification::Inconclusive;

  std::vector<double> rel;
  rel.reserve(sums.size() - 1);
  for (size_t i = 1; i < sums.size(); ++i) {
    const double scale = std::max(std::abs(sums[i]), 1e-300);
    rel.push_back((sums[i] - sums[i - 1]) / scale);
  }

  if (rel.back() > div_rel) return Classification::Divergent;
  if (rel.size() >= 3) {
    bool settled = true;
    for (size_t i = rel.size() - 3; i < rel.size(); ++i)
      if (!(std::abs(rel[i]) < conv_rel)) settled = false;
    if (settled) return Classification::Convergent;
  }
  return Classification::Inconclusive;
}

}  // namespace volta
