#include "mrl/state.hpp"

#include <stdexcept>

namespace mrl {

std::vector<double> stick_break(std::span<const double> zeta) {
  std::vector<double> w(zeta.size() + 1);
  double stick = 1.0;
  for (std::size_t l = 0; l < zeta.size(); ++l) {
    if (!(zeta[l] > 0.0 && zeta[l] < 1.0))
      throw std::domain_error("stick_break: zeta components must lie in (0,1)");
    w[l] = (1.0 - zeta[l]) * stick;
    stick *= zeta[l];
  }
  w[zeta.size()] = stick;  // remainder absorbs truncation mass
  return w;
}

std::vector<std::vector<int>> cluster_counts(
    const std::vector<std::vector<int>>& config, int L) {
  std::vector<std::vector<int>> counts(config.size(), std::vector<int>(L, 0));
  for (std::size_t g = 0; g < config.size(); ++g)
    for (int lbl : config[g]) {
      if (lbl < 0 || lbl >= L)
        throw std::domain_error("cluster_counts: label out of range");
      ++counts[g][lbl];
    }
  return counts;
}

}  // namespace mrl
