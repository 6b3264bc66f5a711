#ifndef MRL_DISTRIBUTIONS_HPP
#define MRL_DISTRIBUTIONS_HPP

#include <Eigen/Dense>

#include "mrl/rng.hpp"
#include "mrl/special.hpp"

namespace mrl {

// Joint draw from the product-construction bivariate beta:
// zeta_c = u*w, zeta_t = v*w with u, v ~ Beta(alpha, 1-b) and
// w ~ Beta(1+alpha-b, b).  Marginals are Beta(alpha, 1) each.
struct BivBetaDraw {
  double zeta_c;
  double zeta_t;
  double u, v, w;
};

double sample_normal(RngHandle& rng, double mean, double sd);
double sample_gamma(RngHandle& rng, double shape, double rate);
double sample_inverse_gamma(RngHandle& rng, double shape, double scale);
double sample_beta(RngHandle& rng, double a, double b);

Eigen::Vector2d sample_mvnormal2(RngHandle& rng, const Eigen::Vector2d& mean,
                                 const Eigen::Matrix2d& cov);
Eigen::Matrix2d sample_inverse_wishart2(RngHandle& rng, double df,
                                        const Eigen::Matrix2d& scale);

BivBetaDraw sample_kotz_bivariate_beta(RngHandle& rng, double alpha, double b);

// Draw from Beta(a,b) conditioned to the interval (lo,hi) by inverse cdf
// on the restricted range.  If the restricted mass underflows, or the
// interval is numerically degenerate, returns the fallback value stated in
// the header comment of the implementation and sets *degenerate.
double sample_truncated_beta(RngHandle& rng, double a, double b, double lo,
                             double hi, bool* degenerate = nullptr);

}  // namespace mrl

#endif
