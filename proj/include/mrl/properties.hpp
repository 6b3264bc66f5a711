#ifndef MRL_PROPERTIES_HPP
#define MRL_PROPERTIES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "mrl/rng.hpp"

namespace mrl {

// Monte Carlo estimate with its standard error.
struct McEstimate {
  double value = 0.0;
  double se = 0.0;
};

// Closed-form moments of the dependent stick-breaking construction ----------

// Covariance and correlation of one (zeta_C, zeta_T) pair.
double zeta_covariance(double alpha, double b);
double zeta_correlation(double alpha, double b);

// Across-group covariance of the level-l weights (l is 1-based) and the
// common within-group variance.
double weight_covariance(double alpha, double b, int level);
double weight_variance(double alpha, int level);

// Across-group correlation of the two random mixing measures at any set,
// and the covariance at a set with base-measure mass g0_mass.
double measure_correlation(double alpha, double b);
double measure_covariance(double alpha, double b, double g0_mass);

// Across-group covariance and within-group variance of the mixture mean
// functional under baseline moments (mu, Sigma) for (theta, phi).
double mean_functional_covariance(double alpha, double b,
                                  const Eigen::Vector2d& mu,
                                  const Eigen::Matrix2d& sigma);
double mean_functional_variance(const Eigen::Vector2d& mu,
                                const Eigen::Matrix2d& sigma);

// Monte Carlo oracles --------------------------------------------------------

struct ZetaMcMoments {
  McEstimate mean_c, mean_t, var_c, var_t, cov, cor;
};
ZetaMcMoments mc_zeta_moments(double alpha, double b, std::size_t n,
                              RngHandle& rng);

struct WeightMcMoments {
  McEstimate var_c, var_t, cov;
};
// Moments of the level-l weights (1-based) from n simulated stick sequences
// truncated at trunc_level sticks.
WeightMcMoments mc_weight_moments(double alpha, double b, int level,
                                  std::size_t n, int trunc_level,
                                  RngHandle& rng);

struct MeasureMcMoments {
  McEstimate cov, cor;
};
// G_C(B), G_T(B) for B a set of base-measure mass g0_mass; atoms are not
// needed, only uniform marks compared against g0_mass.
MeasureMcMoments mc_measure_moments(double alpha, double b, double g0_mass,
                                    std::size_t n, int trunc_level,
                                    RngHandle& rng);

struct MeanFunctionalMcMoments {
  McEstimate var_c, var_t, cov;
};
MeanFunctionalMcMoments mc_mean_functional_moments(
    double alpha, double b, const Eigen::Vector2d& mu,
    const Eigen::Matrix2d& sigma, std::size_t n, int trunc_level,
    RngHandle& rng);

// Standard-error machinery ---------------------------------------------------

McEstimate mc_mean(std::span<const double> x);
// Covariance with SE from the spread of centered cross products.
McEstimate mc_covariance(std::span<const double> x, std::span<const double> y);
// Correlation with influence-function SE.
McEstimate mc_correlation(std::span<const double> x, std::span<const double> y);
// Mean of an autocorrelated chain with batch-means SE.
McEstimate batch_means(std::span<const double> x, int n_batches = 50);

}  // namespace mrl

#endif
