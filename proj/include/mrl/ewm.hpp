#ifndef MRL_EWM_HPP
#define MRL_EWM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mrl/data.hpp"
#include "mrl/mcmc.hpp"

namespace mrl {

// Exponentiated-Weibull regression: S(t | x) = 1 - (1 - exp(-t^alpha e^eta))^theta
// with eta = beta0 + beta1 x.  beta1 is unused when the fit has no covariate.
struct EwmParams {
  double alpha = 1.0;
  double theta = 1.0;
  double beta0 = 0.0;
  double beta1 = 0.0;
};

struct EwmPriors {
  double alpha_mean = 1.1;   // exponential prior mean
  double theta_mean = 0.9;   // exponential prior mean
  double beta0_mean = -10.0;
  double beta0_sd = 10.0;
  double beta1_mean = 0.0;
  double beta1_sd = 10.0;
};

struct EwmChain {
  std::uint64_t seed = 0;
  int iterations = 0;
  int burn_in = 0;
  int thinning = 1;
  bool has_covariate = false;
  std::uint64_t data_hash = 0;
  double accept_rate = 0.0;
  std::vector<EwmParams> draws;
};

double ewm_survival(const EwmParams& p, double t, double x = 0.0);
double ewm_log_density(const EwmParams& p, double t, double x = 0.0);
// Mean residual life by numeric tail quadrature of the survival.
double ewm_mrl(const EwmParams& p, double t, double x = 0.0);

// Per-observation log-likelihood contribution (density if observed,
// survival if censored).
double ewm_obs_loglik(const EwmParams& p, const Observation& obs,
                      bool use_covariate);

// Centers the alpha/theta/beta0 priors on the parameters matching three
// elicited survival-time quantiles at x = 0: F(t_q) = q for
// q = 0.1, 0.5, 0.9.  Throws if the quantiles are not increasing or the
// solve fails.
EwmPriors elicit_priors(double t10, double t50, double t90);

EwmChain run_chain_ewm(const Dataset& data, const EwmPriors& priors,
                       const McmcSettings& settings);

void write_ewm_chain(const std::string& path, const EwmChain& chain);
EwmChain read_ewm_chain(const std::string& path);

}  // namespace mrl

#endif
