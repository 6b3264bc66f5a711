#ifndef MRL_MCMC_HPP
#define MRL_MCMC_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mrl/data.hpp"
#include "mrl/rng.hpp"
#include "mrl/state.hpp"

namespace mrl {

// Hyperprior constants shared by the single-group and two-group samplers.
// Gamma priors are shape/rate, inverse-gamma priors shape/scale; b_lambda
// is the variance of the normal prior on lambda.
struct DpmmPriorConfig {
  double a_alpha = 3.0, b_alpha = 0.1;
  Eigen::Vector2d a_mu = Eigen::Vector2d::Zero();
  Eigen::Matrix2d B_mu = Eigen::Matrix2d::Identity();
  double a_Sigma = 4.0;
  Eigen::Matrix2d B_Sigma = Eigen::Matrix2d::Identity();
  double a_lambda = 0.0, b_lambda = 1.0;
  double a_tau = 2.0, b_tau = 1.0;
  double a_kappa = 2.0;  // fixed shape of the kappa2 inverse-gamma prior
  double a_rho = 1.0, b_rho = 1.0;
  int L = 80;

  void validate() const;
  Hyperstate prior_mean_hyperstate() const;
};

struct McmcSettings {
  int iterations = 12000;
  int burn_in = 2000;
  int thinning = 5;
  double mh_step_scale = 1.5;  // the c multiplier on adapted proposal spread
  int adapt_until = -1;        // proposal adaptation freeze; -1 means = burn_in
  std::uint64_t seed = 1;

  int effective_adapt_until() const {
    return adapt_until < 0 ? burn_in : adapt_until;
  }
  void validate() const;
};

// Observations regrouped for the samplers; config[g][i] labels
// by_group[g][i].  Single-group data lives entirely in group 0.
struct SamplerData {
  std::vector<std::vector<Observation>> by_group;
  bool has_covariate = false;

  static SamplerData from_dataset(const Dataset& data, int n_groups);
  std::size_t total_size() const;
};

struct MhStats {
  long proposed = 0;
  long accepted = 0;
  double rate() const { return proposed > 0 ? double(accepted) / double(proposed) : 0.0; }
};

// Shared Gibbs blocks -------------------------------------------------------

// Atom update pooling every group's assigned observations: fresh baseline
// draws for inactive components, random-walk MH on (theta,phi) with
// censoring-aware gamma likelihood, conjugate normal/inverse-gamma draws
// for (beta, kappa2).
void update_atoms(MixtureState& state, const SamplerData& data,
                  const DpmmPriorConfig& prior,
                  const Eigen::Matrix2d& proposal_cov, RngHandle& rng,
                  MhStats* stats = nullptr);

// Multinomial label draw per observation with group-specific weights;
// censored rows use the gamma survival factor.
void update_config(MixtureState& state, const SamplerData& data, RngHandle& rng);

// Exact conjugate draws for mu, Sigma, lambda, tau2, rho.
void update_hypers(MixtureState& state, const DpmmPriorConfig& prior,
                   RngHandle& rng);

}  // namespace mrl

#endif
