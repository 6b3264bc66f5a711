#ifndef MRL_DPMM_HPP
#define MRL_DPMM_HPP

#include "mrl/mcmc.hpp"

namespace mrl {

// Truncated-stick conjugate update: v_l ~ Beta(1 + M_l, alpha + sum_{r>l} M_r)
// independently for l < L, zeta = 1 - v, weights recomputed.
void update_weights(MixtureState& state, RngHandle& rng);

// alpha ~ Gamma(a_alpha + L - 1, b_alpha - log p_L); log p_L clamped at
// -700 when the last weight underflows.
void update_alpha(MixtureState& state, const DpmmPriorConfig& prior,
                  RngHandle& rng);

struct DpmmDiagnostics {
  MhStats atoms;
  std::vector<std::string> warnings;
};

ChainOutput run_chain(const Dataset& data, const DpmmPriorConfig& prior,
                      const McmcSettings& settings, RngHandle& rng,
                      DpmmDiagnostics* diag = nullptr);

// Starting state shared by both samplers: labels by quantile binning of
// the times, atoms moment-matched to their bin, hyperparameters at prior
// means.
MixtureState initial_state(const SamplerData& data, const DpmmPriorConfig& prior,
                           int n_groups, RngHandle& rng);

}  // namespace mrl

#endif
