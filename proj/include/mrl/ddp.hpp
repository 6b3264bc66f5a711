#ifndef MRL_DDP_HPP
#define MRL_DDP_HPP

#include "mrl/mcmc.hpp"

namespace mrl {

// The two-group sampler shares the atom and hyperparameter blocks with the
// single-group model; pooling over groups happens through the labels.
inline void update_shared_atoms(MixtureState& state, const SamplerData& data,
                                const DpmmPriorConfig& prior,
                                const Eigen::Matrix2d& proposal_cov,
                                RngHandle& rng, MhStats* stats = nullptr) {
  update_atoms(state, data, prior, proposal_cov, rng, stats);
}

inline void update_config_grouped(MixtureState& state, const SamplerData& data,
                                  RngHandle& rng) {
  update_config(state, data, rng);
}

// Slice-sampled update of the latent (U, V, W) factors behind each
// (zeta_C, zeta_T) pair, with the truncated-beta full conditionals; both
// weight vectors are recomputed afterwards.  A zero occupancy count makes
// the corresponding truncation bound vacuous.
void update_zeta_slice(MixtureState& state, RngHandle& rng);

// Joint random-walk MH on (log alpha, logit b) against the product of the
// alpha gamma prior, the uniform b prior, and the L-1 latent beta
// densities, with the log/logit Jacobian alpha*b*(1-b).
void update_alpha_b(MixtureState& state, const DpmmPriorConfig& prior,
                    const Eigen::Matrix2d& proposal_cov, RngHandle& rng,
                    MhStats* stats = nullptr);

struct DdpDiagnostics {
  MhStats atoms;
  MhStats alpha_b;
  std::vector<std::string> warnings;
};

ChainOutput run_chain_ddp(const Dataset& data, const DpmmPriorConfig& prior,
                          const McmcSettings& settings, RngHandle& rng,
                          DdpDiagnostics* diag = nullptr);

}  // namespace mrl

#endif
