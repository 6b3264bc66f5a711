#include "mrl/dpmm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrl/distributions.hpp"
#include "mrl/special.hpp"

namespace mrl {

void update_weights(MixtureState& state, RngHandle& rng) {
  const int L = static_cast<int>(state.atoms.size());
  auto counts = cluster_counts(state.config, L);
  const std::vector<int>& M = counts[0];
  std::vector<int> tail(L + 1, 0);
  for (int l = L - 1; l >= 0; --l) tail[l] = tail[l + 1] + M[l];
  for (int l = 0; l < L - 1; ++l) {
    double v = sample_beta(rng, 1.0 + M[l], state.hyper.alpha + tail[l + 1]);
    v = std::clamp(v, 1e-15, 1.0 - 1e-15);
    state.sticks.zeta[0][l] = 1.0 - v;
  }
  state.sticks.weights[0] = stick_break(state.sticks.zeta[0]);
}

void update_alpha(MixtureState& state, const DpmmPriorConfig& prior,
                  RngHandle& rng) {
  const int L = static_cast<int>(state.atoms.size());
  double log_pL = std::log(state.sticks.weights[0][L - 1]);
  if (!(log_pL > -700.0)) log_pL = -700.0;  // underflow clamp
  state.hyper.alpha =
      sample_gamma(rng, prior.a_alpha + L - 1, prior.b_alpha - log_pL);
}

MixtureState initial_state(const SamplerData& data, const DpmmPriorConfig& prior,
                           int n_groups, RngHandle& rng) {
  const int L = prior.L;
  MixtureState st;
  st.hyper = prior.prior_mean_hyperstate();
  st.hyper.a_kappa = prior.a_kappa;
  st.atoms.resize(L);
  st.config.resize(n_groups);
  st.sticks.zeta.assign(n_groups, std::vector<double>(L - 1, 0.5));
  st.sticks.weights.resize(n_groups);

  // Quantile-bin the pooled times into min(5, L) starting clusters so that
  // multimodal data does not start from a single cluster.
  std::vector<double> all_times;
  for (const auto& g : data.by_group)
    for (const auto& o : g) all_times.push_back(o.time);
  int n_bins = std::min<std::size_t>(5, std::max<std::size_t>(1, L));
  std::vector<double> cuts;
  if (!all_times.empty()) {
    std::vector<double> sorted = all_times;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 1; k < n_bins; ++k)
      cuts.push_back(sorted[sorted.size() * k / n_bins]);
  }
  auto bin_of = [&](double t) {
    int b = 0;
    while (b < static_cast<int>(cuts.size()) && t >= cuts[b]) ++b;
    return b;
  };

  std::vector<std::vector<double>> bin_times(n_bins), bin_covs(n_bins);
  for (std::size_t g = 0; g < data.by_group.size(); ++g) {
    st.config[g].resize(data.by_group[g].size());
    for (std::size_t i = 0; i < data.by_group[g].size(); ++i) {
      int b = bin_of(data.by_group[g][i].time);
      st.config[g][i] = b;
      bin_times[b].push_back(data.by_group[g][i].time);
      if (data.has_covariate)
        bin_covs[b].push_back(*data.by_group[g][i].covariate);
    }
  }

  for (int l = 0; l < L; ++l) {
    AtomParams& a = st.atoms[l];
    if (l < n_bins && bin_times[l].size() >= 2) {
      double mean = std::accumulate(bin_times[l].begin(), bin_times[l].end(), 0.0) /
                    bin_times[l].size();
      double var = 0.0;
      for (double t : bin_times[l]) var += (t - mean) * (t - mean);
      var = std::max(var / (bin_times[l].size() - 1), 1e-6 * mean * mean);
      // Method of moments for the gamma kernel.
      a.theta = std::log(mean * mean / var);
      a.phi = std::log(mean / var);
    } else {
      Eigen::Vector2d tp = sample_mvnormal2(rng, st.hyper.mu, st.hyper.sigma);
      a.theta = tp(0);
      a.phi = tp(1);
    }
    if (data.has_covariate && l < n_bins && bin_covs[l].size() >= 2) {
      double mean = std::accumulate(bin_covs[l].begin(), bin_covs[l].end(), 0.0) /
                    bin_covs[l].size();
      double var = 0.0;
      for (double x : bin_covs[l]) var += (x - mean) * (x - mean);
      var = std::max(var / (bin_covs[l].size() - 1), 1e-8);
      a.beta = mean;
      a.kappa2 = var;
    } else {
      a.beta = sample_normal(rng, st.hyper.lambda, std::sqrt(st.hyper.tau2));
      a.kappa2 = sample_inverse_gamma(rng, st.hyper.a_kappa, st.hyper.rho);
    }
  }

  for (int g = 0; g < n_groups; ++g)
    st.sticks.weights[g] = stick_break(st.sticks.zeta[g]);
  return st;
}

ChainOutput run_chain(const Dataset& data, const DpmmPriorConfig& prior,
                      const McmcSettings& settings, RngHandle& rng,
                      DpmmDiagnostics* diag) {
  prior.validate();
  settings.validate();
  SamplerData sd = SamplerData::from_dataset(data, 1);

  MixtureState state = initial_state(sd, prior, 1, rng);
  const int adapt_until = settings.effective_adapt_until();

  // Proposal covariance for the (theta,phi) MH block: c times the running
  // average of the sampled Sigma, frozen at adapt_until.
  Eigen::Matrix2d sigma_bar = state.hyper.sigma;
  long sigma_n = 1;
  MhStats atoms_stats;

  ChainOutput out;
  out.meta.model = "dpmm";
  out.meta.seed = rng.seed();
  out.meta.L = prior.L;
  out.meta.iterations = settings.iterations;
  out.meta.burn_in = settings.burn_in;
  out.meta.thinning = settings.thinning;
  out.meta.n_groups = 1;
  out.meta.has_covariate = sd.has_covariate;
  out.meta.data_hash = dataset_hash(data);

  for (int it = 0; it < settings.iterations; ++it) {
    Eigen::Matrix2d prop = settings.mh_step_scale * sigma_bar;
    MhStats* collect = it >= settings.burn_in ? &atoms_stats : nullptr;
    update_atoms(state, sd, prior, prop, rng, collect);
    update_config(state, sd, rng);
    update_weights(state, rng);
    update_alpha(state, prior, rng);
    update_hypers(state, prior, rng);
    if (it < adapt_until) {
      sigma_bar += (state.hyper.sigma - sigma_bar) / double(++sigma_n);
    }
    if (it >= settings.burn_in &&
        (it - settings.burn_in) % settings.thinning == 0)
      out.draws.push_back(state);
  }

  out.meta.accept_atoms = atoms_stats.rate();
  if (diag) {
    diag->atoms = atoms_stats;
    if (atoms_stats.proposed > 0 &&
        (atoms_stats.rate() < 0.1 || atoms_stats.rate() > 0.6))
      diag->warnings.push_back("atom MH acceptance rate " +
                               std::to_string(atoms_stats.rate()) +
                               " outside [0.1, 0.6]; consider retuning mh_step_scale");
  }
  return out;
}

}  // namespace mrl
