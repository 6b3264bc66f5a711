#include "mrl/ddp.hpp"

#include <algorithm>
#include <cmath>

#include "mrl/distributions.hpp"
#include "mrl/dpmm.hpp"
#include "mrl/special.hpp"

namespace mrl {

namespace {

// Slice bound (1 - s^{1/M}) / factor clipped to (0, 1]; M = 0 means the
// indicator is vacuous.
double truncation_bound(double slice, int M, double factor) {
  if (M == 0) return 1.0;
  double bound = (1.0 - std::pow(slice, 1.0 / M)) / factor;
  return std::min(bound, 1.0);
}

double alpha_b_log_target(double alpha, double b, const MixtureState& state,
                          const DpmmPriorConfig& prior) {
  if (!(alpha > 0.0) || !(b > 0.0 && b < 1.0))
    return -std::numeric_limits<double>::infinity();
  // Gamma(a_alpha, b_alpha) prior on alpha; Unif(0,1) on b.
  double lp = (prior.a_alpha - 1.0) * std::log(alpha) - prior.b_alpha * alpha;
  const auto& s = state.sticks;
  for (std::size_t l = 0; l < s.u.size(); ++l) {
    lp += beta_log_pdf(s.u[l], alpha, 1.0 - b);
    lp += beta_log_pdf(s.v[l], alpha, 1.0 - b);
    lp += beta_log_pdf(s.w[l], 1.0 + alpha - b, b);
  }
  return lp;
}

}  // namespace

void update_zeta_slice(MixtureState& state, RngHandle& rng) {
  const int L = static_cast<int>(state.atoms.size());
  auto counts = cluster_counts(state.config, L);
  const std::vector<int>& MC = counts[0];
  const std::vector<int>& MT = counts[1];
  std::vector<int> tail_c(L + 1, 0), tail_t(L + 1, 0);
  for (int l = L - 1; l >= 0; --l) {
    tail_c[l] = tail_c[l + 1] + MC[l];
    tail_t[l] = tail_t[l + 1] + MT[l];
  }
  const double alpha = state.hyper.alpha;
  const double b = state.hyper.b;
  StickState& s = state.sticks;

  for (int l = 0; l < L - 1; ++l) {
    // Slice variables; an empty component gives a vacuous bound of 1.
    double nu = rng.uniform() * std::pow(1.0 - s.u[l] * s.w[l], MC[l]);
    double gamma = rng.uniform() * std::pow(1.0 - s.v[l] * s.w[l], MT[l]);

    double hi_u = truncation_bound(nu, MC[l], s.w[l]);
    s.u[l] = sample_truncated_beta(rng, tail_c[l + 1] + alpha, 1.0 - b, 0.0, hi_u);

    double hi_v = truncation_bound(gamma, MT[l], s.w[l]);
    s.v[l] = sample_truncated_beta(rng, tail_t[l + 1] + alpha, 1.0 - b, 0.0, hi_v);

    double m_star = std::min(truncation_bound(nu, MC[l], s.u[l]),
                             truncation_bound(gamma, MT[l], s.v[l]));
    s.w[l] = sample_truncated_beta(
        rng, tail_c[l + 1] + tail_t[l + 1] + alpha + 1.0 - b, b, 0.0, m_star);

    s.zeta[0][l] = std::clamp(s.u[l] * s.w[l], 1e-15, 1.0 - 1e-15);
    s.zeta[1][l] = std::clamp(s.v[l] * s.w[l], 1e-15, 1.0 - 1e-15);
  }
  s.weights[0] = stick_break(s.zeta[0]);
  s.weights[1] = stick_break(s.zeta[1]);
}

void update_alpha_b(MixtureState& state, const DpmmPriorConfig& prior,
                    const Eigen::Matrix2d& proposal_cov, RngHandle& rng,
                    MhStats* stats) {
  double alpha = state.hyper.alpha;
  double b = state.hyper.b;
  Eigen::Vector2d cur(std::log(alpha), std::log(b) - std::log1p(-b));
  Eigen::Vector2d prop = sample_mvnormal2(rng, cur, proposal_cov);
  double alpha_p = std::exp(prop(0));
  double b_p = 1.0 / (1.0 + std::exp(-prop(1)));
  if (!(b_p > 0.0 && b_p < 1.0) || !(alpha_p > 0.0) || !std::isfinite(alpha_p)) {
    if (stats) ++stats->proposed;
    return;
  }
  // Log/logit Jacobian alpha * b * (1-b) on both sides.
  double log_ratio = alpha_b_log_target(alpha_p, b_p, state, prior) -
                     alpha_b_log_target(alpha, b, state, prior) +
                     std::log(alpha_p) + std::log(b_p) + std::log1p(-b_p) -
                     std::log(alpha) - std::log(b) - std::log1p(-b);
  if (stats) ++stats->proposed;
  if (std::log(rng.uniform()) < log_ratio) {
    state.hyper.alpha = alpha_p;
    state.hyper.b = b_p;
    if (stats) ++stats->accepted;
  }
}

ChainOutput run_chain_ddp(const Dataset& data, const DpmmPriorConfig& prior,
                          const McmcSettings& settings, RngHandle& rng,
                          DdpDiagnostics* diag) {
  prior.validate();
  settings.validate();
  SamplerData sd = SamplerData::from_dataset(data, 2);

  MixtureState state = initial_state(sd, prior, 2, rng);
  const int L = prior.L;
  state.sticks.u.assign(L - 1, 0.5);
  state.sticks.v.assign(L - 1, 0.5);
  state.sticks.w.assign(L - 1, 0.5);
  for (int l = 0; l < L - 1; ++l) {
    state.sticks.zeta[0][l] = 0.25;
    state.sticks.zeta[1][l] = 0.25;
  }
  state.sticks.weights[0] = stick_break(state.sticks.zeta[0]);
  state.sticks.weights[1] = stick_break(state.sticks.zeta[1]);

  const int adapt_until = settings.effective_adapt_until();
  Eigen::Matrix2d sigma_bar = state.hyper.sigma;
  long sigma_n = 1;
  MhStats atoms_stats, ab_stats;

  // (log alpha, logit b) proposal: empirical covariance of the pilot
  // samples, recomputed periodically and frozen at adapt_until.
  Eigen::Matrix2d ab_cov = Eigen::Matrix2d::Zero();
  ab_cov(0, 0) = 0.1;
  ab_cov(1, 1) = 0.3;
  std::vector<Eigen::Vector2d> ab_history;

  ChainOutput out;
  out.meta.model = "ddpmm";
  out.meta.seed = rng.seed();
  out.meta.L = prior.L;
  out.meta.iterations = settings.iterations;
  out.meta.burn_in = settings.burn_in;
  out.meta.thinning = settings.thinning;
  out.meta.n_groups = 2;
  out.meta.has_covariate = sd.has_covariate;
  out.meta.data_hash = dataset_hash(data);

  for (int it = 0; it < settings.iterations; ++it) {
    Eigen::Matrix2d prop = settings.mh_step_scale * sigma_bar;
    MhStats* collect = it >= settings.burn_in ? &atoms_stats : nullptr;
    update_shared_atoms(state, sd, prior, prop, rng, collect);
    update_config_grouped(state, sd, rng);
    update_zeta_slice(state, rng);
    update_alpha_b(state, prior, ab_cov, rng,
                   it >= settings.burn_in ? &ab_stats : nullptr);
    update_hypers(state, prior, rng);

    if (it < adapt_until) {
      sigma_bar += (state.hyper.sigma - sigma_bar) / double(++sigma_n);
      ab_history.emplace_back(std::log(state.hyper.alpha),
                              std::log(state.hyper.b) -
                                  std::log1p(-state.hyper.b));
      if (ab_history.size() >= 100 && ab_history.size() % 100 == 0) {
        Eigen::Vector2d mean = Eigen::Vector2d::Zero();
        for (const auto& x : ab_history) mean += x;
        mean /= double(ab_history.size());
        Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
        for (const auto& x : ab_history)
          cov += (x - mean) * (x - mean).transpose();
        cov /= double(ab_history.size() - 1);
        ab_cov = (2.4 * 2.4 / 2.0) * cov + 1e-6 * Eigen::Matrix2d::Identity();
      }
    }
    if (it >= settings.burn_in &&
        (it - settings.burn_in) % settings.thinning == 0)
      out.draws.push_back(state);
  }

  out.meta.accept_atoms = atoms_stats.rate();
  out.meta.accept_alpha_b = ab_stats.rate();
  if (diag) {
    diag->atoms = atoms_stats;
    diag->alpha_b = ab_stats;
    for (const auto& [name, st] :
         {std::pair<const char*, MhStats&>{"atom", atoms_stats},
          std::pair<const char*, MhStats&>{"(alpha,b)", ab_stats}})
      if (st.proposed > 0 && (st.rate() < 0.1 || st.rate() > 0.6))
        diag->warnings.push_back(std::string(name) + " MH acceptance rate " +
                                 std::to_string(st.rate()) +
                                 " outside [0.1, 0.6]");
  }
  return out;
}

}  // namespace mrl
