#include "mrl/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mrl/distributions.hpp"
#include "mrl/special.hpp"

namespace mrl {

namespace {

bool is_spd(const Eigen::Matrix2d& m) {
  Eigen::LLT<Eigen::Matrix2d> llt(m);
  return llt.info() == Eigen::Success;
}

// Bounds on (theta, phi) proposals; e^250 overflows the gamma kernel long
// before this matters statistically.
constexpr double kLogParamBound = 250.0;

double mvn2_log_pdf(const Eigen::Vector2d& x, const Eigen::Vector2d& mu,
                    const Eigen::Matrix2d& sigma) {
  Eigen::LLT<Eigen::Matrix2d> llt(sigma);
  Eigen::Vector2d d = x - mu;
  Eigen::Vector2d z = llt.matrixL().solve(d);
  double logdet = 2.0 * std::log(llt.matrixL()(0, 0)) +
                  2.0 * std::log(llt.matrixL()(1, 1));
  const double log2pi = 1.8378770664093454836;
  return -0.5 * (2.0 * log2pi + logdet + z.squaredNorm());
}

// Censoring-aware gamma log likelihood of the observations assigned to one
// component at kernel parameters (theta, phi).
double atom_time_loglik(double theta, double phi, const SamplerData& data,
                        const MixtureState& state, int component) {
  double shape = std::exp(theta);
  double rate = std::exp(phi);
  double ll = 0.0;
  for (std::size_t g = 0; g < data.by_group.size(); ++g)
    for (std::size_t i = 0; i < data.by_group[g].size(); ++i) {
      if (state.config[g][i] != component) continue;
      const Observation& o = data.by_group[g][i];
      ll += o.censored ? log_gamma_survival(o.time, shape, rate)
                       : gamma_log_pdf(o.time, shape, rate);
    }
  return ll;
}

}  // namespace

void DpmmPriorConfig::validate() const {
  if (!(a_alpha > 0.0 && b_alpha > 0.0)) throw std::domain_error("prior: alpha gamma prior needs positive shape/rate");
  if (!is_spd(B_mu)) throw std::domain_error("prior: B_mu must be positive-definite");
  if (!is_spd(B_Sigma)) throw std::domain_error("prior: B_Sigma must be positive-definite");
  if (!(a_Sigma > 3.0)) throw std::domain_error("prior: a_Sigma must exceed 3 for a 2x2 inverse Wishart mean");
  if (!(b_lambda > 0.0)) throw std::domain_error("prior: b_lambda (variance) must be positive");
  if (!(a_tau > 0.0 && b_tau > 0.0)) throw std::domain_error("prior: tau2 inverse-gamma prior needs positive parameters");
  if (!(a_kappa > 0.0)) throw std::domain_error("prior: a_kappa must be positive");
  if (!(a_rho > 0.0 && b_rho > 0.0)) throw std::domain_error("prior: rho gamma prior needs positive shape/rate");
  if (L < 2) throw std::domain_error("prior: truncation L must be at least 2");
}

Hyperstate DpmmPriorConfig::prior_mean_hyperstate() const {
  Hyperstate h;
  h.mu = a_mu;
  h.sigma = B_Sigma / (a_Sigma - 3.0);
  h.lambda = a_lambda;
  h.tau2 = a_tau > 1.0 ? b_tau / (a_tau - 1.0) : b_tau;
  h.rho = a_rho / b_rho;
  h.alpha = a_alpha / b_alpha;
  h.b = 0.5;
  h.a_kappa = a_kappa;
  return h;
}

void McmcSettings::validate() const {
  if (iterations <= 0) throw std::domain_error("settings: iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations) throw std::domain_error("settings: need 0 <= burn_in < iterations");
  if (thinning < 1) throw std::domain_error("settings: thinning must be at least 1");
  if (effective_adapt_until() > burn_in) throw std::domain_error("settings: adapt_until must not exceed burn_in");
  if (!(mh_step_scale > 0.0)) throw std::domain_error("settings: mh_step_scale must be positive");
}

SamplerData SamplerData::from_dataset(const Dataset& data, int n_groups) {
  SamplerData sd;
  sd.has_covariate = data.has_covariate;
  sd.by_group.resize(n_groups);
  if (n_groups == 1) {
    sd.by_group[0] = data.rows;
  } else {
    if (!data.has_group && !data.rows.empty())
      throw std::domain_error("two-group sampler requires group labels");
    for (const auto& r : data.rows)
      sd.by_group[*r.group == Group::C ? 0 : 1].push_back(r);
  }
  return sd;
}

std::size_t SamplerData::total_size() const {
  std::size_t n = 0;
  for (const auto& g : by_group) n += g.size();
  return n;
}

void update_atoms(MixtureState& state, const SamplerData& data,
                  const DpmmPriorConfig& prior,
                  const Eigen::Matrix2d& proposal_cov, RngHandle& rng,
                  MhStats* stats) {
  const int L = static_cast<int>(state.atoms.size());
  auto counts = cluster_counts(state.config, L);
  const Hyperstate& h = state.hyper;

  for (int l = 0; l < L; ++l) {
    int n_l = 0;
    for (std::size_t g = 0; g < counts.size(); ++g) n_l += counts[g][l];
    AtomParams& atom = state.atoms[l];

    if (n_l == 0) {
      Eigen::Vector2d tp = sample_mvnormal2(rng, h.mu, h.sigma);
      atom.theta = tp(0);
      atom.phi = tp(1);
      // beta refresh from its prior N(lambda, tau2); the kappa2 appearing
      // here in some write-ups does not reproduce the prior.
      atom.beta = sample_normal(rng, h.lambda, std::sqrt(h.tau2));
      atom.kappa2 = sample_inverse_gamma(rng, h.a_kappa, h.rho);
      continue;
    }

    // (theta, phi): bivariate random-walk MH.
    Eigen::Vector2d cur(atom.theta, atom.phi);
    Eigen::Vector2d prop = sample_mvnormal2(rng, cur, proposal_cov);
    double log_ratio;
    if (std::fabs(prop(0)) > kLogParamBound || std::fabs(prop(1)) > kLogParamBound) {
      log_ratio = -std::numeric_limits<double>::infinity();
    } else {
      log_ratio = mvn2_log_pdf(prop, h.mu, h.sigma) -
                  mvn2_log_pdf(cur, h.mu, h.sigma) +
                  atom_time_loglik(prop(0), prop(1), data, state, l) -
                  atom_time_loglik(cur(0), cur(1), data, state, l);
    }
    if (stats) ++stats->proposed;
    if (std::log(rng.uniform()) < log_ratio) {
      atom.theta = prop(0);
      atom.phi = prop(1);
      if (stats) ++stats->accepted;
    }

    if (data.has_covariate) {
      // beta: normal-normal conjugacy on the pooled assigned covariates.
      double sum_x = 0.0;
      for (std::size_t g = 0; g < data.by_group.size(); ++g)
        for (std::size_t i = 0; i < data.by_group[g].size(); ++i)
          if (state.config[g][i] == l) sum_x += *data.by_group[g][i].covariate;
      double s2 = 1.0 / (1.0 / h.tau2 + n_l / atom.kappa2);
      double m = s2 * (sum_x / atom.kappa2 + h.lambda / h.tau2);
      atom.beta = sample_normal(rng, m, std::sqrt(s2));

      double ss = 0.0;
      for (std::size_t g = 0; g < data.by_group.size(); ++g)
        for (std::size_t i = 0; i < data.by_group[g].size(); ++i)
          if (state.config[g][i] == l) {
            double d = *data.by_group[g][i].covariate - atom.beta;
            ss += d * d;
          }
      atom.kappa2 = sample_inverse_gamma(rng, h.a_kappa + 0.5 * n_l,
                                         h.rho + 0.5 * ss);
    } else {
      atom.beta = sample_normal(rng, h.lambda, std::sqrt(h.tau2));
      atom.kappa2 = sample_inverse_gamma(rng, h.a_kappa, h.rho);
    }
  }
}

void update_config(MixtureState& state, const SamplerData& data, RngHandle& rng) {
  const int L = static_cast<int>(state.atoms.size());
  std::vector<double> log_shape(L), log_rate(L), shape(L), rate(L);
  for (int l = 0; l < L; ++l) {
    shape[l] = std::exp(state.atoms[l].theta);
    rate[l] = std::exp(state.atoms[l].phi);
  }
  std::vector<double> logw(L);
  for (std::size_t g = 0; g < data.by_group.size(); ++g) {
    std::vector<double> log_pg(L);
    for (int l = 0; l < L; ++l) log_pg[l] = std::log(state.sticks.weights[g][l]);
    for (std::size_t i = 0; i < data.by_group[g].size(); ++i) {
      const Observation& o = data.by_group[g][i];
      for (int l = 0; l < L; ++l) {
        double ll = o.censored ? log_gamma_survival(o.time, shape[l], rate[l])
                               : gamma_log_pdf(o.time, shape[l], rate[l]);
        if (data.has_covariate)
          ll += normal_log_pdf(*o.covariate, state.atoms[l].beta,
                               state.atoms[l].kappa2);
        logw[l] = log_pg[l] + ll;
      }
      // Renormalize in log space; never sample from a zero vector.
      double mx = *std::max_element(logw.begin(), logw.end());
      double total = 0.0;
      for (int l = 0; l < L; ++l) total += std::exp(logw[l] - mx);
      double u = rng.uniform() * total;
      double acc = 0.0;
      int pick = L - 1;
      for (int l = 0; l < L; ++l) {
        acc += std::exp(logw[l] - mx);
        if (u <= acc) { pick = l; break; }
      }
      state.config[g][i] = pick;
    }
  }
}

void update_hypers(MixtureState& state, const DpmmPriorConfig& prior,
                   RngHandle& rng) {
  const int L = static_cast<int>(state.atoms.size());
  Hyperstate& h = state.hyper;

  // mu | ...
  Eigen::Vector2d sum_tp = Eigen::Vector2d::Zero();
  for (const auto& a : state.atoms) sum_tp += Eigen::Vector2d(a.theta, a.phi);
  Eigen::Matrix2d B_mu_inv = prior.B_mu.inverse();
  Eigen::Matrix2d sigma_inv = h.sigma.inverse();
  Eigen::Matrix2d S_mu = (B_mu_inv + L * sigma_inv).inverse();
  Eigen::Vector2d m_mu = S_mu * (B_mu_inv * prior.a_mu + sigma_inv * sum_tp);
  h.mu = sample_mvnormal2(rng, m_mu, 0.5 * (S_mu + S_mu.transpose()));

  // Sigma | ...
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  for (const auto& a : state.atoms) {
    Eigen::Vector2d d = Eigen::Vector2d(a.theta, a.phi) - h.mu;
    scatter += d * d.transpose();
  }
  h.sigma = sample_inverse_wishart2(rng, prior.a_Sigma + L, prior.B_Sigma + scatter);

  // lambda | ...
  double sum_beta = 0.0;
  for (const auto& a : state.atoms) sum_beta += a.beta;
  double s2_l = 1.0 / (1.0 / prior.b_lambda + L / h.tau2);
  double m_l = s2_l * (prior.a_lambda / prior.b_lambda + sum_beta / h.tau2);
  h.lambda = sample_normal(rng, m_l, std::sqrt(s2_l));

  // tau2 | ...
  double ss_beta = 0.0;
  for (const auto& a : state.atoms) {
    double d = a.beta - h.lambda;
    ss_beta += d * d;
  }
  h.tau2 = sample_inverse_gamma(rng, prior.a_tau + 0.5 * L,
                                prior.b_tau + 0.5 * ss_beta);

  // rho | ...
  double sum_inv_kappa2 = 0.0;
  for (const auto& a : state.atoms) sum_inv_kappa2 += 1.0 / a.kappa2;
  h.rho = sample_gamma(rng, h.a_kappa * L + prior.a_rho,
                       sum_inv_kappa2 + prior.b_rho);
}

}  // namespace mrl
