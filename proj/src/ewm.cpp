#include "mrl/ewm.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "mrl/distributions.hpp"
#include "mrl/rng.hpp"
#include "mrl/special.hpp"

namespace mrl {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double cumulative_hazard_base(const EwmParams& p, double t, double x) {
  return std::pow(t, p.alpha) * std::exp(p.beta0 + p.beta1 * x);
}

}  // namespace

double ewm_survival(const EwmParams& p, double t, double x) {
  if (t <= 0.0) return 1.0;
  const double a = cumulative_hazard_base(p, t, x);
  // -expm1(theta * log1p(-e^-a)) is stable in both tails.
  return -std::expm1(p.theta * std::log1p(-std::exp(-a)));
}

double ewm_log_density(const EwmParams& p, double t, double x) {
  if (t <= 0.0) return -std::numeric_limits<double>::infinity();
  const double eta = p.beta0 + p.beta1 * x;
  const double a = std::pow(t, p.alpha) * std::exp(eta);
  return std::log(p.theta) + std::log(p.alpha) +
         (p.alpha - 1.0) * std::log(t) + eta +
         (p.theta - 1.0) * std::log1p(-std::exp(-a)) - a;
}

double ewm_mrl(const EwmParams& p, double t, double x) {
  const double st = ewm_survival(p, t, x);
  if (!(st > 1e-300)) return kNan;
  double hi = std::max(t, 1.0);
  while (ewm_survival(p, hi, x) > 1e-16 * st && hi < 1e12) hi *= 2.0;
  // Composite Simpson over [t, hi].
  const int n = 4096;  // even
  const double h = (hi - t) / n;
  double acc = ewm_survival(p, t, x) + ewm_survival(p, hi, x);
  for (int i = 1; i < n; ++i)
    acc += (i % 2 == 1 ? 4.0 : 2.0) * ewm_survival(p, t + i * h, x);
  return acc * h / 3.0 / st;
}

double ewm_obs_loglik(const EwmParams& p, const Observation& obs,
                      bool use_covariate) {
  // Regression input: the covariate when present, else the group indicator
  // (0 for C, 1 for T).
  double x = 0.0;
  if (use_covariate) {
    if (obs.covariate)
      x = *obs.covariate;
    else if (obs.group)
      x = obs.group == Group::T ? 1.0 : 0.0;
  }
  if (obs.censored) {
    const double s = ewm_survival(p, obs.time, x);
    return s > 0.0 ? std::log(s) : -std::numeric_limits<double>::infinity();
  }
  return ewm_log_density(p, obs.time, x);
}

EwmPriors elicit_priors(double t10, double t50, double t90) {
  if (!(0.0 < t10 && t10 < t50 && t50 < t90))
    throw std::invalid_argument("elicited quantiles must be increasing");
  // F(t_q) = q gives theta * log(1 - e^{-A_q}) = log q with
  // A_q = t_q^alpha e^{beta0}.  Ratios against the median eliminate theta;
  // 2-d Newton (numeric Jacobian) in (alpha, beta0).
  const double lq[3] = {std::log(0.1), std::log(0.5), std::log(0.9)};
  const double tq[3] = {t10, t50, t90};
  auto log_g = [&](double alpha, double beta0, int i) {
    const double a = std::pow(tq[i], alpha) * std::exp(beta0);
    if (!(a > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::log1p(-std::exp(-a));
  };
  auto residual = [&](double alpha, double beta0, double* f) {
    const double g1 = log_g(alpha, beta0, 1);
    f[0] = log_g(alpha, beta0, 0) / g1 - lq[0] / lq[1];
    f[1] = log_g(alpha, beta0, 2) / g1 - lq[2] / lq[1];
  };
  double alpha = 1.0;
  double beta0 = std::log(std::log(2.0)) - std::log(t50);
  double f[2];
  residual(alpha, beta0, f);
  bool ok = false;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(f[0]) < 1e-12 && std::abs(f[1]) < 1e-12) {
      ok = true;
      break;
    }
    const double ha = 1e-6 * std::max(1.0, std::abs(alpha));
    const double hb = 1e-6 * std::max(1.0, std::abs(beta0));
    double fa[2], fb[2];
    residual(alpha + ha, beta0, fa);
    residual(alpha, beta0 + hb, fb);
    const double j00 = (fa[0] - f[0]) / ha, j01 = (fb[0] - f[0]) / hb;
    const double j10 = (fa[1] - f[1]) / ha, j11 = (fb[1] - f[1]) / hb;
    const double det = j00 * j11 - j01 * j10;
    if (!(std::abs(det) > 1e-300))
      throw std::runtime_error("elicit_priors: singular Jacobian");
    double da = -(j11 * f[0] - j01 * f[1]) / det;
    double db = -(-j10 * f[0] + j00 * f[1]) / det;
    // Cap the step so a bad far-field Jacobian cannot launch the iterate
    // into the flat tail of the residual surface.
    const double cap = std::max(std::abs(da), std::abs(db));
    if (cap > 1.0) {
      da /= cap;
      db /= cap;
    }
    // Damped step: keep alpha positive and require a finite residual that
    // does not grow.
    const double norm0 = std::hypot(f[0], f[1]);
    double scale = 1.0;
    while (alpha + scale * da <= 0.0) scale *= 0.5;
    double fn[2];
    for (int bt = 0; bt < 40; ++bt) {
      residual(alpha + scale * da, beta0 + scale * db, fn);
      if (std::isfinite(fn[0]) && std::isfinite(fn[1]) &&
          std::hypot(fn[0], fn[1]) <= norm0 * (1.0 + 1e-12))
        break;
      scale *= 0.5;
    }
    alpha += scale * da;
    beta0 += scale * db;
    residual(alpha, beta0, f);
  }
  if (!ok && !(std::abs(f[0]) < 1e-8 && std::abs(f[1]) < 1e-8))
    throw std::runtime_error("elicit_priors: Newton did not converge");
  const double theta = lq[1] / log_g(alpha, beta0, 1);
  if (!(theta > 0.0)) throw std::runtime_error("elicit_priors: theta <= 0");
  EwmPriors pr;
  pr.alpha_mean = alpha;
  pr.theta_mean = theta;
  pr.beta0_mean = beta0;
  return pr;
}

EwmChain run_chain_ewm(const Dataset& data, const EwmPriors& priors,
                       const McmcSettings& settings) {
  settings.validate();
  const bool use_cov = data.has_covariate || data.has_group;
  const int adapt_until =
      settings.adapt_until < 0 ? settings.burn_in : settings.adapt_until;

  // State on (log alpha, log theta, beta0, beta1); exponential priors pick
  // up the log Jacobian.
  auto log_target = [&](const double z[4]) {
    EwmParams p{std::exp(z[0]), std::exp(z[1]), z[2], z[3]};
    double lp = -p.alpha / priors.alpha_mean + z[0] -
                p.theta / priors.theta_mean + z[1] +
                normal_log_pdf(z[2], priors.beta0_mean,
                               priors.beta0_sd * priors.beta0_sd);
    if (use_cov)
      lp += normal_log_pdf(z[3], priors.beta1_mean,
                           priors.beta1_sd * priors.beta1_sd);
    for (const auto& obs : data.rows) lp += ewm_obs_loglik(p, obs, use_cov);
    return lp;
  };

  RngHandle rng(settings.seed);
  double z[4] = {std::log(priors.alpha_mean), std::log(priors.theta_mean),
                 priors.beta0_mean, 0.0};
  double lt = log_target(z);
  const double base_sd[4] = {0.1, 0.1, 0.2, 0.05};
  double scale = 1.0;
  int win_prop = 0, win_acc = 0;
  MhStats stats;

  EwmChain chain;
  chain.seed = settings.seed;
  chain.iterations = settings.iterations;
  chain.burn_in = settings.burn_in;
  chain.thinning = settings.thinning;
  chain.has_covariate = use_cov;
  chain.data_hash = dataset_hash(data);

  const int n_dim = use_cov ? 4 : 3;
  for (int iter = 0; iter < settings.iterations; ++iter) {
    double zp[4] = {z[0], z[1], z[2], z[3]};
    for (int d = 0; d < n_dim; ++d)
      zp[d] += sample_normal(rng, 0.0, scale * base_sd[d]);
    const double ltp = log_target(zp);
    bool accept = false;
    if (std::isfinite(ltp) &&
        std::log(rng.uniform()) < ltp - lt) {
      accept = true;
      for (int d = 0; d < 4; ++d) z[d] = zp[d];
      lt = ltp;
    }
    ++win_prop;
    if (accept) ++win_acc;
    if (iter >= settings.burn_in) {
      ++stats.proposed;
      if (accept) ++stats.accepted;
    }
    if (iter < adapt_until && win_prop == 100) {
      const double rate = static_cast<double>(win_acc) / win_prop;
      scale *= std::exp(rate - 0.3);
      scale = std::min(std::max(scale, 1e-3), 1e3);
      win_prop = win_acc = 0;
    }
    if (iter >= settings.burn_in &&
        (iter - settings.burn_in) % settings.thinning == 0)
      chain.draws.push_back(
          {std::exp(z[0]), std::exp(z[1]), z[2], z[3]});
  }
  chain.accept_rate = stats.rate();
  return chain;
}

void write_ewm_chain(const std::string& path, const EwmChain& chain) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  nlohmann::json meta{{"model", "ewm"},
                      {"seed", chain.seed},
                      {"iterations", chain.iterations},
                      {"burn_in", chain.burn_in},
                      {"thinning", chain.thinning},
                      {"has_covariate", chain.has_covariate},
                      {"data_hash", chain.data_hash},
                      {"accept_rate", chain.accept_rate}};
  out << meta.dump() << '\n';
  for (const auto& d : chain.draws)
    out << nlohmann::json::array({d.alpha, d.theta, d.beta0, d.beta1}).dump()
        << '\n';
}

EwmChain read_ewm_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty chain file " + path);
  const auto meta = nlohmann::json::parse(line);
  if (meta.at("model").get<std::string>() != "ewm")
    throw std::runtime_error("not an ewm chain: " + path);
  EwmChain chain;
  chain.seed = meta.at("seed").get<std::uint64_t>();
  chain.iterations = meta.at("iterations").get<int>();
  chain.burn_in = meta.at("burn_in").get<int>();
  chain.thinning = meta.at("thinning").get<int>();
  chain.has_covariate = meta.at("has_covariate").get<bool>();
  chain.data_hash = meta.at("data_hash").get<std::uint64_t>();
  chain.accept_rate = meta.at("accept_rate").get<double>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    chain.draws.push_back({j.at(0).get<double>(), j.at(1).get<double>(),
                           j.at(2).get<double>(), j.at(3).get<double>()});
  }
  return chain;
}

}  // namespace mrl
