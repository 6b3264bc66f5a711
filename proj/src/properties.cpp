#include "mrl/properties.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mrl/distributions.hpp"
#include "mrl/state.hpp"

namespace mrl {

namespace {

// E[zeta_C zeta_T] for one dependent stick pair.
double cross_second_moment(double alpha, double b) {
  return alpha * alpha * (2.0 + alpha - b) /
         ((alpha + 1.0 - b) * (alpha + 1.0) * (alpha + 2.0));
}

// sum_l E[w_lC w_lT]: the shared fraction behind the measure-level and
// mean-functional covariances.
double cross_weight_sum(double alpha, double b) {
  return ((alpha - 2.0) * b + alpha + 2.0) /
         (alpha * (2.0 * alpha - 3.0 * b + 5.0) - 2.0 * b + 2.0);
}

void check_alpha_b(double alpha, double b) {
  if (!(alpha > 0.0) || !(b >= 0.0) || !(b < 1.0))
    throw std::invalid_argument("require alpha > 0 and b in [0, 1)");
}

double lognormal_moment(const Eigen::Vector2d& t, const Eigen::Vector2d& mu,
                        const Eigen::Matrix2d& sigma) {
  return std::exp(t.dot(mu) + 0.5 * t.dot(sigma * t));
}

}  // namespace

double zeta_covariance(double alpha, double b) {
  check_alpha_b(alpha, b);
  const double a1 = alpha + 1.0;
  return alpha * alpha * b /
         ((alpha + 1.0 - b) * a1 * a1 * (alpha + 2.0));
}

double zeta_correlation(double alpha, double b) {
  check_alpha_b(alpha, b);
  return alpha * b / (alpha + 1.0 - b);
}

double weight_covariance(double alpha, double b, int level) {
  check_alpha_b(alpha, b);
  if (level < 1) throw std::invalid_argument("level is 1-based");
  const double a1 = alpha + 1.0;
  const double e_zz = cross_second_moment(alpha, b);
  const double e_11 = 1.0 - 2.0 * alpha / a1 + e_zz;  // E[(1-zC)(1-zT)]
  const double m2 = 1.0 / (a1 * a1);                  // E[w_l]^2 lead term
  return e_11 * std::pow(e_zz, level - 1) -
         m2 * std::pow(alpha * alpha * m2, level - 1);
}

double weight_variance(double alpha, int level) {
  if (!(alpha > 0.0)) throw std::invalid_argument("require alpha > 0");
  if (level < 1) throw std::invalid_argument("level is 1-based");
  const double a1 = alpha + 1.0;
  const double a2 = alpha + 2.0;
  return 2.0 / (a1 * a2) * std::pow(alpha / a2, level - 1) -
         (1.0 / (a1 * a1)) * std::pow(alpha * alpha / (a1 * a1), level - 1);
}

double measure_correlation(double alpha, double b) {
  check_alpha_b(alpha, b);
  return (alpha + 1.0) * cross_weight_sum(alpha, b);
}

double measure_covariance(double alpha, double b, double g0_mass) {
  check_alpha_b(alpha, b);
  return g0_mass * (1.0 - g0_mass) * cross_weight_sum(alpha, b);
}

double mean_functional_covariance(double alpha, double b,
                                  const Eigen::Vector2d& mu,
                                  const Eigen::Matrix2d& sigma) {
  check_alpha_b(alpha, b);
  const Eigen::Vector2d t2(2.0, -2.0), t3(1.0, -1.0);
  const double m1 = lognormal_moment(t3, mu, sigma);
  return (lognormal_moment(t2, mu, sigma) - m1 * m1) *
         cross_weight_sum(alpha, b);
}

double mean_functional_variance(const Eigen::Vector2d& mu,
                                const Eigen::Matrix2d& sigma) {
  const Eigen::Vector2d t1(1.0, -2.0), t2(2.0, -2.0), t3(1.0, -1.0);
  const double m1 = lognormal_moment(t3, mu, sigma);
  return lognormal_moment(t1, mu, sigma) + lognormal_moment(t2, mu, sigma) -
         m1 * m1;
}

// ---------------------------------------------------------------------------

McEstimate mc_mean(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += v;
  const double m = s / n;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

McEstimate mc_covariance(std::span<const double> x,
                         std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("mc_covariance: size mismatch");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  // The centered products are iid up to O(1/n); their spread gives the SE.
  double s = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = (x[i] - mx) * (y[i] - my);
    s += p;
    ss += p * p;
  }
  const double m = s / n;
  const double var_p = ss / n - m * m;
  return {s / (n - 1.0), std::sqrt(var_p / n)};
}

McEstimate mc_correlation(std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("mc_correlation: size mismatch");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double r = sxy / std::sqrt(sxx * syy);
  const double sdx = std::sqrt(sxx / n), sdy = std::sqrt(syy / n);
  // Influence function of the correlation coefficient.
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double zx = (x[i] - mx) / sdx, zy = (y[i] - my) / sdy;
    const double inf = zx * zy - 0.5 * r * (zx * zx + zy * zy);
    ss += inf * inf;
  }
  return {r, std::sqrt(ss / n) / std::sqrt(n)};
}

McEstimate batch_means(std::span<const double> x, int n_batches) {
  if (n_batches < 2 || x.size() < static_cast<std::size_t>(2 * n_batches))
    throw std::invalid_argument("batch_means: chain too short");
  const std::size_t batch = x.size() / static_cast<std::size_t>(n_batches);
  const std::size_t used = batch * static_cast<std::size_t>(n_batches);
  std::vector<double> bm(static_cast<std::size_t>(n_batches), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    bm[i / batch] += x[i];
    total += x[i];
  }
  for (double& v : bm) v /= static_cast<double>(batch);
  const double mean = total / static_cast<double>(used);
  double ss = 0.0;
  for (double v : bm) ss += (v - mean) * (v - mean);
  const double var_bm = ss / static_cast<double>(n_batches - 1);
  return {mean, std::sqrt(var_bm / static_cast<double>(n_batches))};
}

// ---------------------------------------------------------------------------

ZetaMcMoments mc_zeta_moments(double alpha, double b, std::size_t n,
                              RngHandle& rng) {
  check_alpha_b(alpha, b);
  std::vector<double> zc(n), zt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = sample_kotz_bivariate_beta(rng, alpha, b);
    zc[i] = d.zeta_c;
    zt[i] = d.zeta_t;
  }
  ZetaMcMoments out;
  out.mean_c = mc_mean(zc);
  out.mean_t = mc_mean(zt);
  out.var_c = mc_covariance(zc, zc);
  out.var_t = mc_covariance(zt, zt);
  out.cov = mc_covariance(zc, zt);
  out.cor = mc_correlation(zc, zt);
  return out;
}

WeightMcMoments mc_weight_moments(double alpha, double b, int level,
                                  std::size_t n, int trunc_level,
                                  RngHandle& rng) {
  check_alpha_b(alpha, b);
  if (level < 1 || level >= trunc_level)
    throw std::invalid_argument("need 1 <= level < trunc_level");
  std::vector<double> wc(n), wt(n);
  for (std::size_t i = 0; i < n; ++i) {
    double prod_c = 1.0, prod_t = 1.0;
    for (int l = 1; l < level; ++l) {
      const auto d = sample_kotz_bivariate_beta(rng, alpha, b);
      prod_c *= d.zeta_c;
      prod_t *= d.zeta_t;
    }
    const auto d = sample_kotz_bivariate_beta(rng, alpha, b);
    wc[i] = (1.0 - d.zeta_c) * prod_c;
    wt[i] = (1.0 - d.zeta_t) * prod_t;
  }
  return {mc_covariance(wc, wc), mc_covariance(wt, wt), mc_covariance(wc, wt)};
}

MeasureMcMoments mc_measure_moments(double alpha, double b, double g0_mass,
                                    std::size_t n, int trunc_level,
                                    RngHandle& rng) {
  check_alpha_b(alpha, b);
  if (trunc_level < 2) throw std::invalid_argument("trunc_level >= 2");
  std::vector<double> gc(n), gt(n);
  const std::size_t n_sticks = static_cast<std::size_t>(trunc_level) - 1;
  // Residual stick mass below this threshold is beyond double resolution of
  // the accumulated sums, so the remaining levels are folded into the
  // remainder weight instead of being simulated.
  constexpr double kResidualCutoff = 1e-20;
  for (std::size_t i = 0; i < n; ++i) {
    double mc = 0.0, mt = 0.0;
    double prod_c = 1.0, prod_t = 1.0;
    for (std::size_t l = 0; l < n_sticks; ++l) {
      const auto d = sample_kotz_bivariate_beta(rng, alpha, b);
      const double wc = (1.0 - d.zeta_c) * prod_c;
      const double wt = (1.0 - d.zeta_t) * prod_t;
      prod_c *= d.zeta_c;
      prod_t *= d.zeta_t;
      // Shared atom: a uniform mark decides membership in the set.
      if (rng.uniform() < g0_mass) {
        mc += wc;
        mt += wt;
      }
      if (prod_c < kResidualCutoff && prod_t < kResidualCutoff) break;
    }
    // Remainder weight carries its own shared atom.
    if (rng.uniform() < g0_mass) {
      mc += prod_c;
      mt += prod_t;
    }
    gc[i] = mc;
    gt[i] = mt;
  }
  return {mc_covariance(gc, gt), mc_correlation(gc, gt)};
}

MeanFunctionalMcMoments mc_mean_functional_moments(
    double alpha, double b, const Eigen::Vector2d& mu,
    const Eigen::Matrix2d& sigma, std::size_t n, int trunc_level,
    RngHandle& rng) {
  check_alpha_b(alpha, b);
  if (trunc_level < 2) throw std::invalid_argument("trunc_level >= 2");
  std::vector<double> tc(n), tt(n);
  const std::size_t n_sticks = static_cast<std::size_t>(trunc_level) - 1;
  for (std::size_t i = 0; i < n; ++i) {
    // Shared atoms; each group draws one survival time from its mixture.
    // Walk the stick levels once, stopping as soon as both groups have
    // selected a component; only the selected atoms are ever needed, and a
    // level selected by both groups shares one atom.
    double uc = rng.uniform(), ut = rng.uniform();
    double prod_c = 1.0, prod_t = 1.0;
    bool have_c = false, have_t = false;
    Eigen::Vector2d atom_c = Eigen::Vector2d::Zero();
    Eigen::Vector2d atom_t = Eigen::Vector2d::Zero();
    for (std::size_t l = 0; l < n_sticks && !(have_c && have_t); ++l) {
      const auto d = sample_kotz_bivariate_beta(rng, alpha, b);
      const double wc = (1.0 - d.zeta_c) * prod_c;
      const double wt = (1.0 - d.zeta_t) * prod_t;
      prod_c *= d.zeta_c;
      prod_t *= d.zeta_t;
      const bool pick_c = !have_c && (uc -= wc) <= 0.0;
      const bool pick_t = !have_t && (ut -= wt) <= 0.0;
      if (pick_c || pick_t) {
        const Eigen::Vector2d atom = sample_mvnormal2(rng, mu, sigma);
        if (pick_c) {
          atom_c = atom;
          have_c = true;
        }
        if (pick_t) {
          atom_t = atom;
          have_t = true;
        }
      }
    }
    // The remainder level is shared as well.
    if (!have_c || !have_t) {
      const Eigen::Vector2d atom = sample_mvnormal2(rng, mu, sigma);
      if (!have_c) atom_c = atom;
      if (!have_t) atom_t = atom;
    }
    tc[i] = sample_gamma(rng, std::exp(atom_c(0)), std::exp(atom_c(1)));
    tt[i] = sample_gamma(rng, std::exp(atom_t(0)), std::exp(atom_t(1)));
  }
  return {mc_covariance(tc, tc), mc_covariance(tt, tt), mc_covariance(tc, tt)};
}

}  // namespace mrl
