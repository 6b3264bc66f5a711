#include "mrl/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace mrl {

double sample_normal(RngHandle& rng, double mean, double sd) {
  if (!(sd > 0.0)) throw std::domain_error("sample_normal: sd must be positive");
  // Box-Muller, cosine branch only; no state is cached so the draw count
  // per call is fixed.
  double u1 = rng.uniform();
  double u2 = rng.uniform();
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  return mean + sd * z;
}

double sample_gamma(RngHandle& rng, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::domain_error("sample_gamma: parameters must be positive");
  // Marsaglia-Tsang; shapes below one via the boost T = T_{a+1} U^{1/a}.
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(rng.uniform(), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = std::sqrt(-2.0 * std::log(rng.uniform())) *
          std::cos(2.0 * M_PI * rng.uniform());
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = rng.uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v / rate;
  }
}

double sample_inverse_gamma(RngHandle& rng, double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::domain_error("sample_inverse_gamma: parameters must be positive");
  return scale / sample_gamma(rng, shape, 1.0);
}

double sample_beta(RngHandle& rng, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("sample_beta: parameters must be positive");
  double x = sample_gamma(rng, a, 1.0);
  double y = sample_gamma(rng, b, 1.0);
  return x / (x + y);
}

Eigen::Vector2d sample_mvnormal2(RngHandle& rng, const Eigen::Vector2d& mean,
                                 const Eigen::Matrix2d& cov) {
  Eigen::LLT<Eigen::Matrix2d> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("sample_mvnormal2: covariance not positive-definite");
  Eigen::Vector2d z(sample_normal(rng, 0.0, 1.0), sample_normal(rng, 0.0, 1.0));
  return mean + llt.matrixL() * z;
}

Eigen::Matrix2d sample_inverse_wishart2(RngHandle& rng, double df,
                                        const Eigen::Matrix2d& scale) {
  if (!(df > 1.0))
    throw std::domain_error("sample_inverse_wishart2: df must exceed dimension - 1");
  Eigen::LLT<Eigen::Matrix2d> llt(scale.inverse());
  if (llt.info() != Eigen::Success)
    throw std::domain_error("sample_inverse_wishart2: scale not positive-definite");
  // Bartlett decomposition of W ~ Wishart(df, scale^{-1}); result is W^{-1}.
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  A(0, 0) = std::sqrt(sample_gamma(rng, 0.5 * df, 0.5));
  A(1, 1) = std::sqrt(sample_gamma(rng, 0.5 * (df - 1.0), 0.5));
  A(1, 0) = sample_normal(rng, 0.0, 1.0);
  Eigen::Matrix2d L = llt.matrixL() * A;
  Eigen::Matrix2d W = L * L.transpose();
  return W.inverse();
}

BivBetaDraw sample_kotz_bivariate_beta(RngHandle& rng, double alpha, double b) {
  if (!(alpha > 0.0) || !(b > 0.0 && b < 1.0))
    throw std::domain_error("sample_kotz_bivariate_beta: need alpha > 0 and b in (0,1)");
  BivBetaDraw d;
  d.u = sample_beta(rng, alpha, 1.0 - b);
  d.v = sample_beta(rng, alpha, 1.0 - b);
  d.w = sample_beta(rng, 1.0 + alpha - b, b);
  d.zeta_c = d.u * d.w;
  d.zeta_t = d.v * d.w;
  return d;
}

double sample_truncated_beta(RngHandle& rng, double a, double b, double lo,
                             double hi, bool* degenerate) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("sample_truncated_beta: parameters must be positive");
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
    throw std::domain_error("sample_truncated_beta: need 0 <= lo < hi <= 1");
  if (degenerate) *degenerate = false;
  if (hi - lo < 1e-14) {
    if (degenerate) *degenerate = true;
    return 0.5 * (lo + hi);
  }
  double plo = inc_beta(a, b, lo);
  double phi = inc_beta(a, b, hi);
  if (phi - plo < 1e-300) {
    // Restricted mass underflowed: return the endpoint nearest the mode so
    // the sampler does not stall on an extreme slice interval.
    if (degenerate) *degenerate = true;
    double mode = (a >= 1.0 && b >= 1.0 && a + b > 2.0) ? (a - 1.0) / (a + b - 2.0)
                                                        : (a < b ? 0.0 : 1.0);
    return std::fabs(lo - mode) <= std::fabs(hi - mode) ? std::nextafter(lo, hi)
                                                        : std::nextafter(hi, lo);
  }
  double u = rng.uniform(plo, phi);
  double x = inc_beta_inv(a, b, u);
  // Keep the draw strictly inside the interval.
  if (x <= lo) x = std::nextafter(lo, hi);
  if (x >= hi) x = std::nextafter(hi, lo);
  return x;
}

}  // namespace mrl
