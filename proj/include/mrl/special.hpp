#ifndef MRL_SPECIAL_HPP
#define MRL_SPECIAL_HPP

namespace mrl {

// Regularized incomplete gamma functions.  gamma_p is the lower tail
// P(a,x), gamma_q the upper tail Q(a,x) = 1 - P(a,x).  Both are computed
// natively in their own tail (series for x < a+1, continued fraction
// otherwise) so that deep-tail values keep full relative accuracy; the
// relative error target is 1e-12, which matters because mrl values are
// ratios of upper-tail integrals.
double gamma_p(double a, double x);
double gamma_q(double a, double x);
double log_gamma_q(double a, double x);

// Gamma density in shape/rate parameterization.
double gamma_log_pdf(double t, double shape, double rate);
double gamma_cdf(double t, double shape, double rate);
double gamma_survival(double t, double shape, double rate);
double log_gamma_survival(double t, double shape, double rate);

// Regularized incomplete beta I_x(a,b) and its inverse in x.
double inc_beta(double a, double b, double x);
double inc_beta_inv(double a, double b, double p);

double log_beta(double a, double b);
double beta_log_pdf(double x, double a, double b);

double normal_log_pdf(double x, double mean, double var);
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace mrl

#endif
