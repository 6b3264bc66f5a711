#include "mrl/simulation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mrl/distributions.hpp"
#include "mrl/special.hpp"

namespace mrl {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Localized component weights q_j(x) over the covariate normal factors.
std::vector<double> covariate_weights(
    const std::vector<GammaNormalComponent>& comps, double x) {
  std::vector<double> q(comps.size());
  double total = 0.0;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    q[j] = comps[j].weight *
           std::exp(normal_log_pdf(x, comps[j].mean,
                                   comps[j].sd * comps[j].sd));
    total += q[j];
  }
  for (double& v : q) v /= total;
  return q;
}

std::size_t pick_component(RngHandle& rng, const std::vector<double>& w) {
  double u = rng.uniform();
  for (std::size_t j = 0; j + 1 < w.size(); ++j) {
    u -= w[j];
    if (u <= 0.0) return j;
  }
  return w.size() - 1;
}

}  // namespace

double GammaNormalPopulation::density(double t, double x) const {
  const auto q = covariate_weights(components, x);
  double f = 0.0;
  for (std::size_t j = 0; j < components.size(); ++j)
    f += q[j] *
         std::exp(gamma_log_pdf(t, components[j].shape, components[j].rate));
  return f;
}

double GammaNormalPopulation::survival(double t, double x) const {
  const auto q = covariate_weights(components, x);
  double s = 0.0;
  for (std::size_t j = 0; j < components.size(); ++j)
    s += q[j] * gamma_survival(t, components[j].shape, components[j].rate);
  return s;
}

double GammaNormalPopulation::mrl(double t, double x) const {
  const auto q = covariate_weights(components, x);
  double s_mix = 0.0, num = 0.0;
  for (std::size_t j = 0; j < components.size(); ++j) {
    const double a = components[j].shape, r = components[j].rate;
    const double s = gamma_survival(t, a, r);
    s_mix += q[j] * s;
    // int_t^inf S_j = (a/r) Q(a+1, rt) - ... expressed directly:
    num += q[j] * ((a / r) * gamma_q(a + 1.0, r * t) - t * s);
  }
  if (!(s_mix > 1e-300)) return kNan;
  return num / s_mix;
}

double GammaNormalPopulation::mean_regression(double x) const {
  const auto q = covariate_weights(components, x);
  double m = 0.0;
  for (std::size_t j = 0; j < components.size(); ++j)
    m += q[j] * components[j].shape / components[j].rate;
  return m;
}

Observation GammaNormalPopulation::sample(RngHandle& rng) const {
  std::vector<double> w(components.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = components[j].weight;
  const auto& c = components[pick_component(rng, w)];
  Observation obs;
  obs.covariate = sample_normal(rng, c.mean, c.sd);
  obs.time = sample_gamma(rng, c.shape, c.rate);
  return obs;
}

double WeibullMixture::density(double t) const {
  if (t <= 0.0) return 0.0;
  double f = 0.0;
  for (const auto& c : components) {
    const double z = std::pow(t / c.scale, c.shape);
    f += c.weight * (c.shape / t) * z * std::exp(-z);
  }
  return f;
}

double WeibullMixture::survival(double t) const {
  if (t <= 0.0) return 1.0;
  double s = 0.0;
  for (const auto& c : components)
    s += c.weight * std::exp(-std::pow(t / c.scale, c.shape));
  return s;
}

double WeibullMixture::mrl(double t) const {
  const double s_mix = survival(t);
  if (!(s_mix > 1e-300)) return kNan;
  double tail = 0.0;  // int_t^inf S_mix
  for (const auto& c : components) {
    const double inv = 1.0 / c.shape;
    tail += c.weight * (c.scale * inv) * std::exp(std::lgamma(inv)) *
            gamma_q(inv, std::pow(t / c.scale, c.shape));
  }
  return tail / s_mix;
}

double WeibullMixture::sample(RngHandle& rng) const {
  std::vector<double> w(components.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = components[j].weight;
  const auto& c = components[pick_component(rng, w)];
  return c.scale * std::pow(-std::log(rng.uniform()), 1.0 / c.shape);
}

GammaNormalPopulation covariate_benchmark_population() {
  return {{{45.0, 3.0, -12.0, 6.0, 0.28},
           {3.0, 0.2, -8.0, 5.0, 0.10},
           {125.0, 3.8, 0.0, 4.0, 0.25},
           {0.4, 0.2, 12.0, 5.0, 0.21},
           {0.5, 0.3, 18.0, 3.0, 0.11},
           {4.0, 5.0, 21.0, 2.0, 0.05}}};
}

std::pair<WeibullMixture, WeibullMixture> two_group_benchmark_1() {
  WeibullMixture c{{{2.0, 8.0, 0.70},
                    {3.0, 10.0, 0.10},
                    {4.0, 30.0, 0.05},
                    {8.0, 40.0, 0.15}}};
  WeibullMixture t{{{2.0, 8.0, 0.50},
                    {3.0, 10.0, 0.05},
                    {4.0, 30.0, 0.025},
                    {8.0, 40.0, 0.425}}};
  return {c, t};
}

std::pair<WeibullMixture, WeibullMixture> two_group_benchmark_2() {
  WeibullMixture c{{{2.0, 4.0, 0.50},
                    {0.6, 4.0, 0.05},
                    {5.0, 15.0, 0.025},
                    {8.0, 30.0, 0.425}}};
  WeibullMixture t{{{0.6, 1.0, 0.02},
                    {2.0, 4.0, 0.02},
                    {5.0, 15.0, 0.66},
                    {2.0, 8.0, 0.20},
                    {4.0, 30.0, 0.10}}};
  return {c, t};
}

Dataset gen_covariate_benchmark(std::size_t n, std::uint64_t seed) {
  const auto pop = covariate_benchmark_population();
  RngHandle rng(seed);
  std::vector<Observation> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(pop.sample(rng));
  auto report = validate_dataset(rows);
  if (!report.ok) throw std::runtime_error("generated dataset invalid");
  return report.dataset;
}

namespace {

Dataset gen_two_group(const WeibullMixture& pc, const WeibullMixture& pt,
                      std::size_t n_c, std::size_t n_t, std::uint64_t seed) {
  RngHandle rng(seed);
  std::vector<Observation> rows;
  rows.reserve(n_c + n_t);
  for (std::size_t i = 0; i < n_c; ++i) {
    Observation obs;
    obs.time = pc.sample(rng);
    obs.group = Group::C;
    rows.push_back(obs);
  }
  for (std::size_t i = 0; i < n_t; ++i) {
    Observation obs;
    obs.time = pt.sample(rng);
    obs.group = Group::T;
    rows.push_back(obs);
  }
  auto report = validate_dataset(rows);
  if (!report.ok) throw std::runtime_error("generated dataset invalid");
  return report.dataset;
}

}  // namespace

Dataset gen_two_group_benchmark_1(std::size_t n_c, std::size_t n_t,
                                  std::uint64_t seed) {
  if (n_c == 0) n_c = 250;
  if (n_t == 0) n_t = 100;
  const auto [pc, pt] = two_group_benchmark_1();
  return gen_two_group(pc, pt, n_c, n_t, seed);
}

Dataset gen_two_group_benchmark_2(std::size_t n_c, std::size_t n_t,
                                  std::uint64_t seed) {
  if (n_c == 0) n_c = 250;
  if (n_t == 0) n_t = 250;
  const auto [pc, pt] = two_group_benchmark_2();
  return gen_two_group(pc, pt, n_c, n_t, seed);
}

Dataset apply_censoring(const Dataset& data, const CensoringMechanism& mech,
                        std::uint64_t seed) {
  if (mech.kind == CensoringMechanism::Kind::none) return data;
  if (mech.kind == CensoringMechanism::Kind::uniform &&
      !(mech.lo >= 0.0 && mech.lo < mech.hi))
    throw std::invalid_argument("uniform censoring needs 0 <= lo < hi");
  if (mech.kind == CensoringMechanism::Kind::fixed && !(mech.hi > 0.0))
    throw std::invalid_argument("fixed censoring time must be positive");
  RngHandle rng(seed);
  std::vector<Observation> rows = data.rows;
  for (auto& obs : rows) {
    const double c = mech.kind == CensoringMechanism::Kind::uniform
                         ? rng.uniform(mech.lo, mech.hi)
                         : mech.hi;
    if (c < obs.time) {
      obs.time = c;
      obs.censored = true;
    }
  }
  auto report = validate_dataset(rows);
  if (!report.ok) throw std::runtime_error("censored dataset invalid");
  return report.dataset;
}

}  // namespace mrl
