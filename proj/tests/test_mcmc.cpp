#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mrl/mcmc.hpp"
#include "mrl/special.hpp"

using namespace mrl;

namespace {

MixtureState blank_state(int L, int n_groups) {
  MixtureState s;
  s.atoms.resize(L);
  s.config.resize(n_groups);
  s.sticks.weights.assign(n_groups, std::vector<double>(L, 1.0 / L));
  return s;
}

struct Moments {
  double mean, var, se;
};

Moments moments(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  const double m = s / x.size();
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double var = ss / (x.size() - 1);
  return {m, var, std::sqrt(var / x.size())};
}

}  // namespace

TEST_CASE("prior config validation") {
  DpmmPriorConfig p;
  CHECK_NOTHROW(p.validate());
  p.L = 1;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p.L = 40;
  p.a_Sigma = 3.0;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
}

TEST_CASE("settings validation") {
  McmcSettings s;
  CHECK_NOTHROW(s.validate());
  CHECK(s.effective_adapt_until() == s.burn_in);
  s.adapt_until = s.burn_in + 1;
  CHECK_THROWS_AS(s.validate(), std::domain_error);
  s.adapt_until = -1;
  s.burn_in = s.iterations;
  CHECK_THROWS_AS(s.validate(), std::domain_error);
}

TEST_CASE("from_dataset splits rows by group") {
  Dataset d;
  d.has_group = true;
  d.rows = {{1.0, false, std::nullopt, Group::C},
            {2.0, false, std::nullopt, Group::T},
            {3.0, true, std::nullopt, Group::C}};
  auto sd = SamplerData::from_dataset(d, 2);
  CHECK(sd.by_group[0].size() == 2);
  CHECK(sd.by_group[1].size() == 1);
  CHECK(sd.total_size() == 3);
  Dataset ung;
  ung.rows = d.rows;
  CHECK_THROWS_AS(SamplerData::from_dataset(ung, 2), std::domain_error);
}

TEST_CASE("inactive atoms are refreshed from the baseline measure") {
  RngHandle rng(101);
  SamplerData data;
  data.by_group.resize(1);
  DpmmPriorConfig prior;
  const int L = 4;
  auto state = blank_state(L, 1);
  state.hyper.mu = Eigen::Vector2d(0.3, -0.7);
  state.hyper.sigma = 0.5 * Eigen::Matrix2d::Identity();
  state.hyper.lambda = 2.0;
  state.hyper.tau2 = 0.25;
  state.hyper.rho = 2.0;
  state.hyper.a_kappa = 3.0;
  const int n = 50000;
  std::vector<double> th, be, k2;
  th.reserve(n * L);
  Eigen::Matrix2d pc = 0.01 * Eigen::Matrix2d::Identity();
  for (int it = 0; it < n; ++it) {
    update_atoms(state, data, prior, pc, rng);
    for (const auto& a : state.atoms) {
      th.push_back(a.theta);
      be.push_back(a.beta);
      k2.push_back(a.kappa2);
    }
  }
  auto mt = moments(th);
  CHECK(std::abs(mt.mean - 0.3) < 3.0 * mt.se);
  CHECK(mt.var == doctest::Approx(0.5).epsilon(0.02));
  auto mb = moments(be);
  CHECK(std::abs(mb.mean - 2.0) < 3.0 * mb.se);
  CHECK(mb.var == doctest::Approx(0.25).epsilon(0.02));
  // kappa2 ~ IG(3, 2): mean 1
  auto mk = moments(k2);
  CHECK(std::abs(mk.mean - 1.0) < 4.0 * mk.se);
}

TEST_CASE("beta conditional with one covariate observation is N(0, 1/2)") {
  RngHandle rng(103);
  SamplerData data;
  data.has_covariate = true;
  data.by_group = {{Observation{1.0, false, 0.0, std::nullopt}}};
  DpmmPriorConfig prior;
  auto state = blank_state(2, 1);
  state.config[0] = {0};
  Eigen::Matrix2d pc = 0.04 * Eigen::Matrix2d::Identity();
  const int n = 200000;
  std::vector<double> be;
  be.reserve(n);
  for (int it = 0; it < n; ++it) {
    state.hyper.lambda = 0.0;
    state.hyper.tau2 = 1.0;
    state.atoms[0].kappa2 = 1.0;
    update_atoms(state, data, prior, pc, rng);
    be.push_back(state.atoms[0].beta);
  }
  auto m = moments(be);
  CHECK(std::abs(m.mean) < 3.0 * m.se);
  CHECK(m.var == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("label draw with one component assigns everything to it") {
  RngHandle rng(107);
  SamplerData data;
  data.by_group = {{{1.0, false, std::nullopt, std::nullopt},
                    {2.5, true, std::nullopt, std::nullopt}}};
  auto state = blank_state(2, 1);
  state.config[0] = {1, 1};
  state.sticks.weights[0] = {1.0 - 1e-300, 1e-300};
  state.atoms[0] = state.atoms[1];
  update_config(state, data, rng);
  CHECK(state.config[0][0] == 0);
  CHECK(state.config[0][1] == 0);
}

TEST_CASE("identical atoms make label frequencies track the weights") {
  RngHandle rng(109);
  SamplerData data;
  data.by_group = {{{1.7, false, std::nullopt, std::nullopt}}};
  auto state = blank_state(2, 1);
  state.config[0] = {0};
  state.sticks.weights[0] = {0.3, 0.7};
  const int n = 100000;
  int count0 = 0;
  for (int it = 0; it < n; ++it) {
    update_config(state, data, rng);
    if (state.config[0][0] == 0) ++count0;
  }
  const double p = double(count0) / n;
  CHECK(std::abs(p - 0.3) < 3.0 * std::sqrt(0.3 * 0.7 / n));
}

TEST_CASE("observed rows weight components by the gamma density") {
  RngHandle rng(113);
  const double t = 2.0;
  SamplerData data;
  data.by_group = {{{t, false, std::nullopt, std::nullopt}}};
  auto state = blank_state(2, 1);
  state.config[0] = {0};
  state.sticks.weights[0] = {0.5, 0.5};
  // component 0: Exp(1); component 1: Gamma(shape e, rate 1)
  state.atoms[0].theta = 0.0;
  state.atoms[0].phi = 0.0;
  state.atoms[1].theta = 1.0;
  state.atoms[1].phi = 0.0;
  const double f0 = std::exp(gamma_log_pdf(t, 1.0, 1.0));
  const double f1 = std::exp(gamma_log_pdf(t, std::exp(1.0), 1.0));
  const double p0 = f0 / (f0 + f1);
  const int n = 100000;
  int count0 = 0;
  for (int it = 0; it < n; ++it) {
    update_config(state, data, rng);
    if (state.config[0][0] == 0) ++count0;
  }
  CHECK(std::abs(double(count0) / n - p0) <
        3.0 * std::sqrt(p0 * (1.0 - p0) / n));
}

TEST_CASE("censored rows weight components by the gamma survival") {
  RngHandle rng(127);
  const double t = 3.0;
  SamplerData data;
  data.by_group = {{{t, true, std::nullopt, std::nullopt}}};
  auto state = blank_state(2, 1);
  state.config[0] = {0};
  state.sticks.weights[0] = {0.5, 0.5};
  // Exp(1) vs Exp(0.1): survival e^{-3} vs e^{-0.3}
  state.atoms[0].theta = 0.0;
  state.atoms[0].phi = 0.0;
  state.atoms[1].theta = 0.0;
  state.atoms[1].phi = std::log(0.1);
  const double s0 = std::exp(-t);
  const double s1 = std::exp(-0.1 * t);
  const double p0 = s0 / (s0 + s1);
  const int n = 100000;
  int count0 = 0;
  for (int it = 0; it < n; ++it) {
    update_config(state, data, rng);
    if (state.config[0][0] == 0) ++count0;
  }
  CHECK(std::abs(double(count0) / n - p0) <
        3.0 * std::sqrt(p0 * (1.0 - p0) / n));
}

TEST_CASE("mu conditional collapses onto the atom locations as Sigma -> 0") {
  RngHandle rng(131);
  DpmmPriorConfig prior;
  const int L = 6;
  auto state = blank_state(L, 1);
  for (auto& a : state.atoms) {
    a.theta = 1.0;
    a.phi = 2.0;
    a.kappa2 = 1.0;
  }
  state.hyper.sigma = 1e-6 * Eigen::Matrix2d::Identity();
  update_hypers(state, prior, rng);
  CHECK(state.hyper.mu(0) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(state.hyper.mu(1) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("tau2 conditional is inverse gamma with the beta scatter") {
  RngHandle rng(137);
  DpmmPriorConfig prior;
  prior.b_lambda = 1e-12;  // pins lambda at zero
  const int L = 2;
  auto state = blank_state(L, 1);
  state.atoms[0].beta = 1.0;
  state.atoms[1].beta = -1.0;
  state.atoms[0].kappa2 = state.atoms[1].kappa2 = 1.0;
  const int n = 200000;
  std::vector<double> t2;
  t2.reserve(n);
  for (int it = 0; it < n; ++it) {
    state.hyper.sigma = Eigen::Matrix2d::Identity();
    update_hypers(state, prior, rng);
    t2.push_back(state.hyper.tau2);
  }
  // IG(a_tau + L/2, b_tau + ss/2) = IG(3, 2): mean 1, variance 1
  auto m = moments(t2);
  CHECK(std::abs(m.mean - 1.0) < 3.0 * m.se);
  CHECK(m.var == doctest::Approx(1.0).epsilon(0.05));
}
