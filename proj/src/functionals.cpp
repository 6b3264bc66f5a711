#include "mrl/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "mrl/special.hpp"

namespace mrl {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
// Below this mixture survival the mrl and hazard are numerically meaningless.
constexpr double kDrawTailFloor = 1e-12;

// Mixture weights at x0: p_l times the covariate density, renormalized.
// Without x0 these are just the stick weights.
std::vector<double> local_weights(const MixtureState& draw, int group,
                                  std::optional<double> x0) {
  const auto& p = draw.sticks.weights.at(static_cast<std::size_t>(group));
  std::vector<double> q(p.begin(), p.end());
  if (x0) {
    double total = 0.0;
    for (std::size_t l = 0; l < q.size(); ++l) {
      const auto& a = draw.atoms[l];
      q[l] *= std::exp(normal_log_pdf(*x0, a.beta, a.kappa2));
      total += q[l];
    }
    if (total <= 0.0) {
      std::fill(q.begin(), q.end(), kNan);
      return q;
    }
    for (double& w : q) w /= total;
  }
  return q;
}

// Closed-form mrl of a gamma(shape a, rate r) kernel at t.
double gamma_kernel_mrl(double shape, double rate, double t) {
  const double s = gamma_q(shape, rate * t);
  if (s <= 0.0) return kNan;
  return (shape / rate) * gamma_q(shape + 1.0, rate * t) / s - t;
}

// Integral of the gamma(shape, rate) survival over [0, t].
double gamma_kernel_int_survival(double shape, double rate, double t) {
  return (shape / rate) * gamma_p(shape + 1.0, rate * t) +
         t * gamma_q(shape, rate * t);
}

}  // namespace

double conditional_density(const MixtureState& draw, int group, double t,
                           std::optional<double> x0) {
  const auto q = local_weights(draw, group, x0);
  double f = 0.0;
  for (std::size_t l = 0; l < q.size(); ++l) {
    const auto& a = draw.atoms[l];
    f += q[l] * std::exp(gamma_log_pdf(t, std::exp(a.theta), std::exp(a.phi)));
  }
  return f;
}

double conditional_survival(const MixtureState& draw, int group, double t,
                            std::optional<double> x0) {
  const auto q = local_weights(draw, group, x0);
  double s = 0.0;
  for (std::size_t l = 0; l < q.size(); ++l) {
    const auto& a = draw.atoms[l];
    s += q[l] * gamma_survival(t, std::exp(a.theta), std::exp(a.phi));
  }
  return s;
}

double conditional_hazard(const MixtureState& draw, int group, double t,
                          std::optional<double> x0) {
  const double s = conditional_survival(draw, group, t, x0);
  if (!(s > kDrawTailFloor)) return kNan;
  return conditional_density(draw, group, t, x0) / s;
}

double conditional_mrl(const MixtureState& draw, int group, double t,
                       std::optional<double> x0) {
  const auto q = local_weights(draw, group, x0);
  double s_mix = 0.0;
  double num = 0.0;
  for (std::size_t l = 0; l < q.size(); ++l) {
    const auto& a = draw.atoms[l];
    const double shape = std::exp(a.theta);
    const double rate = std::exp(a.phi);
    const double s_l = gamma_survival(t, shape, rate);
    const double qs = q[l] * s_l;
    s_mix += qs;
    if (qs > 0.0) {
      const double m_l = gamma_kernel_mrl(shape, rate, t);
      if (std::isfinite(m_l)) num += qs * m_l;
    }
  }
  if (!(s_mix > kDrawTailFloor)) return kNan;
  return num / s_mix;
}

double mean_regression(const MixtureState& draw, int group,
                       std::optional<double> x0) {
  const auto q = local_weights(draw, group, x0);
  double m = 0.0;
  for (std::size_t l = 0; l < q.size(); ++l) {
    const auto& a = draw.atoms[l];
    m += q[l] * std::exp(a.theta - a.phi);
  }
  return m;
}

double integrated_survival(const MixtureState& draw, int group, double t,
                           std::optional<double> x0) {
  const auto q = local_weights(draw, group, x0);
  double acc = 0.0;
  for (std::size_t l = 0; l < q.size(); ++l) {
    const auto& a = draw.atoms[l];
    acc += q[l] *
           gamma_kernel_int_survival(std::exp(a.theta), std::exp(a.phi), t);
  }
  return acc;
}

std::vector<double> inversion_survival(std::span<const double> grid,
                                       std::span<const double> mrl) {
  if (grid.size() != mrl.size() || grid.empty())
    throw std::invalid_argument("inversion_survival: size mismatch");
  std::vector<double> s(grid.size(), kNan);
  const double m0 = mrl.front();
  if (!(m0 > 0.0)) return s;
  s[0] = 1.0;
  double integral = 0.0;  // int 1/m from grid.front()
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(mrl[i] > 0.0) || !(mrl[i - 1] > 0.0)) break;
    integral +=
        0.5 * (grid[i] - grid[i - 1]) * (1.0 / mrl[i] + 1.0 / mrl[i - 1]);
    s[i] = m0 / mrl[i] * std::exp(-integral);
  }
  return s;
}

namespace {

double eval_one(const MixtureState& draw, FunctionalKind kind, int group,
                double t, std::optional<double> x0) {
  switch (kind) {
    case FunctionalKind::density:
      return conditional_density(draw, group, t, x0);
    case FunctionalKind::survival:
      return conditional_survival(draw, group, t, x0);
    case FunctionalKind::hazard:
      return conditional_hazard(draw, group, t, x0);
    case FunctionalKind::mrl:
    case FunctionalKind::mrl_regression:
      return conditional_mrl(draw, group, t, x0);
    case FunctionalKind::mean_regression:
      return mean_regression(draw, group, x0);
    default:
      throw std::invalid_argument("eval_one: unsupported kind");
  }
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return kNan;
  const double h = q * (static_cast<double>(sorted.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

CurveSummary summarize(const ChainOutput& chain, const FunctionalRequest& req,
                       std::optional<double> x0) {
  const int group = req.group ? static_cast<int>(*req.group) : 0;
  // Mean regression is a function of the covariate, not time: the "grid" is
  // the covariate grid and x0 is ignored.
  const bool over_covariate = req.kind == FunctionalKind::mean_regression ||
                              req.kind == FunctionalKind::mrl_regression;
  std::vector<double> grid;
  if (over_covariate) {
    if (!req.covariate_values)
      throw std::invalid_argument("summarize: covariate grid required");
    grid = *req.covariate_values;
  } else {
    grid = req.time_grid;
  }
  if (grid.empty()) throw std::invalid_argument("summarize: empty grid");

  CurveSummary cs;
  cs.grid = grid;
  cs.quantile_levels = req.quantiles;
  cs.mean.assign(grid.size(), kNan);
  cs.n_valid.assign(grid.size(), 0);
  cs.quantile_curves.assign(req.quantiles.size(),
                            std::vector<double>(grid.size(), kNan));

  // mrl_regression evaluates m(t, x) at fixed time req.time_grid[0].
  const double t_fixed =
      (req.kind == FunctionalKind::mrl_regression && !req.time_grid.empty())
          ? req.time_grid.front()
          : 0.0;

  std::vector<double> vals;
  vals.reserve(chain.draws.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals.clear();
    for (const auto& draw : chain.draws) {
      double v;
      if (req.kind == FunctionalKind::mean_regression)
        v = mean_regression(draw, group, grid[i]);
      else if (req.kind == FunctionalKind::mrl_regression)
        v = conditional_mrl(draw, group, t_fixed, grid[i]);
      else
        v = eval_one(draw, req.kind, group, grid[i], x0);
      if (std::isfinite(v)) vals.push_back(v);
    }
    cs.n_valid[i] = static_cast<int>(vals.size());
    if (vals.empty()) continue;
    double sum = 0.0;
    for (double v : vals) sum += v;
    cs.mean[i] = sum / static_cast<double>(vals.size());
    std::sort(vals.begin(), vals.end());
    for (std::size_t k = 0; k < req.quantiles.size(); ++k)
      cs.quantile_curves[k][i] = quantile_sorted(vals, req.quantiles[k]);
  }
  return cs;
}

std::vector<double> prob_mrl_order(const ChainOutput& chain,
                                   std::span<const double> time_grid,
                                   std::optional<double> x0) {
  if (chain.meta.n_groups < 2)
    throw std::invalid_argument("prob_mrl_order: needs a two-group chain");
  std::vector<double> p(time_grid.size(), kNan);
  for (std::size_t i = 0; i < time_grid.size(); ++i) {
    int count = 0;
    int valid = 0;
    for (const auto& draw : chain.draws) {
      const double mc = conditional_mrl(draw, 0, time_grid[i], x0);
      const double mt = conditional_mrl(draw, 1, time_grid[i], x0);
      if (std::isfinite(mc) && std::isfinite(mt)) {
        ++valid;
        if (mc > mt) ++count;
      }
    }
    if (valid > 0) p[i] = static_cast<double>(count) / valid;
  }
  return p;
}

double predictive_quantile(const ChainOutput& chain, int group, double q,
                           std::optional<double> x0) {
  if (chain.draws.empty())
    throw std::invalid_argument("predictive_quantile: empty chain");
  // Posterior-predictive survival averages the per-draw mixtures; bisect the
  // averaged survival for the q-quantile.
  auto pred_survival = [&](double t) {
    double s = 0.0;
    for (const auto& draw : chain.draws)
      s += conditional_survival(draw, group, t, x0);
    return s / static_cast<double>(chain.draws.size());
  };
  const double target = 1.0 - q;
  double hi = 1.0;
  while (pred_survival(hi) > target && hi < 1e12) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-9 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred_survival(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void write_curve_csv(const std::string& path, const CurveSummary& cs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "grid,mean";
  for (double q : cs.quantile_levels) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "q%g", q);
    out << ',' << buf;
  }
  out << ",n_valid\n";
  char num[40];
  for (std::size_t i = 0; i < cs.grid.size(); ++i) {
    std::snprintf(num, sizeof(num), "%.17g", cs.grid[i]);
    out << num;
    std::snprintf(num, sizeof(num), "%.17g", cs.mean[i]);
    out << ',' << num;
    for (const auto& qc : cs.quantile_curves) {
      std::snprintf(num, sizeof(num), "%.17g", qc[i]);
      out << ',' << num;
    }
    out << ',' << cs.n_valid[i] << '\n';
  }
}

}  // namespace mrl
