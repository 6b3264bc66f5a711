#include "mrl/model_comparison.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "mrl/special.hpp"

namespace mrl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log-sum-exp accumulator.
struct LogSum {
  double max = kNegInf;
  double scaled = 0.0;  // sum of exp(x - max)
  void add(double x) {
    if (x == kNegInf) return;
    if (x <= max) {
      scaled += std::exp(x - max);
    } else {
      scaled = scaled * std::exp(max - x) + 1.0;
      max = x;
    }
  }
  double value() const {
    return max == kNegInf ? kNegInf : max + std::log(scaled);
  }
};

// Log kernel contribution of one observation under one atom: gamma density
// (observed) or survival (censored), plus the covariate-normal factor when
// the fit used covariates.
double log_kernel(const Observation& obs, const AtomParams& a,
                  bool use_covariate) {
  const double shape = std::exp(a.theta);
  const double rate = std::exp(a.phi);
  double lk = obs.censored ? log_gamma_survival(obs.time, shape, rate)
                           : gamma_log_pdf(obs.time, shape, rate);
  if (use_covariate)
    lk += normal_log_pdf(obs.covariate.value(), a.beta, a.kappa2);
  return lk;
}

// Flags an observation whose running CPO still moves more than 1% relative
// over the final tenth of the draw sequence.
bool running_unstable(const std::vector<double>& num,
                      const std::vector<double>& den) {
  const std::size_t m = num.size();
  const std::size_t start = m - m / 10;
  LogSum ln, ld;
  std::vector<double> running;
  running.reserve(m / 10 + 1);
  for (std::size_t j = 0; j < m; ++j) {
    ln.add(num[j]);
    ld.add(den[j]);
    if (j + 1 >= start) running.push_back(ln.value() - ld.value());
  }
  const double final_v = running.back();
  for (double v : running)
    if (std::abs(std::expm1(v - final_v)) > 0.01) return true;
  return false;
}

void finish_report(CpoReport& report, int n_groups) {
  std::vector<double> sum(n_groups, 0.0);
  std::vector<int> count(n_groups, 0);
  for (const auto& row : report.rows) {
    sum[row.group] += row.log_cpo;
    ++count[row.group];
    if (row.unstable) ++report.n_unstable;
  }
  double weighted = 0.0, simple = 0.0;
  int total = 0;
  report.alpml_group.resize(n_groups);
  for (int g = 0; g < n_groups; ++g) {
    report.alpml_group[g] = count[g] > 0 ? sum[g] / count[g] : 0.0;
    weighted += sum[g];
    total += count[g];
    simple += report.alpml_group[g];
  }
  report.alpml_weighted = total > 0 ? weighted / total : 0.0;
  report.alpml_simple = simple / n_groups;
}

}  // namespace

CpoReport cpo_mixture(const ChainOutput& chain, const Dataset& data) {
  if (chain.draws.empty())
    throw std::invalid_argument("cpo_mixture: empty chain");
  if (chain.meta.data_hash != dataset_hash(data))
    throw std::runtime_error("cpo_mixture: chain was fit to different data");
  const bool use_cov = chain.meta.has_covariate;
  const int n_groups = chain.meta.n_groups;
  const std::size_t m = chain.draws.size();

  CpoReport report;
  report.model = chain.meta.model;

  std::vector<int> within_group_pos(data.rows.size(), 0);
  std::vector<int> group_of(data.rows.size(), 0);
  {
    std::vector<int> next(n_groups, 0);
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
      const int g =
          data.has_group ? static_cast<int>(data.rows[i].group.value()) : 0;
      group_of[i] = g;
      within_group_pos[i] = next[g]++;
    }
  }

  std::vector<double> num(m), den(m);
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto& obs = data.rows[i];
    const int g = group_of[i];
    for (std::size_t j = 0; j < m; ++j) {
      const auto& draw = chain.draws[j];
      const auto& p = draw.sticks.weights[g];
      LogSum mix;
      for (std::size_t l = 0; l < draw.atoms.size(); ++l)
        mix.add(std::log(p[l]) + log_kernel(obs, draw.atoms[l], use_cov));
      const int label = draw.config[g][within_group_pos[i]];
      const double lk = log_kernel(obs, draw.atoms[label], use_cov);
      num[j] = mix.value() - lk;
      den[j] = -lk;
    }
    LogSum ln, ld;
    for (std::size_t j = 0; j < m; ++j) {
      ln.add(num[j]);
      ld.add(den[j]);
    }
    CpoRow row;
    row.index = i;
    row.group = g;
    row.time = obs.time;
    row.censored = obs.censored;
    row.log_cpo = ln.value() - ld.value();
    row.unstable = running_unstable(num, den);
    report.rows.push_back(row);
  }
  finish_report(report, n_groups);
  return report;
}

CpoReport cpo_ewm(const EwmChain& chain, const Dataset& data) {
  if (chain.draws.empty()) throw std::invalid_argument("cpo_ewm: empty chain");
  if (chain.data_hash != dataset_hash(data))
    throw std::runtime_error("cpo_ewm: chain was fit to different data");
  const std::size_t m = chain.draws.size();
  CpoReport report;
  report.model = "ewm";
  std::vector<double> inv_lik(m);
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto& obs = data.rows[i];
    for (std::size_t j = 0; j < m; ++j)
      inv_lik[j] = -ewm_obs_loglik(chain.draws[j], obs, chain.has_covariate);
    LogSum ls;
    for (double v : inv_lik) ls.add(v);
    CpoRow row;
    row.index = i;
    row.group =
        data.has_group ? static_cast<int>(obs.group.value()) : 0;
    row.time = obs.time;
    row.censored = obs.censored;
    // Harmonic mean: log M - logsumexp(-log L_j).
    row.log_cpo = std::log(static_cast<double>(m)) - ls.value();
    {
      // Same final-decile stability check, constant numerator.
      LogSum run;
      const std::size_t start = m - m / 10;
      std::vector<double> running;
      for (std::size_t j = 0; j < m; ++j) {
        run.add(inv_lik[j]);
        if (j + 1 >= start)
          running.push_back(std::log(static_cast<double>(j + 1)) -
                            run.value());
      }
      for (double v : running)
        if (std::abs(std::expm1(v - running.back())) > 0.01) {
          row.unstable = true;
          break;
        }
    }
    report.rows.push_back(row);
  }
  finish_report(report, data.has_group ? 2 : 1);
  return report;
}

void write_cpo_csv(const std::string& path, const CpoReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "index,group,time,censored,log_cpo,unstable\n";
  char num[40];
  for (const auto& r : report.rows) {
    std::snprintf(num, sizeof(num), "%.17g", r.time);
    out << r.index << ',' << (r.group == 0 ? 'C' : 'T') << ',' << num << ','
        << (r.censored ? 1 : 0) << ',';
    std::snprintf(num, sizeof(num), "%.17g", r.log_cpo);
    out << num << ',' << (r.unstable ? 1 : 0) << '\n';
  }
}

void write_cpo_summary_json(const std::string& path, const CpoReport& report) {
  nlohmann::json j{{"model", report.model},
                   {"alpml_group", report.alpml_group},
                   {"alpml_weighted", report.alpml_weighted},
                   {"alpml_simple", report.alpml_simple},
                   {"n_obs", report.rows.size()},
                   {"n_unstable", report.n_unstable}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace mrl
