#ifndef MRL_FUNCTIONALS_HPP
#define MRL_FUNCTIONALS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrl/state.hpp"

namespace mrl {

enum class FunctionalKind {
  density,
  survival,
  hazard,
  mrl,
  mean_regression,
  mrl_regression,
  prob_mrl_order
};

struct FunctionalRequest {
  FunctionalKind kind = FunctionalKind::mrl;
  std::vector<double> time_grid;                 // strictly increasing
  std::optional<std::vector<double>> covariate_values;
  std::optional<Group> group;
  std::vector<double> quantiles{0.025, 0.5, 0.975};
};

struct CurveSummary {
  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<std::vector<double>> quantile_curves;  // [quantile][point]
  std::vector<double> quantile_levels;
  std::vector<int> n_valid;  // draws contributing per point (deep-tail guard)
};

// Draw-level evaluation ------------------------------------------------------
// All evaluators take one recorded mixture draw; x0 engages the
// covariate-localized weights, absent x0 gives the marginal versions.
// Group selects the weight vector (always 0 for single-group chains).

double conditional_density(const MixtureState& draw, int group, double t,
                           std::optional<double> x0);
double conditional_survival(const MixtureState& draw, int group, double t,
                            std::optional<double> x0);
double conditional_hazard(const MixtureState& draw, int group, double t,
                          std::optional<double> x0);
// Weighted-mixture form of the mrl: sum_l q_l(t,x0) m_l(t) with
// q_l proportional to p_l k(x0) S_l(t) and the gamma-kernel mrl in closed
// form m_l(t) = (a/r) Q(a+1, rt)/Q(a, rt) - t.  Returns NaN where the
// mixture survival underflows.
double conditional_mrl(const MixtureState& draw, int group, double t,
                       std::optional<double> x0);
double mean_regression(const MixtureState& draw, int group,
                       std::optional<double> x0);
// Closed-form integral of the conditional survival over [0, t].
double integrated_survival(const MixtureState& draw, int group, double t,
                           std::optional<double> x0);

// Survival recovered from an mrl curve on a grid via the inversion formula
// S(t) = m(t0)/m(t) exp(-int 1/m), trapezoid rule from grid.front().
std::vector<double> inversion_survival(std::span<const double> grid,
                                       std::span<const double> mrl);

// Chain-level summaries ------------------------------------------------------

CurveSummary summarize(const ChainOutput& chain, const FunctionalRequest& req,
                       std::optional<double> x0 = std::nullopt);

// Pointwise fraction of posterior draws with m_C(t) > m_T(t).
std::vector<double> prob_mrl_order(const ChainOutput& chain,
                                   std::span<const double> time_grid,
                                   std::optional<double> x0 = std::nullopt);

// Upper end of the default evaluation grid: the posterior-predictive
// quantile q (e.g. 0.995) of the group's mixture.
double predictive_quantile(const ChainOutput& chain, int group, double q,
                           std::optional<double> x0 = std::nullopt);

void write_curve_csv(const std::string& path, const CurveSummary& cs);

}  // namespace mrl

#endif
