#ifndef MRL_MODEL_COMPARISON_HPP
#define MRL_MODEL_COMPARISON_HPP

#include <string>
#include <vector>

#include "mrl/data.hpp"
#include "mrl/ewm.hpp"
#include "mrl/state.hpp"

namespace mrl {

struct CpoRow {
  std::size_t index = 0;  // row number in the dataset
  int group = 0;
  double time = 0.0;
  bool censored = false;
  double log_cpo = 0.0;
  bool unstable = false;  // running estimate still moving over final decile
};

struct CpoReport {
  std::string model;
  std::vector<CpoRow> rows;
  std::vector<double> alpml_group;  // mean log CPO per group
  double alpml_weighted = 0.0;      // group means weighted by group size
  double alpml_simple = 0.0;        // unweighted average of group means
  int n_unstable = 0;
};

// Mixture-model CPO from the recorded configurations: the per-draw mixture
// likelihood of each observation divided by the kernel at its assigned
// component, harmonically averaged against the bare inverse kernel.
CpoReport cpo_mixture(const ChainOutput& chain, const Dataset& data);

// Harmonic-mean CPO for the parametric baseline.
CpoReport cpo_ewm(const EwmChain& chain, const Dataset& data);

void write_cpo_csv(const std::string& path, const CpoReport& report);
void write_cpo_summary_json(const std::string& path, const CpoReport& report);

}  // namespace mrl

#endif
