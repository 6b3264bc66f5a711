#ifndef MRL_STATE_HPP
#define MRL_STATE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mrl/data.hpp"

namespace mrl {

// One mixture component's kernel parameters: gamma shape e^theta,
// gamma rate e^phi, covariate-normal mean beta and variance kappa2.
struct AtomParams {
  double theta = 0.0;
  double phi = 0.0;
  double beta = 0.0;
  double kappa2 = 1.0;
};

// Stick-breaking variables per group plus (for the DDP) the latent
// (U, V, W) factors behind each (zeta_C, zeta_T) pair.
struct StickState {
  std::vector<std::vector<double>> zeta;     // [group][l], l = 0..L-2
  std::vector<double> u, v, w;               // DDP latents, length L-1
  std::vector<std::vector<double>> weights;  // [group][l], l = 0..L-1
};

// Shared hyperparameters.  a_kappa is the fixed shape of the kappa2
// inverse-gamma prior (never a numeric value in the source model; default
// 2, surfaced as configuration).
struct Hyperstate {
  Eigen::Vector2d mu = Eigen::Vector2d::Zero();
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Identity();
  double lambda = 0.0;
  double tau2 = 1.0;
  double rho = 1.0;
  double alpha = 1.0;
  double b = 0.5;
  double a_kappa = 2.0;
};

struct MixtureState {
  std::vector<AtomParams> atoms;            // length L
  StickState sticks;
  std::vector<std::vector<int>> config;     // [group][i], labels in 0..L-1
  Hyperstate hyper;
  // Latent-time imputation is an alternative censoring strategy; the
  // default likelihood-factorization path leaves this empty.
  std::map<std::size_t, double> imputed_times;
};

struct ChainMeta {
  std::string model;  // dpmm | ddpmm
  std::uint64_t seed = 0;
  int L = 0;
  int iterations = 0;
  int burn_in = 0;
  int thinning = 1;
  int n_groups = 1;
  bool has_covariate = false;
  std::uint64_t data_hash = 0;
  double accept_atoms = 0.0;    // MH acceptance rate, (theta,phi) block
  double accept_alpha_b = 0.0;  // DDP only
};

struct ChainOutput {
  ChainMeta meta;
  std::vector<MixtureState> draws;
};

// weights[0] = 1 - zeta[0]; weights[l] = (1 - zeta[l]) prod_{r<l} zeta[r];
// last weight is the remainder, so the output sums to one exactly.
std::vector<double> stick_break(std::span<const double> zeta);

// Occupancy counts M_{ls} per group; counts[g][l] over labels in config.
std::vector<std::vector<int>> cluster_counts(
    const std::vector<std::vector<int>>& config, int L);

}  // namespace mrl

#endif
