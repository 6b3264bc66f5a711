#ifndef MRL_SIMULATION_HPP
#define MRL_SIMULATION_HPP

#include <utility>
#include <vector>

#include "mrl/data.hpp"
#include "mrl/rng.hpp"

namespace mrl {

// Joint benchmark population: mixture of gamma survival kernels paired with
// normal covariate components.  Gamma is shape/rate; the covariate normal
// is mean/sd.
struct GammaNormalComponent {
  double shape, rate, mean, sd, weight;
};

struct GammaNormalPopulation {
  std::vector<GammaNormalComponent> components;

  double density(double t, double x) const;      // f(t | x)
  double survival(double t, double x) const;     // S(t | x)
  double mrl(double t, double x) const;          // closed form per component
  double mean_regression(double x) const;        // E[T | x]
  Observation sample(RngHandle& rng) const;
};

// Two-group benchmark populations: Weibull mixtures, shape/scale with
// S(t) = exp(-(t/scale)^shape).
struct WeibullComponent {
  double shape, scale, weight;
};

struct WeibullMixture {
  std::vector<WeibullComponent> components;

  double density(double t) const;
  double survival(double t) const;
  // Tail integral of the survival in closed form via the upper incomplete
  // gamma function.
  double mrl(double t) const;
  double sample(RngHandle& rng) const;
};

// The fixed benchmark populations.
GammaNormalPopulation covariate_benchmark_population();
std::pair<WeibullMixture, WeibullMixture> two_group_benchmark_1();
std::pair<WeibullMixture, WeibullMixture> two_group_benchmark_2();

// Datasets drawn from them.  Group sizes are the benchmark defaults when
// the arguments are left at zero.
Dataset gen_covariate_benchmark(std::size_t n, std::uint64_t seed);
Dataset gen_two_group_benchmark_1(std::size_t n_c, std::size_t n_t,
                                  std::uint64_t seed);
Dataset gen_two_group_benchmark_2(std::size_t n_c, std::size_t n_t,
                                  std::uint64_t seed);

// Independent right censoring: each row becomes censored at C when C < T.
struct CensoringMechanism {
  enum class Kind { none, uniform, fixed } kind = Kind::none;
  double lo = 0.0, hi = 0.0;  // uniform bounds; `hi` is the fixed time

  static CensoringMechanism none() { return {}; }
  static CensoringMechanism uniform(double lo, double hi) {
    return {Kind::uniform, lo, hi};
  }
  static CensoringMechanism fixed(double c) { return {Kind::fixed, 0.0, c}; }
};

Dataset apply_censoring(const Dataset& data, const CensoringMechanism& mech,
                        std::uint64_t seed);

}  // namespace mrl

#endif
