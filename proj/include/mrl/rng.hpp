#ifndef MRL_RNG_HPP
#define MRL_RNG_HPP

#include <cstdint>
#include <random>

namespace mrl {

// Single source of randomness.  The engine is std::mt19937_64 (fully
// specified by the standard) and every distribution transform in this
// library is hand-written, so an identical seed yields a bit-identical
// draw sequence on any platform.
//
// Sub-streams are derived from the parent seed by a splitmix64 mix of a
// fixed offset, so adding an operation with its own stream does not
// perturb draws elsewhere.  A handle is single-owner: one chain, one
// handle.
class RngHandle {
 public:
  explicit RngHandle(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  RngHandle substream(std::uint64_t offset) const {
    return RngHandle(mix(seed_, offset));
  }

  // Uniform draw on the open interval (0,1).
  double uniform() {
    double u;
    do {
      u = (engine_() >> 11) * 0x1.0p-53;
    } while (u <= 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t offset) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (offset + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mrl

#endif
