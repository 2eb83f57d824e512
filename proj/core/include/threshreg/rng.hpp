// rng.hpp
//
// Deterministic random numbers with explicit stream identities.  Every
// stochastic routine takes an RngSeed = (seed, stream_id); identical pairs
// reproduce identical draws and distinct stream_ids give statistically
// independent streams, so replications can run in any order (or on any
// number of threads) without changing results.

#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace threshreg {

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// splitmix64 step; also used to mix stream tags into child seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Child stream derivation: fold tags into the stream id so nested loops
// (replication, grid point, attempt, ...) each get their own stream.
RngSeed substream(const RngSeed& parent, std::uint64_t tag);
RngSeed substream(const RngSeed& parent, std::uint64_t tag1, std::uint64_t tag2);

enum class MultiplierDist { rademacher, standard_normal };

// Self-contained generator: a mersenne engine seeded from the mixed
// (seed, stream_id) pair, with hand-rolled transforms so draws are
// bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(const RngSeed& s);

  double uniform();      // [0, 1)
  double normal();       // standard normal (polar method, cached pair)
  double rademacher();   // +1 or -1, equal probability
  double multiplier(MultiplierDist dist);

  void fill_normal(Eigen::VectorXd& out);
  void fill_multipliers(Eigen::VectorXd& out, MultiplierDist dist);

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace threshreg
