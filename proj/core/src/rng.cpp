#include "threshreg/rng.hpp"

namespace threshreg {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {
std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t st = a ^ (0x9E3779B97F4A7C15ULL * (b + 0x632BE59BD9B4E019ULL));
  splitmix64(st);
  return splitmix64(st);
}
}  // namespace

RngSeed substream(const RngSeed& parent, std::uint64_t tag) {
  return {parent.seed, mix(parent.stream_id, tag)};
}

RngSeed substream(const RngSeed& parent, std::uint64_t tag1, std::uint64_t tag2) {
  return {parent.seed, mix(mix(parent.stream_id, tag1), tag2)};
}

Rng::Rng(const RngSeed& s) {
  std::uint64_t st = s.seed;
  const std::uint64_t a = splitmix64(st);
  st ^= mix(s.stream_id, 0x5851F42D4C957F2DULL);
  const std::uint64_t b = splitmix64(st);
  const std::uint64_t c = splitmix64(st);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  eng_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * f;
  have_cached_ = true;
  return u * f;
}

double Rng::rademacher() {
  return (eng_() >> 63) ? 1.0 : -1.0;
}

double Rng::multiplier(MultiplierDist dist) {
  return dist == MultiplierDist::rademacher ? rademacher() : normal();
}

void Rng::fill_normal(Eigen::VectorXd& out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = normal();
}

void Rng::fill_multipliers(Eigen::VectorXd& out, MultiplierDist dist) {
  if (dist == MultiplierDist::rademacher) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = rademacher();
  } else {
    fill_normal(out);
  }
}

}  // namespace threshreg
