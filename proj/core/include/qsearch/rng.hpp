#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qsearch {

// Seeded generator with portable draws.
//
// std::mt19937_64 is bit-exact across standard libraries but the standard
// distributions are not, so bounded integers and unit reals are derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [0, 1) with 53 bits of precision.
  double unit();

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

// Independent sub-stream seed for (base seed, stream name, index).
std::uint64_t derive_seed(std::uint64_t base, std::string_view stream,
                          std::uint64_t index = 0);

}  // namespace qsearch
