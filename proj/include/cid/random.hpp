#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace cid {

// xoshiro256** stream. Substreams are addressed by a seed plus a path of
// integer keys, so any (seed, path) pair names the same sequence regardless of
// which thread or in which order it is consumed.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed);
  RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1).
  double Uniform();

 private:
  std::array<std::uint64_t, 4> state_{};
};

double StandardNormal(RandomStream& rng);

// Marsaglia-Tsang squeeze; shapes below one use the u^(1/shape) boost.
double Gamma(RandomStream& rng, double shape);

// Exact draw. Small means use geometric inversion, large means Hormann's BTRS
// transformed rejection.
std::uint64_t Binomial(RandomStream& rng, std::uint64_t trials, double prob);

// Sequential conditional binomials; probs need not be normalized.
std::vector<std::uint64_t> Multinomial(RandomStream& rng, std::uint64_t trials,
                                       std::span<const double> probs);

std::vector<double> Dirichlet(RandomStream& rng, std::span<const double> alphas);

}  // namespace cid
