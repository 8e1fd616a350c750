#include "cid/random.hpp"

#include <cmath>
#include <algorithm>

#include <fmt/format.h>

#include "cid/errors.hpp"

namespace cid {
namespace {

std::uint64_t SplitMix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// log(k!) minus its Stirling approximation.
double StirlingTail(double k) {
  static constexpr double kTable[] = {
      0.08106146679532726, 0.04134069595540929, 0.02767792568499834,
      0.02079067210376509, 0.01664469118982119, 0.01387612882307075,
      0.01189670994589177, 0.01041126526197209, 0.009255462182712733,
      0.008330563433362871};
  if (k <= 9.0) return kTable[static_cast<int>(k)];
  const double kp1sq = (k + 1.0) * (k + 1.0);
  return (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / 1260.0 / kp1sq) / kp1sq) / (k + 1.0);
}

std::uint64_t BinomialInversion(RandomStream& rng, std::uint64_t trials, double prob) {
  // Counts successes by summing geometric gaps between them.
  const double log_q = std::log1p(-prob);
  double gap_sum = 0.0;
  std::uint64_t successes = 0;
  const double n = static_cast<double>(trials);
  while (true) {
    gap_sum += std::ceil(std::log(rng.Uniform()) / log_q);
    if (gap_sum > n) break;
    ++successes;
  }
  return successes;
}

std::uint64_t BinomialBtrs(RandomStream& rng, std::uint64_t trials, double prob) {
  const double n = static_cast<double>(trials);
  const double spq = std::sqrt(n * prob * (1.0 - prob));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * prob;
  const double c = n * prob + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double r = prob / (1.0 - prob);
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double m = std::floor((n + 1.0) * prob);

  while (true) {
    const double u = rng.Uniform() - 0.5;
    double v = rng.Uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + c);
    if (k < 0.0 || k > n) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);

    v = std::log(v * alpha / (a / (us * us) + b));
    const double bound =
        (m + 0.5) * std::log((m + 1.0) / (r * (n - m + 1.0))) +
        (n + 1.0) * std::log((n - m + 1.0) / (n - k + 1.0)) +
        (k + 0.5) * std::log(r * (n - k + 1.0) / (k + 1.0)) + StirlingTail(m) +
        StirlingTail(n - m) - StirlingTail(k) - StirlingTail(n - k);
    if (v <= bound) return static_cast<std::uint64_t>(k);
  }
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : RandomStream(seed, {}) {}

RandomStream::RandomStream(std::uint64_t seed,
                           std::initializer_list<std::uint64_t> path) {
  std::uint64_t key = seed;
  std::uint64_t mix = SplitMix64(key);
  for (const auto p : path) {
    std::uint64_t k = mix ^ (p + 0x632be59bd9b4e019ULL);
    mix = SplitMix64(k);
  }
  for (auto& s : state_) s = SplitMix64(mix);
}

RandomStream::result_type RandomStream::operator()() {
  const std::uint64_t result = Rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = Rotl(state_[3], 45);
  return result;
}

double RandomStream::Uniform() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double StandardNormal(RandomStream& rng) {
  // Marsaglia polar method; the second variate is discarded to keep the
  // stream stateless beyond the generator.
  while (true) {
    const double u = 2.0 * rng.Uniform() - 1.0;
    const double v = 2.0 * rng.Uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double Gamma(RandomStream& rng, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw Error(Errc::kDomain, fmt::format("gamma shape must be > 0, got {}", shape));
  }
  if (shape < 1.0) {
    const double g = Gamma(rng, shape + 1.0);
    return g * std::pow(rng.Uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = StandardNormal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.Uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t Binomial(RandomStream& rng, std::uint64_t trials, double prob) {
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw Error(Errc::kDomain,
                fmt::format("binomial probability must lie in [0, 1], got {}", prob));
  }
  if (trials == 0 || prob == 0.0) return 0;
  if (prob == 1.0) return trials;
  if (prob > 0.5) return trials - Binomial(rng, trials, 1.0 - prob);
  if (static_cast<double>(trials) * prob < 10.0) {
    return BinomialInversion(rng, trials, prob);
  }
  return BinomialBtrs(rng, trials, prob);
}

std::vector<std::uint64_t> Multinomial(RandomStream& rng, std::uint64_t trials,
                                       std::span<const double> probs) {
  double mass = 0.0;
  for (const double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(Errc::kDomain, "multinomial probabilities must be finite and >= 0");
    }
    mass += p;
  }
  if (probs.empty() || !(mass > 0.0)) {
    throw Error(Errc::kDomain, "multinomial probabilities have no mass");
  }
  std::size_t last = probs.size() - 1;
  while (probs[last] == 0.0) --last;

  std::vector<std::uint64_t> counts(probs.size(), 0);
  std::uint64_t remaining = trials;
  for (std::size_t k = 0; k < last && remaining > 0; ++k) {
    const double cond = mass > 0.0 ? std::min(1.0, probs[k] / mass) : 0.0;
    counts[k] = Binomial(rng, remaining, cond);
    remaining -= counts[k];
    mass -= probs[k];
  }
  counts[last] += remaining;
  return counts;
}

std::vector<double> Dirichlet(RandomStream& rng, std::span<const double> alphas) {
  std::vector<double> draw(alphas.size());
  double total = 0.0;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    draw[k] = Gamma(rng, alphas[k]);
    total += draw[k];
  }
  for (auto& v : draw) v /= total;
  return draw;
}

}  // namespace cid
