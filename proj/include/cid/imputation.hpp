#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cid/random.hpp"

namespace cid {

class CategoricalDistribution {
 public:
  // Probabilities must be non-negative and sum to one within 1e-12.
  explicit CategoricalDistribution(std::vector<double> probs);

  // Normalizes non-negative weights with positive total.
  static CategoricalDistribution FromWeights(std::vector<double> weights);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }

  // Total probability of levels strictly above `cutoff` (levels are 1-based).
  double MassAbove(std::size_t cutoff) const;

 private:
  std::vector<double> probs_;
};

// Observed category counts for levels 1..K plus the population size. Levels
// above `high_cutoff` count as high.
class LeadPopulation {
 public:
  LeadPopulation(std::vector<std::uint64_t> observed_counts, std::uint64_t n_total,
                 std::size_t high_cutoff = 3);

  std::span<const std::uint64_t> observed_counts() const { return counts_; }
  std::size_t levels() const { return counts_.size(); }
  std::uint64_t n_total() const { return n_total_; }
  std::uint64_t n_observed() const { return n_observed_; }
  std::uint64_t n_missing() const { return n_total_ - n_observed_; }
  std::size_t high_cutoff() const { return high_cutoff_; }
  std::uint64_t observed_high_count() const;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_total_;
  std::uint64_t n_observed_ = 0;
  std::size_t high_cutoff_;
};

// Log-odds shift alpha_t = t * weights applied to the imputation model for the
// missing units. All-zero weights reproduce MAR.
struct MnarMechanism {
  std::string name;
  std::vector<double> weights;
};

MnarMechanism AccordionMechanism();
MnarMechanism ParametricMechanism();
MnarMechanism MarMechanism(std::size_t levels);
std::vector<MnarMechanism> BuiltinMechanisms();

struct ImputationConfig {
  std::size_t m = 5;
  std::uint64_t seed = 20240101;
};

struct ImputationResult {
  double theta_hat = 0.0;
  CategoricalDistribution completed_freqs;
  std::vector<double> per_draw_theta;
};

// One posterior draw of p ~ Dirichlet(1 + n_1, ..., 1 + n_K).
CategoricalDistribution DrawDirichletPosterior(const LeadPopulation& pop,
                                               RandomStream& rng);

// Softmax of log(p_k / p_1) + t * w_k. Category 1 is the log-odds baseline and
// must have positive probability.
CategoricalDistribution TiltDistribution(const CategoricalDistribution& p,
                                         const MnarMechanism& mech, double t);

// Multiple imputation of the missing units under the tilted model. Each
// completed population draws p from the posterior, tilts it, and imputes all
// N - n missing units with a single multinomial draw. theta_hat is the mean of
// the per-population fractions above the cutoff.
//
// Posterior draws for population m depend only on (seed, m), so estimates at
// different t share their Dirichlet draws. The imputation draw is keyed on
// (seed, t, m).
ImputationResult ImputeTheta(const LeadPopulation& pop, const MnarMechanism& mech,
                             double t, const ImputationConfig& cfg);

// Integer counts summing exactly to n, by largest remainder (ties to the lower
// level).
std::vector<std::uint64_t> ApportionCounts(std::span<const double> probs,
                                           std::uint64_t n);

}  // namespace cid
