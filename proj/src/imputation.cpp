#include "cid/imputation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "cid/errors.hpp"

namespace cid {
namespace {

constexpr std::uint64_t kPosteriorStream = 1;
constexpr std::uint64_t kImputeStream = 2;

// Stream key for a knob value; grid values that agree to 1e-9 share a stream.
std::uint64_t KnobKey(double t) {
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(t * 1e9)));
}

}  // namespace

CategoricalDistribution::CategoricalDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw Error(Errc::kDomain, "a categorical distribution needs at least 2 levels");
  }
  double total = 0.0;
  for (const double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(Errc::kDomain, "probabilities must be finite and >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(Errc::kDomain,
                fmt::format("probabilities sum to {:.17g}, expected 1", total));
  }
}

CategoricalDistribution CategoricalDistribution::FromWeights(
    std::vector<double> weights) {
  double total = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(Errc::kDomain, "weights must be finite and >= 0");
    }
    total += w;
  }
  if (!(total > 0.0)) throw Error(Errc::kDomain, "weights have no mass");
  for (auto& w : weights) w /= total;
  return CategoricalDistribution(std::move(weights));
}

double CategoricalDistribution::MassAbove(std::size_t cutoff) const {
  double mass = 0.0;
  for (std::size_t k = cutoff; k < probs_.size(); ++k) mass += probs_[k];
  return mass;
}

LeadPopulation::LeadPopulation(std::vector<std::uint64_t> observed_counts,
                               std::uint64_t n_total, std::size_t high_cutoff)
    : counts_(std::move(observed_counts)), n_total_(n_total), high_cutoff_(high_cutoff) {
  if (counts_.size() < 2) {
    throw Error(Errc::kDomain, "population needs at least 2 levels");
  }
  n_observed_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  if (n_observed_ > n_total_) {
    throw Error(Errc::kDomain,
                fmt::format("observed count {} exceeds population size {}",
                            n_observed_, n_total_));
  }
  if (n_total_ == 0) throw Error(Errc::kDomain, "population size must be positive");
  if (high_cutoff_ >= counts_.size()) {
    throw Error(Errc::kDomain,
                fmt::format("cutoff level {} leaves no high levels among {}",
                            high_cutoff_, counts_.size()));
  }
}

std::uint64_t LeadPopulation::observed_high_count() const {
  return std::accumulate(counts_.begin() + static_cast<std::ptrdiff_t>(high_cutoff_),
                         counts_.end(), std::uint64_t{0});
}

MnarMechanism AccordionMechanism() {
  return {"accordion", {1, 1, 1, 0, 0, 0, 0, 0, 0, 0}};
}

MnarMechanism ParametricMechanism() {
  return {"parametric", {1, 0.9, 0.8, 0.6, 0.4, 0, 0, 0, -0.2, -0.25}};
}

MnarMechanism MarMechanism(std::size_t levels) {
  return {"mar", std::vector<double>(levels, 0.0)};
}

std::vector<MnarMechanism> BuiltinMechanisms() {
  return {AccordionMechanism(), ParametricMechanism(), MarMechanism(10)};
}

CategoricalDistribution DrawDirichletPosterior(const LeadPopulation& pop,
                                               RandomStream& rng) {
  std::vector<double> alphas;
  alphas.reserve(pop.levels());
  for (const auto n : pop.observed_counts()) {
    alphas.push_back(1.0 + static_cast<double>(n));
  }
  auto draw = Dirichlet(rng, alphas);
  // Renormalize so the sum-to-one check holds after division rounding.
  return CategoricalDistribution::FromWeights(std::move(draw));
}

CategoricalDistribution TiltDistribution(const CategoricalDistribution& p,
                                         const MnarMechanism& mech, double t) {
  if (mech.weights.size() != p.size()) {
    throw Error(Errc::kUsage,
                fmt::format("mechanism '{}' has {} weights for {} levels", mech.name,
                            mech.weights.size(), p.size()));
  }
  if (!std::isfinite(t)) throw Error(Errc::kDomain, "knob value must be finite");
  if (!(p[0] > 0.0)) {
    throw Error(Errc::kBaselineEmpty,
                "baseline category empty: level 1 has zero probability");
  }

  const double log_p1 = std::log(p[0]);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> logits(p.size());
  double top = kNegInf;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double beta = k == 0 ? 0.0 : (p[k] > 0.0 ? std::log(p[k]) - log_p1 : kNegInf);
    logits[k] = beta == kNegInf ? kNegInf : beta + t * mech.weights[k];
    top = std::max(top, logits[k]);
  }
  std::vector<double> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k] = logits[k] == kNegInf ? 0.0 : std::exp(logits[k] - top);
  }
  return CategoricalDistribution::FromWeights(std::move(out));
}

ImputationResult ImputeTheta(const LeadPopulation& pop, const MnarMechanism& mech,
                             double t, const ImputationConfig& cfg) {
  if (cfg.m < 1) throw Error(Errc::kDomain, "number of imputations must be >= 1");
  const std::size_t levels = pop.levels();
  const double n_total = static_cast<double>(pop.n_total());
  const auto observed = pop.observed_counts();

  std::vector<double> freq_sum(levels, 0.0);
  std::vector<double> per_draw;
  per_draw.reserve(cfg.m);

  for (std::size_t m = 0; m < cfg.m; ++m) {
    RandomStream posterior_rng(cfg.seed, {kPosteriorStream, m});
    RandomStream impute_rng(cfg.seed, {kImputeStream, KnobKey(t), m});

    const auto p = DrawDirichletPosterior(pop, posterior_rng);
    const auto p_t = TiltDistribution(p, mech, t);
    const auto imputed = Multinomial(impute_rng, pop.n_missing(), p_t.probs());

    std::uint64_t high = 0;
    for (std::size_t k = 0; k < levels; ++k) {
      const std::uint64_t completed = observed[k] + imputed[k];
      freq_sum[k] += static_cast<double>(completed) / n_total;
      if (k >= pop.high_cutoff()) high += completed;
    }
    per_draw.push_back(static_cast<double>(high) / n_total);
  }

  const double m_count = static_cast<double>(cfg.m);
  for (auto& f : freq_sum) f /= m_count;
  const double theta =
      std::accumulate(per_draw.begin(), per_draw.end(), 0.0) / m_count;
  return ImputationResult{theta, CategoricalDistribution::FromWeights(std::move(freq_sum)),
                          std::move(per_draw)};
}

std::vector<std::uint64_t> ApportionCounts(std::span<const double> probs,
                                           std::uint64_t n) {
  const auto dist = CategoricalDistribution::FromWeights({probs.begin(), probs.end()});
  const double nd = static_cast<double>(n);
  std::vector<std::uint64_t> counts(dist.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const double quota = dist[k] * nd;
    const double whole = std::floor(quota);
    counts[k] = static_cast<std::uint64_t>(whole);
    assigned += counts[k];
    remainders.emplace_back(quota - whole, k);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& l, const auto& r) { return l.first > r.first; });
  for (std::size_t i = 0; assigned < n; ++i) {
    ++counts[remainders[i % remainders.size()].second];
    ++assigned;
  }
  return counts;
}

}  // namespace cid
