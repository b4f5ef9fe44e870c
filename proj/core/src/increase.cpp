#include "hydeep/increase.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hydeep/error.hpp"
#include "hydeep/stats.hpp"

namespace hydeep {
namespace {

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int level_of(const LevelMap& levels, const std::string& factor_id) {
  auto it = levels.find(factor_id);
  if (it == levels.end()) {
    throw Error(ErrorKind::missing_level,
                "no level given for factor '" + factor_id + "'");
  }
  if (it->second < 0 || it->second > kMaxLevel) {
    throw Error(ErrorKind::missing_level,
                "level " + std::to_string(it->second) + " of factor '" +
                    factor_id + "' is outside [0, 3]");
  }
  return it->second;
}

double level_weight(int level) noexcept {
  return static_cast<double>(level) / static_cast<double>(kMaxLevel);
}

}  // namespace

std::string_view to_string(PointStrategy strategy) noexcept {
  return strategy == PointStrategy::analytic_mean ? "analytic-mean"
                                                  : "mc-median";
}

double sample_triangle(const ExpertTriangle& tri, double u) noexcept {
  const double a = tri.min;
  const double c = tri.most_likely;
  const double b = tri.max;
  const double width = b - a;
  if (width <= 0.0) return a;
  const double mode_cdf = (c - a) / width;
  if (u < mode_cdf) return a + std::sqrt(u * width * (c - a));
  return b - std::sqrt((1.0 - u) * width * (b - c));
}

FactorStream::FactorStream(std::uint64_t seed, TargetKind target,
                           std::string_view factor_id)
    : engine_(splitmix64(
          seed ^ fnv1a(std::string(to_string(target)) + ":" +
                       std::string(factor_id)))) {}

double FactorStream::uniform() noexcept {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double expert_mixture_sample(std::span<const ExpertTriangle> triangles,
                             FactorStream& stream) {
  if (triangles.empty()) {
    throw Error(ErrorKind::empty_input, "expert mixture without triangles");
  }
  const auto k = triangles.size();
  const auto pick = std::min(
      k - 1, static_cast<std::size_t>(stream.uniform() * static_cast<double>(k)));
  return sample_triangle(triangles[pick], stream.uniform());
}

IncreaseModel::IncreaseModel(TargetKind target,
                             std::span<const std::string> active_ids,
                             std::span<const ExpertTriangle> triangles)
    : target_(target) {
  std::map<std::string, FactorImpact> by_id;
  for (const auto& id : active_ids) by_id[id].factor_id = id;
  for (const auto& tri : triangles) {
    if (tri.target != target) continue;
    if (auto it = by_id.find(tri.factor_id); it != by_id.end()) {
      it->second.experts.push_back(tri);
    }
  }
  for (auto& [id, impact] : by_id) {
    // Expert order fixes which stream draw selects which expert.
    std::stable_sort(impact.experts.begin(), impact.experts.end(),
                     [](const ExpertTriangle& a, const ExpertTriangle& b) {
                       return a.expert < b.expert;
                     });
    if (impact.experts.empty()) {
      throw Error(ErrorKind::missing_quantification,
                  "factor '" + id + "' has no " +
                      std::string(to_string(target)) + " quantification");
    }
    factors_.push_back(std::move(impact));
  }
}

std::vector<std::string> IncreaseModel::factor_ids() const {
  std::vector<std::string> ids;
  for (const auto& f : factors_) ids.push_back(f.factor_id);
  return ids;
}

CausalModel make_causal_model(const ContextBundle& bundle,
                              const ActiveFactors& active) {
  auto ids_for = [&](TargetKind t) {
    auto it = active.find(t);
    return it != active.end() ? it->second : default_active_factors(bundle, t);
  };
  const auto dc_ids = ids_for(TargetKind::defect_content);
  const auto eff_ids = ids_for(TargetKind::effectiveness);
  return CausalModel{
      IncreaseModel(TargetKind::defect_content, dc_ids, bundle.quantifications),
      IncreaseModel(TargetKind::effectiveness, eff_ids, bundle.quantifications)};
}

double analytic_mean_increase(const IncreaseModel& model,
                              const LevelMap& levels) {
  double total = 0.0;
  for (const auto& f : model.factors()) {
    const int level = level_of(levels, f.factor_id);
    double expert_sum = 0.0;
    for (const auto& tri : f.experts) expert_sum += tri.mean();
    total += level_weight(level) *
             (expert_sum / static_cast<double>(f.experts.size()));
  }
  return total;
}

IncreaseFactorResult increase_distribution(const IncreaseModel& model,
                                           const LevelMap& levels,
                                           const EngineOptions& options) {
  if (options.samples == 0) {
    throw Error(ErrorKind::invalid_argument, "sample count must be positive");
  }
  IncreaseFactorResult result;
  result.target = model.target();
  result.analytic_mean = analytic_mean_increase(model, levels);
  result.distribution.seed = options.seed;
  auto& samples = result.distribution.samples;
  samples.assign(options.samples, 0.0);

  // Factors are visited in id order so the per-sample sums are independent of
  // declaration order; each factor draws from its own stream.
  for (const auto& f : model.factors()) {
    const int level = level_of(levels, f.factor_id);
    if (level == 0) continue;
    const double weight = level_weight(level);
    FactorStream stream(options.seed, model.target(), f.factor_id);
    for (auto& s : samples) {
      s += weight * expert_mixture_sample(f.experts, stream);
    }
  }

  result.point = options.point == PointStrategy::analytic_mean
                     ? result.analytic_mean
                     : stats::median(samples);
  return result;
}

double increase_point(const IncreaseModel& model, const LevelMap& levels,
                      const EngineOptions& options) {
  if (options.point == PointStrategy::analytic_mean) {
    return analytic_mean_increase(model, levels);
  }
  return increase_distribution(model, levels, options).point;
}

std::vector<double> quantiles(const EmpiricalDistribution& dist,
                              std::span<const double> probs) {
  return stats::quantiles(dist.samples, probs);
}

}  // namespace hydeep
