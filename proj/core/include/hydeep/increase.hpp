#pragma once

// Construction of the defect density / effectiveness increase factors
// (DDIF, EIF) from expert triangles and a release characterization:
//   1. the experts' triangles for one factor form an equal-weight mixture,
//   2. the mixture draw is scaled by level / 3,
//   3. the scaled draws of all active factors are summed.
// Each factor owns an RNG stream derived from (seed, target, factor id), so
// results do not depend on the order in which factors are declared.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hydeep/model.hpp"

namespace hydeep {

enum class PointStrategy { analytic_mean, mc_median };

std::string_view to_string(PointStrategy strategy) noexcept;

struct EngineOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  PointStrategy point = PointStrategy::analytic_mean;
};

/// Samples in generation order.
struct EmpiricalDistribution {
  std::vector<double> samples;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return samples.size(); }
};

struct IncreaseFactorResult {
  TargetKind target = TargetKind::defect_content;
  EmpiricalDistribution distribution;
  double analytic_mean = 0.0;
  double point = 0.0;
};

/// Inverse CDF of the triangular distribution at u in [0, 1).
double sample_triangle(const ExpertTriangle& tri, double u) noexcept;

/// Deterministic stream for one factor. mt19937_64 output is fixed by the
/// standard, and the uniform conversion is done by hand so draws are
/// identical across standard libraries.
class FactorStream {
 public:
  FactorStream(std::uint64_t seed, TargetKind target,
               std::string_view factor_id);

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform() noexcept;

 private:
  std::mt19937_64 engine_;
};

/// Picks one expert uniformly, then draws from that expert's triangle.
/// Throws Error(empty_input) when `triangles` is empty.
double expert_mixture_sample(std::span<const ExpertTriangle> triangles,
                             FactorStream& stream);

/// The quantified impacts of the active factors for one target.
struct FactorImpact {
  std::string factor_id;
  std::vector<ExpertTriangle> experts;
};

class IncreaseModel {
 public:
  IncreaseModel() = default;

  /// Throws Error(missing_quantification) when an active factor has no
  /// triangle for `target`.
  IncreaseModel(TargetKind target, std::span<const std::string> active_ids,
                std::span<const ExpertTriangle> triangles);

  TargetKind target() const noexcept { return target_; }
  /// Sorted by factor id.
  const std::vector<FactorImpact>& factors() const noexcept {
    return factors_;
  }
  std::vector<std::string> factor_ids() const;

 private:
  TargetKind target_ = TargetKind::defect_content;
  std::vector<FactorImpact> factors_;
};

/// Per-target increase models for a bundle.
struct CausalModel {
  IncreaseModel defect_content;
  IncreaseModel effectiveness;

  const IncreaseModel& for_target(TargetKind target) const noexcept {
    return target == TargetKind::defect_content ? defect_content
                                                : effectiveness;
  }
};

CausalModel make_causal_model(const ContextBundle& bundle,
                              const ActiveFactors& active);

/// Sum over factors of (level / 3) * mean over experts of (a + m + b) / 3.
/// Throws Error(missing_level) for an uncharacterized or out-of-range level.
double analytic_mean_increase(const IncreaseModel& model,
                              const LevelMap& levels);

/// Full Monte-Carlo distribution plus the configured point estimate.
IncreaseFactorResult increase_distribution(const IncreaseModel& model,
                                           const LevelMap& levels,
                                           const EngineOptions& options);

/// Point estimate alone; skips sampling under the analytic-mean strategy.
double increase_point(const IncreaseModel& model, const LevelMap& levels,
                      const EngineOptions& options);

/// Nearest-rank quantiles; throws Error(empty_input) for an empty
/// distribution or Error(invalid_argument) for p outside [0, 1].
std::vector<double> quantiles(const EmpiricalDistribution& dist,
                              std::span<const double> probs);

}  // namespace hydeep
