#pragma once

// Causal-model and measurement domain types, plus the elementary defect
// measure identities (DC = DF + DS, DD = DC / size, Eff = DF / DC).

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hydeep {

enum class TargetKind { defect_content, effectiveness };

inline constexpr std::array<TargetKind, 2> kAllTargets = {
    TargetKind::defect_content, TargetKind::effectiveness};

/// "defect_content" / "effectiveness" (the bundle spelling).
std::string_view to_string(TargetKind target) noexcept;
std::optional<TargetKind> parse_target(std::string_view text) noexcept;

inline constexpr int kLevelCount = 4;
inline constexpr int kMaxLevel = kLevelCount - 1;

struct InfluenceFactor {
  std::string id;
  std::string name;
  std::string description;
  TargetKind target = TargetKind::defect_content;
  /// Index 0 yields the fewest defects found, index 3 the most.
  std::array<std::string, kLevelCount> levels;

  bool operator==(const InfluenceFactor&) const = default;
};

/// One expert's (min, most likely, max) relative increase for one factor,
/// e.g. 0.15 for "15% more defects" when the factor moves from level 0 to 3.
struct ExpertTriangle {
  std::string expert;
  std::string factor_id;
  TargetKind target = TargetKind::defect_content;
  double min = 0.0;
  double most_likely = 0.0;
  double max = 0.0;

  bool is_ordered() const noexcept {
    return 0.0 <= min && min <= most_likely && most_likely <= max;
  }
  double mean() const noexcept { return (min + most_likely + max) / 3.0; }

  bool operator==(const ExpertTriangle&) const = default;
};

/// Rank 1 marks the most important factor.
struct FactorRanking {
  std::string expert;
  TargetKind target = TargetKind::defect_content;
  std::map<std::string, int> ranks;

  bool operator==(const FactorRanking&) const = default;
};

using LevelMap = std::map<std::string, int>;

/// A historical release. Counts are stored as reals so weighted or synthetic
/// data can be represented without rounding.
struct ReleaseRecord {
  std::string id;
  double size = 0.0;
  double defects_found = 0.0;
  double defects_slipped = 0.0;
  LevelMap levels;
  bool excluded = false;
  std::string note;

  bool operator==(const ReleaseRecord&) const = default;
};

using ActiveFactors = std::map<TargetKind, std::vector<std::string>>;

/// Expert model plus measurement history. Release order is chronological.
struct ContextBundle {
  std::vector<InfluenceFactor> factors;
  std::vector<ExpertTriangle> quantifications;
  std::vector<FactorRanking> rankings;
  std::vector<ReleaseRecord> releases;
  ActiveFactors active_factors;

  std::vector<std::string> factor_ids(TargetKind target) const;
  const InfluenceFactor* find_factor(TargetKind target,
                                     std::string_view id) const noexcept;
  std::vector<ReleaseRecord> included_releases() const;

  bool operator==(const ContextBundle&) const = default;
};

double defect_content_of(const ReleaseRecord& release) noexcept;
double defect_density_of(const ReleaseRecord& release) noexcept;
/// Throws Error(undefined_effectiveness) when the release has no defects.
double effectiveness_of(const ReleaseRecord& release);

struct RankedFactor {
  std::string id;
  double mean_rank = 0.0;
  double median_rank = 0.0;
};

/// Orders factors by mean rank, then median rank, then id. When
/// `factor_ids` is empty the factor set is the union of ranked ids.
std::vector<RankedFactor> aggregate_rankings(
    std::span<const FactorRanking> rankings, TargetKind target,
    std::span<const std::string> factor_ids = {});

/// Ranking-driven default active set: the explicit bundle selection when
/// present, otherwise every factor of the target, except effectiveness which
/// keeps only the two top-ranked factors when rankings exist.
std::vector<std::string> default_active_factors(const ContextBundle& bundle,
                                                TargetKind target);
ActiveFactors default_active_factors(const ContextBundle& bundle);

inline constexpr std::size_t kDefaultEffectivenessFactorCount = 2;

}  // namespace hydeep
