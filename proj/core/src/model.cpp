#include "hydeep/model.hpp"

#include <algorithm>
#include <set>

#include "hydeep/error.hpp"

namespace hydeep {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::undefined_effectiveness: return "undefined-effectiveness";
    case ErrorKind::missing_factor: return "missing-factor";
    case ErrorKind::invalid_rank: return "invalid-rank";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::missing_quantification: return "missing-quantification";
    case ErrorKind::missing_level: return "missing-level";
    case ErrorKind::no_usable_history: return "no-usable-history";
    case ErrorKind::no_effectiveness_history: return "no-effectiveness-history";
    case ErrorKind::zero_actual: return "zero-actual";
    case ErrorKind::all_zero_differences: return "all-zero-differences";
    case ErrorKind::insufficient_history: return "insufficient-history";
    case ErrorKind::unwritable_path: return "unwritable-path";
  }
  return "unknown";
}

std::string_view to_string(TargetKind target) noexcept {
  return target == TargetKind::defect_content ? "defect_content"
                                              : "effectiveness";
}

std::optional<TargetKind> parse_target(std::string_view text) noexcept {
  if (text == "defect_content" || text == "defect-content") {
    return TargetKind::defect_content;
  }
  if (text == "effectiveness") return TargetKind::effectiveness;
  return std::nullopt;
}

std::vector<std::string> ContextBundle::factor_ids(TargetKind target) const {
  std::vector<std::string> ids;
  for (const auto& f : factors) {
    if (f.target == target) ids.push_back(f.id);
  }
  return ids;
}

const InfluenceFactor* ContextBundle::find_factor(
    TargetKind target, std::string_view id) const noexcept {
  for (const auto& f : factors) {
    if (f.target == target && f.id == id) return &f;
  }
  return nullptr;
}

std::vector<ReleaseRecord> ContextBundle::included_releases() const {
  std::vector<ReleaseRecord> out;
  std::copy_if(releases.begin(), releases.end(), std::back_inserter(out),
               [](const ReleaseRecord& r) { return !r.excluded; });
  return out;
}

double defect_content_of(const ReleaseRecord& release) noexcept {
  return release.defects_found + release.defects_slipped;
}

double defect_density_of(const ReleaseRecord& release) noexcept {
  return defect_content_of(release) / release.size;
}

double effectiveness_of(const ReleaseRecord& release) {
  const double dc = defect_content_of(release);
  if (!(dc > 0.0)) {
    throw Error(ErrorKind::undefined_effectiveness,
                "release '" + release.id +
                    "' has no defects; effectiveness is undefined");
  }
  return release.defects_found / dc;
}

std::vector<RankedFactor> aggregate_rankings(
    std::span<const FactorRanking> rankings, TargetKind target,
    std::span<const std::string> factor_ids) {
  std::set<std::string> factor_set(factor_ids.begin(), factor_ids.end());
  std::vector<const FactorRanking*> relevant;
  for (const auto& r : rankings) {
    if (r.target != target) continue;
    relevant.push_back(&r);
    if (factor_ids.empty()) {
      for (const auto& [id, rank] : r.ranks) factor_set.insert(id);
    }
  }
  if (relevant.empty()) {
    throw Error(ErrorKind::empty_input,
                "no rankings for target " + std::string(to_string(target)));
  }

  const auto k = static_cast<int>(factor_set.size());
  // Integer rank sums keep the means exact and order independent.
  std::map<std::string, std::vector<int>> ranks_by_factor;
  for (const auto* r : relevant) {
    for (const auto& id : factor_set) {
      auto it = r->ranks.find(id);
      if (it == r->ranks.end()) {
        throw Error(ErrorKind::missing_factor,
                    "ranking by '" + r->expert + "' omits factor '" + id + "'");
      }
      if (it->second < 1 || it->second > k) {
        throw Error(ErrorKind::invalid_rank,
                    "ranking by '" + r->expert + "' gives factor '" + id +
                        "' rank " + std::to_string(it->second) +
                        " outside [1, " + std::to_string(k) + "]");
      }
      ranks_by_factor[id].push_back(it->second);
    }
  }

  std::vector<RankedFactor> out;
  out.reserve(ranks_by_factor.size());
  for (auto& [id, ranks] : ranks_by_factor) {
    long sum = 0;
    for (int r : ranks) sum += r;
    std::sort(ranks.begin(), ranks.end());
    const std::size_t n = ranks.size();
    const double median =
        n % 2 == 1 ? ranks[n / 2] : (ranks[n / 2 - 1] + ranks[n / 2]) / 2.0;
    out.push_back({id, static_cast<double>(sum) / static_cast<double>(n),
                   median});
  }
  std::sort(out.begin(), out.end(),
            [](const RankedFactor& a, const RankedFactor& b) {
              if (a.mean_rank != b.mean_rank) return a.mean_rank < b.mean_rank;
              if (a.median_rank != b.median_rank) {
                return a.median_rank < b.median_rank;
              }
              return a.id < b.id;
            });
  return out;
}

std::vector<std::string> default_active_factors(const ContextBundle& bundle,
                                                TargetKind target) {
  if (auto it = bundle.active_factors.find(target);
      it != bundle.active_factors.end()) {
    return it->second;
  }
  auto ids = bundle.factor_ids(target);
  if (target != TargetKind::effectiveness) return ids;

  const bool has_rankings = std::any_of(
      bundle.rankings.begin(), bundle.rankings.end(),
      [&](const FactorRanking& r) { return r.target == target; });
  if (!has_rankings || ids.size() <= kDefaultEffectivenessFactorCount) {
    return ids;
  }
  const auto ranked = aggregate_rankings(bundle.rankings, target, ids);
  std::vector<std::string> top;
  for (std::size_t i = 0; i < kDefaultEffectivenessFactorCount; ++i) {
    top.push_back(ranked[i].id);
  }
  return top;
}

ActiveFactors default_active_factors(const ContextBundle& bundle) {
  ActiveFactors active;
  for (auto t : kAllTargets) active[t] = default_active_factors(bundle, t);
  return active;
}

}  // namespace hydeep
