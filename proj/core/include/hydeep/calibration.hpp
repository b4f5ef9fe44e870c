#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hydeep/increase.hpp"
#include "hydeep/model.hpp"

namespace hydeep {

struct ReleaseBase {
  double dd_base = 0.0;
  /// Absent for releases without defects.
  std::optional<double> eff_base;
  double ddif_point = 0.0;
  double eif_point = 0.0;
};

struct CalibratedContext {
  std::map<std::string, ReleaseBase> per_release;
  double dd_base_median = 0.0;
  std::optional<double> eff_base_median;
  /// Chronological order.
  std::vector<std::string> included_ids;

  std::vector<double> dd_base_values() const;
  std::vector<double> eff_base_values() const;
};

/// DD_base = DC / (size * (1 + DDIF)).
double base_defect_density(const ReleaseRecord& release, double ddif_point);

/// Eff_base = Eff / (1 + EIF); throws Error(undefined_effectiveness) when
/// the release has no defects.
double base_effectiveness(const ReleaseRecord& release, double eif_point);

/// Excluded releases are skipped. Throws Error(no_usable_history) when no
/// release remains.
CalibratedContext calibrate(std::span<const ReleaseRecord> releases,
                            const CausalModel& model,
                            const EngineOptions& options);

struct FlaggedValue {
  std::string release_id;
  std::string measure;
  std::string reason;
};

struct ReleaseMeasures {
  double defect_density = 0.0;
  std::optional<double> effectiveness;
};

struct DescriptiveStats {
  /// Chronological order, all releases (excluded ones too).
  std::vector<std::pair<std::string, ReleaseMeasures>> per_release;
  std::vector<FlaggedValue> flagged;
};

/// Advisory outlier screen: values outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR],
/// quartiles by nearest rank. Never excludes anything itself.
DescriptiveStats descriptive_stats(std::span<const ReleaseRecord> releases);

}  // namespace hydeep
