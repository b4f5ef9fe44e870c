#include "hydeep/calibration.hpp"

#include <algorithm>

#include "hydeep/error.hpp"
#include "hydeep/report.hpp"
#include "hydeep/stats.hpp"

namespace hydeep {

std::vector<double> CalibratedContext::dd_base_values() const {
  std::vector<double> out;
  for (const auto& id : included_ids) out.push_back(per_release.at(id).dd_base);
  return out;
}

std::vector<double> CalibratedContext::eff_base_values() const {
  std::vector<double> out;
  for (const auto& id : included_ids) {
    if (const auto& eff = per_release.at(id).eff_base) out.push_back(*eff);
  }
  return out;
}

double base_defect_density(const ReleaseRecord& release, double ddif_point) {
  return defect_content_of(release) / (release.size * (1.0 + ddif_point));
}

double base_effectiveness(const ReleaseRecord& release, double eif_point) {
  return effectiveness_of(release) / (1.0 + eif_point);
}

CalibratedContext calibrate(std::span<const ReleaseRecord> releases,
                            const CausalModel& model,
                            const EngineOptions& options) {
  CalibratedContext ctx;
  for (const auto& r : releases) {
    if (r.excluded) continue;
    if (!(r.size > 0.0)) {
      throw Error(ErrorKind::invalid_argument,
                  "release '" + r.id + "' has non-positive size");
    }
    ReleaseBase base;
    base.ddif_point = increase_point(model.defect_content, r.levels, options);
    base.eif_point = increase_point(model.effectiveness, r.levels, options);
    base.dd_base = base_defect_density(r, base.ddif_point);
    if (defect_content_of(r) > 0.0) {
      base.eff_base = base_effectiveness(r, base.eif_point);
    }
    ctx.per_release.emplace(r.id, base);
    ctx.included_ids.push_back(r.id);
  }
  if (ctx.included_ids.empty()) {
    throw Error(ErrorKind::no_usable_history,
                "every historical release is excluded");
  }
  ctx.dd_base_median = stats::median(ctx.dd_base_values());
  if (const auto eff = ctx.eff_base_values(); !eff.empty()) {
    ctx.eff_base_median = stats::median(eff);
  }
  return ctx;
}

namespace {

void flag_outliers(const std::vector<std::pair<std::string, double>>& values,
                   const std::string& measure,
                   std::vector<FlaggedValue>& flagged) {
  if (values.size() < 2) return;
  std::vector<double> sorted;
  for (const auto& [id, v] : values) sorted.push_back(v);
  std::sort(sorted.begin(), sorted.end());
  const double q1 = stats::nearest_rank(sorted, 0.25);
  const double q3 = stats::nearest_rank(sorted, 0.75);
  const double iqr = q3 - q1;
  const double lower = q1 - 1.5 * iqr;
  const double upper = q3 + 1.5 * iqr;
  for (const auto& [id, v] : values) {
    if (v < lower) {
      flagged.push_back({id, measure,
                         "below lower fence Q1 - 1.5 IQR = " +
                             format_number(lower)});
    } else if (v > upper) {
      flagged.push_back({id, measure,
                         "above upper fence Q3 + 1.5 IQR = " +
                             format_number(upper)});
    }
  }
}

}  // namespace

DescriptiveStats descriptive_stats(std::span<const ReleaseRecord> releases) {
  DescriptiveStats out;
  std::vector<std::pair<std::string, double>> dd;
  std::vector<std::pair<std::string, double>> eff;
  for (const auto& r : releases) {
    ReleaseMeasures m;
    m.defect_density = defect_density_of(r);
    dd.emplace_back(r.id, m.defect_density);
    if (defect_content_of(r) > 0.0) {
      m.effectiveness = effectiveness_of(r);
      eff.emplace_back(r.id, *m.effectiveness);
    }
    out.per_release.emplace_back(r.id, m);
  }
  flag_outliers(dd, "defect_density", out.flagged);
  flag_outliers(eff, "effectiveness", out.flagged);
  return out;
}

}  // namespace hydeep
