#include "hydeep/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hydeep/calibration.hpp"
#include "hydeep/error.hpp"
#include "hydeep/prediction.hpp"
#include "hydeep/stats.hpp"

namespace hydeep {
namespace {

double relative_error(const std::string& id, double predicted, double actual) {
  if (actual == 0.0) {
    throw Error(ErrorKind::zero_actual,
                "release '" + id + "' has actual value 0; MRE is undefined");
  }
  return (predicted - actual) / actual;
}

double actual_value(const ReleaseRecord& r, TargetKind target) {
  return target == TargetKind::defect_content ? defect_content_of(r)
                                              : effectiveness_of(r);
}

// Included releases that can serve as cases (and history) for `target`.
std::vector<ReleaseRecord> usable_releases(
    std::span<const ReleaseRecord> releases, TargetKind target) {
  std::vector<ReleaseRecord> out;
  for (const auto& r : releases) {
    if (r.excluded) continue;
    if (target == TargetKind::effectiveness && !(defect_content_of(r) > 0.0)) {
      continue;
    }
    out.push_back(r);
  }
  return out;
}

void check_model_target(ModelKind kind, TargetKind target) {
  const bool ok = kind == ModelKind::influence_factor ||
                  (target == TargetKind::defect_content &&
                   (kind == ModelKind::dc_median ||
                    kind == ModelKind::dd_median)) ||
                  (target == TargetKind::effectiveness &&
                   kind == ModelKind::eff_median);
  if (!ok) {
    throw Error(ErrorKind::invalid_argument,
                "model " + std::string(to_string(kind)) +
                    " does not predict " + std::string(to_string(target)));
  }
}

double influence_factor_predict(std::span<const ReleaseRecord> history,
                                const CausalModel& model,
                                const ReleaseRecord& subject,
                                TargetKind target,
                                const EngineOptions& options) {
  const auto ctx = calibrate(history, model, options);
  const double increase =
      increase_point(model.for_target(target), subject.levels, options);
  if (target == TargetKind::defect_content) {
    return defect_content_point(ctx, subject.size, increase);
  }
  return std::min(1.0, effectiveness_point_raw(ctx, increase));
}

double predict_with(ModelKind kind, std::span<const ReleaseRecord> history,
                    const CausalModel& model, const ReleaseRecord& subject,
                    TargetKind target, const EngineOptions& options) {
  if (kind == ModelKind::influence_factor) {
    return influence_factor_predict(history, model, subject, target, options);
  }
  return baseline_predict(history, kind, subject.size);
}

}  // namespace

AccuracyReport accuracy_metrics(std::span<const PredictionCase> cases,
                                std::span<const double> thresholds,
                                std::string model_name) {
  if (cases.empty()) {
    throw Error(ErrorKind::empty_input, "accuracy metrics need cases");
  }
  AccuracyReport report;
  report.model_name = std::move(model_name);
  double mre_sum = 0.0;
  for (const auto& c : cases) {
    CaseAccuracy acc{c.release_id, c.predicted, c.actual, 0.0, 0.0};
    acc.re = relative_error(c.release_id, c.predicted, c.actual);
    acc.mre = std::abs(acc.re);
    mre_sum += acc.mre;
    report.per_case.push_back(acc);
  }
  const auto n = static_cast<double>(cases.size());
  report.mmre = mre_sum / n;
  for (double q : thresholds) {
    const auto hits = std::count_if(
        report.per_case.begin(), report.per_case.end(),
        [q](const CaseAccuracy& c) { return c.mre <= q; });
    report.pred[q] = static_cast<double>(hits) / n;
  }
  return report;
}

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::influence_factor: return "influence-factor";
    case ModelKind::dc_median: return "dc-median";
    case ModelKind::dd_median: return "dd-median";
    case ModelKind::eff_median: return "eff-median";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept {
  for (auto k : {ModelKind::influence_factor, ModelKind::dc_median,
                 ModelKind::dd_median, ModelKind::eff_median}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

double baseline_predict(std::span<const ReleaseRecord> history, ModelKind kind,
                        double new_size) {
  std::vector<double> values;
  for (const auto& r : history) {
    if (r.excluded) continue;
    switch (kind) {
      case ModelKind::dc_median: values.push_back(defect_content_of(r)); break;
      case ModelKind::dd_median: values.push_back(defect_density_of(r)); break;
      case ModelKind::eff_median:
        if (defect_content_of(r) > 0.0) values.push_back(effectiveness_of(r));
        break;
      case ModelKind::influence_factor:
        throw Error(ErrorKind::invalid_argument,
                    "influence-factor is not a baseline model");
    }
  }
  if (values.empty()) {
    throw Error(ErrorKind::empty_input,
                "baseline " + std::string(to_string(kind)) +
                    " needs at least one usable historical release");
  }
  if (kind == ModelKind::dd_median) {
    if (!(new_size > 0.0)) {
      throw Error(ErrorKind::invalid_argument,
                  "dd-median baseline needs a positive size");
    }
    return stats::median(values) * new_size;
  }
  return stats::median(values);
}

AccuracyReport loocv(std::span<const ReleaseRecord> releases,
                     const CausalModel& model, ModelKind kind,
                     TargetKind target, const EngineOptions& options,
                     std::span<const double> thresholds) {
  check_model_target(kind, target);
  const auto usable = usable_releases(releases, target);
  if (usable.size() < 2) {
    throw Error(ErrorKind::insufficient_history,
                "leave-one-out needs at least two usable releases");
  }
  std::vector<PredictionCase> cases;
  std::vector<ReleaseRecord> history;
  history.reserve(usable.size() - 1);
  for (std::size_t i = 0; i < usable.size(); ++i) {
    history.clear();
    for (std::size_t j = 0; j < usable.size(); ++j) {
      if (j != i) history.push_back(usable[j]);
    }
    const auto& subject = usable[i];
    cases.push_back({subject.id,
                     predict_with(kind, history, model, subject, target,
                                  options),
                     actual_value(subject, target)});
  }
  return accuracy_metrics(cases, thresholds, std::string(to_string(kind)));
}

std::string_view to_string(WilcoxonMethod method) noexcept {
  return method == WilcoxonMethod::exact_enumeration ? "exact-enumeration"
                                                     : "normal-approximation";
}

WilcoxonResult wilcoxon_one_sided(std::span<const MrePair> pairs) {
  struct Diff {
    double magnitude;
    bool negative;
  };
  std::vector<Diff> diffs;
  for (const auto& p : pairs) {
    const double d = p.mre_b - p.mre_a;
    if (std::abs(d) <= kWilcoxonTolerance) continue;
    diffs.push_back({std::abs(d), d < 0.0});
  }
  if (diffs.empty()) {
    throw Error(ErrorKind::all_zero_differences,
                "every paired difference is zero");
  }
  std::sort(diffs.begin(), diffs.end(), [](const Diff& a, const Diff& b) {
    return a.magnitude < b.magnitude;
  });

  // Doubled mid-ranks are integers: a tie group spanning 1-based positions
  // i..j gets rank (i + j) / 2.
  const std::size_t n = diffs.size();
  std::vector<long> doubled_rank(n);
  std::vector<std::size_t> tie_sizes;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && diffs[j + 1].magnitude - diffs[i].magnitude <=
                            kWilcoxonTolerance *
                                std::max(1.0, diffs[i].magnitude)) {
      ++j;
    }
    for (std::size_t k = i; k <= j; ++k) {
      doubled_rank[k] = static_cast<long>(i + 1 + j + 1);
    }
    tie_sizes.push_back(j - i + 1);
    i = j + 1;
  }

  long doubled_minus = 0;
  long doubled_total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    doubled_total += doubled_rank[k];
    if (diffs[k].negative) doubled_minus += doubled_rank[k];
  }

  WilcoxonResult out;
  out.n_effective = n;
  out.w_minus = static_cast<double>(doubled_minus) / 2.0;
  out.w_plus = static_cast<double>(doubled_total - doubled_minus) / 2.0;

  if (n <= kWilcoxonExactLimit) {
    // Subset-sum counts over the doubled ranks; every sign assignment is
    // equally likely under the null.
    std::vector<double> counts(static_cast<std::size_t>(doubled_total) + 1,
                               0.0);
    counts[0] = 1.0;
    long reach = 0;
    for (long r : doubled_rank) {
      for (long s = reach; s >= 0; --s) {
        if (counts[s] != 0.0) counts[s + r] += counts[s];
      }
      reach += r;
    }
    double at_most = 0.0;
    for (long s = 0; s <= doubled_minus; ++s) at_most += counts[s];
    out.p_one_sided = at_most / std::ldexp(1.0, static_cast<int>(n));
    out.method = WilcoxonMethod::exact_enumeration;
    return out;
  }

  const auto nn = static_cast<double>(n);
  double tie_correction = 0.0;
  for (auto t : tie_sizes) {
    const auto tt = static_cast<double>(t);
    tie_correction += tt * tt * tt - tt;
  }
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var =
      nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_correction / 48.0;
  const double z = (out.w_minus + 0.5 - mean) / std::sqrt(var);
  const double p = 0.5 * std::erfc(-z / std::sqrt(2.0));
  out.p_one_sided = std::clamp(p, std::numeric_limits<double>::min(), 1.0);
  out.method = WilcoxonMethod::normal_approximation;
  return out;
}

std::vector<MrePair> pair_mres(const AccuracyReport& a,
                               const AccuracyReport& b) {
  std::vector<MrePair> out;
  for (const auto& ca : a.per_case) {
    auto it = std::find_if(
        b.per_case.begin(), b.per_case.end(),
        [&](const CaseAccuracy& cb) { return cb.release_id == ca.release_id; });
    if (it == b.per_case.end()) {
      throw Error(ErrorKind::invalid_argument,
                  "release '" + ca.release_id + "' missing from " +
                      b.model_name + " report");
    }
    out.push_back({ca.mre, it->mre});
  }
  if (out.size() != b.per_case.size()) {
    throw Error(ErrorKind::invalid_argument,
                "cross-validation reports cover different releases");
  }
  return out;
}

std::vector<AblationPoint> ablation_curve(
    std::span<const ReleaseRecord> releases,
    std::span<const ExpertTriangle> triangles, const CausalModel& base_model,
    TargetKind target, std::span<const std::string> ranking_order,
    std::span<const std::size_t> ks, const EngineOptions& options) {
  std::vector<std::size_t> sorted_ks(ks.begin(), ks.end());
  std::sort(sorted_ks.begin(), sorted_ks.end());
  sorted_ks.erase(std::unique(sorted_ks.begin(), sorted_ks.end()),
                  sorted_ks.end());

  std::vector<AblationPoint> out;
  for (auto k : sorted_ks) {
    if (k > ranking_order.size()) {
      throw Error(ErrorKind::invalid_argument,
                  "ablation size " + std::to_string(k) + " exceeds the " +
                      std::to_string(ranking_order.size()) +
                      " ranked factors");
    }
    CausalModel model = base_model;
    const std::vector<std::string> top(ranking_order.begin(),
                                       ranking_order.begin() +
                                           static_cast<std::ptrdiff_t>(k));
    IncreaseModel reduced(target, top, triangles);
    (target == TargetKind::defect_content ? model.defect_content
                                          : model.effectiveness) =
        std::move(reduced);
    auto report = loocv(releases, model, ModelKind::influence_factor, target,
                        options);
    report.model_name = "influence-factor top-" + std::to_string(k);
    out.push_back({k, std::move(report)});
  }
  return out;
}

std::vector<HistoryStep> history_simulation(
    std::span<const ReleaseRecord> releases, const CausalModel& model,
    std::size_t start_m, const EngineOptions& options, TargetKind target) {
  const auto usable = usable_releases(releases, target);
  if (start_m < 2 || start_m >= usable.size()) {
    throw Error(ErrorKind::insufficient_history,
                "history simulation needs 2 <= start (" +
                    std::to_string(start_m) + ") < usable releases (" +
                    std::to_string(usable.size()) + ")");
  }
  std::vector<HistoryStep> steps;
  for (std::size_t m = start_m; m < usable.size(); ++m) {
    const std::span<const ReleaseRecord> history(usable.data(), m);
    const auto& subject = usable[m];
    HistoryStep step;
    step.history_size = m;
    step.predicted_release_id = subject.id;
    step.predicted =
        influence_factor_predict(history, model, subject, target, options);
    step.actual = actual_value(subject, target);
    step.mre = std::abs(relative_error(subject.id, step.predicted, step.actual));
    steps.push_back(step);
  }
  return steps;
}

}  // namespace hydeep
