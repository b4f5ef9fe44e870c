#pragma once

// Validation apparatus: accuracy metrics, leave-one-out cross-validation,
// data-only baselines, the one-sided Wilcoxon matched-pairs test, the
// factor-count ablation and the incremental-history simulation.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hydeep/increase.hpp"
#include "hydeep/model.hpp"

namespace hydeep {

inline const std::vector<double> kDefaultPredThresholds = {0.25};

struct PredictionCase {
  std::string release_id;
  double predicted = 0.0;
  double actual = 0.0;
};

struct CaseAccuracy {
  std::string release_id;
  double predicted = 0.0;
  double actual = 0.0;
  /// (predicted - actual) / actual
  double re = 0.0;
  double mre = 0.0;
};

struct AccuracyReport {
  std::string model_name;
  std::vector<CaseAccuracy> per_case;
  double mmre = 0.0;
  /// threshold -> fraction of cases with MRE <= threshold
  std::map<double, double> pred;
};

/// Throws Error(zero_actual) when an actual value is 0 and
/// Error(empty_input) for no cases.
AccuracyReport accuracy_metrics(std::span<const PredictionCase> cases,
                                std::span<const double> thresholds =
                                    kDefaultPredThresholds,
                                std::string model_name = {});

enum class ModelKind { influence_factor, dc_median, dd_median, eff_median };

std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept;

/// Data-only predictions: median(DC), median(DD) * new_size, median(Eff).
/// Throws Error(empty_input) on empty history.
double baseline_predict(std::span<const ReleaseRecord> history, ModelKind kind,
                        double new_size = 0.0);

/// Each included release is predicted from a model calibrated on all other
/// included releases. Expert triangles stay fixed across folds. For the
/// effectiveness target, releases without defects are neither predicted nor
/// used for calibration. Throws Error(insufficient_history) when fewer than
/// two releases are usable.
AccuracyReport loocv(std::span<const ReleaseRecord> releases,
                     const CausalModel& model, ModelKind kind,
                     TargetKind target, const EngineOptions& options,
                     std::span<const double> thresholds =
                         kDefaultPredThresholds);

enum class WilcoxonMethod { exact_enumeration, normal_approximation };

std::string_view to_string(WilcoxonMethod method) noexcept;

struct WilcoxonResult {
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n_effective = 0;
  double p_one_sided = 1.0;
  WilcoxonMethod method = WilcoxonMethod::exact_enumeration;
};

struct MrePair {
  double mre_a = 0.0;
  double mre_b = 0.0;
};

/// Largest sample size handled by exact enumeration.
inline constexpr std::size_t kWilcoxonExactLimit = 20;
/// |d| below this counts as zero; |d| closer than this counts as tied.
inline constexpr double kWilcoxonTolerance = 1e-9;

/// One-sided test of "model A is more accurate": d = mre_b - mre_a, zero
/// differences dropped, tied |d| share mid-ranks, p = P(W- <= observed).
/// Throws Error(all_zero_differences) when nothing remains.
WilcoxonResult wilcoxon_one_sided(std::span<const MrePair> pairs);

/// Pairs two cross-validation reports by release id.
std::vector<MrePair> pair_mres(const AccuracyReport& a,
                               const AccuracyReport& b);

struct AblationPoint {
  std::size_t k = 0;
  AccuracyReport report;
};

/// LOOCV of the influence-factor model with the top-k factors of
/// `ranking_order` active for `target`. Throws Error(invalid_argument) for
/// k beyond the ranking size.
std::vector<AblationPoint> ablation_curve(
    std::span<const ReleaseRecord> releases,
    std::span<const ExpertTriangle> triangles, const CausalModel& base_model,
    TargetKind target, std::span<const std::string> ranking_order,
    std::span<const std::size_t> ks, const EngineOptions& options);

inline constexpr std::size_t kDefaultHistoryStart = 4;

struct HistoryStep {
  std::size_t history_size = 0;
  std::string predicted_release_id;
  double predicted = 0.0;
  double actual = 0.0;
  double mre = 0.0;
};

/// Calibrates on the first m included releases, predicts release m + 1,
/// then grows the history by one. Throws Error(insufficient_history) unless
/// 2 <= start_m < number of included releases.
std::vector<HistoryStep> history_simulation(
    std::span<const ReleaseRecord> releases, const CausalModel& model,
    std::size_t start_m, const EngineOptions& options,
    TargetKind target = TargetKind::defect_content);

}  // namespace hydeep
