#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hydeep/calibration.hpp"
#include "hydeep/increase.hpp"

namespace hydeep {

struct NewReleaseSpec {
  double size = 0.0;
  LevelMap levels;
};

inline const std::vector<double> kDefaultQuantileProbs = {0.05, 0.25, 0.5,
                                                          0.75, 0.95};

struct PredictOptions {
  std::vector<double> quantile_probs = kDefaultQuantileProbs;
  /// Resample historical base values per draw in addition to the increase
  /// factor uncertainty.
  bool bootstrap_base = false;
};

struct Prediction {
  TargetKind target = TargetKind::defect_content;
  double point = 0.0;
  /// Effectiveness point before clipping to 1; equals `point` for DC.
  double raw_point = 0.0;
  std::vector<std::pair<double, double>> quantiles;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  /// Fraction of samples clipped to exactly 1 (effectiveness only).
  double clipped_fraction = 0.0;
  /// Mapped samples in generation order.
  std::vector<double> samples;
};

/// Point forms shared by the full predictions and cross-validation.
double defect_content_point(const CalibratedContext& ctx, double size,
                            double ddif_point);
/// Before clipping; throws Error(no_effectiveness_history).
double effectiveness_point_raw(const CalibratedContext& ctx,
                               double eif_point);

/// DC = size * median(DD_base) * (1 + DDIF).
Prediction predict_defect_content(const CalibratedContext& ctx,
                                  const IncreaseModel& model,
                                  const NewReleaseSpec& spec,
                                  const EngineOptions& engine,
                                  const PredictOptions& options = {});

/// Eff = min(1, median(Eff_base) * (1 + EIF)), clipped per sample.
/// Throws Error(no_effectiveness_history) when no release defines Eff_base.
Prediction predict_effectiveness(const CalibratedContext& ctx,
                                 const IncreaseModel& model,
                                 const NewReleaseSpec& spec,
                                 const EngineOptions& engine,
                                 const PredictOptions& options = {});

/// Expected defects found: DC point times Eff point.
double predict_defects_found(const Prediction& dc, const Prediction& eff);

}  // namespace hydeep
