#include "hydeep/prediction.hpp"

#include <algorithm>

#include "hydeep/error.hpp"
#include "hydeep/stats.hpp"

namespace hydeep {
namespace {

constexpr std::string_view kBootstrapStream = "\x01" "bootstrap";

// One median of a with-replacement resample per draw.
std::vector<double> bootstrap_medians(std::span<const double> values,
                                      std::size_t draws, std::uint64_t seed,
                                      TargetKind target) {
  FactorStream stream(seed, target, kBootstrapStream);
  std::vector<double> out(draws);
  std::vector<double> resample(values.size());
  const auto n = values.size();
  for (auto& m : out) {
    for (auto& v : resample) {
      const auto pick = std::min(
          n - 1, static_cast<std::size_t>(stream.uniform() *
                                          static_cast<double>(n)));
      v = values[pick];
    }
    m = stats::median(resample);
  }
  return out;
}

void check_spec(const NewReleaseSpec& spec) {
  if (!(spec.size > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "release size must be positive");
  }
}

void fill_quantiles(Prediction& p, const PredictOptions& options) {
  const auto q = stats::quantiles(p.samples, options.quantile_probs);
  p.quantiles.clear();
  for (std::size_t i = 0; i < q.size(); ++i) {
    p.quantiles.emplace_back(options.quantile_probs[i], q[i]);
  }
}

void require_effectiveness_history(const CalibratedContext& ctx) {
  if (!ctx.eff_base_median) {
    throw Error(ErrorKind::no_effectiveness_history,
                "no historical release has defects; base effectiveness is "
                "undefined");
  }
}

}  // namespace

double defect_content_point(const CalibratedContext& ctx, double size,
                            double ddif_point) {
  return size * ctx.dd_base_median * (1.0 + ddif_point);
}

double effectiveness_point_raw(const CalibratedContext& ctx,
                               double eif_point) {
  require_effectiveness_history(ctx);
  return *ctx.eff_base_median * (1.0 + eif_point);
}

Prediction predict_defect_content(const CalibratedContext& ctx,
                                  const IncreaseModel& model,
                                  const NewReleaseSpec& spec,
                                  const EngineOptions& engine,
                                  const PredictOptions& options) {
  check_spec(spec);
  if (ctx.included_ids.empty()) {
    throw Error(ErrorKind::no_usable_history,
                "calibrated context holds no releases");
  }
  auto ddif = increase_distribution(model, spec.levels, engine);

  Prediction p;
  p.target = TargetKind::defect_content;
  p.seed = engine.seed;
  p.n_samples = ddif.distribution.size();
  p.point = defect_content_point(ctx, spec.size, ddif.point);
  p.raw_point = p.point;

  p.samples = std::move(ddif.distribution.samples);
  if (options.bootstrap_base) {
    const auto bases = bootstrap_medians(ctx.dd_base_values(), p.n_samples,
                                         engine.seed, p.target);
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
      p.samples[i] = spec.size * bases[i] * (1.0 + p.samples[i]);
    }
  } else {
    for (auto& s : p.samples) s = spec.size * ctx.dd_base_median * (1.0 + s);
  }
  fill_quantiles(p, options);
  return p;
}

Prediction predict_effectiveness(const CalibratedContext& ctx,
                                 const IncreaseModel& model,
                                 const NewReleaseSpec& spec,
                                 const EngineOptions& engine,
                                 const PredictOptions& options) {
  check_spec(spec);
  if (ctx.included_ids.empty()) {
    throw Error(ErrorKind::no_usable_history,
                "calibrated context holds no releases");
  }
  require_effectiveness_history(ctx);
  const double base = *ctx.eff_base_median;
  auto eif = increase_distribution(model, spec.levels, engine);

  Prediction p;
  p.target = TargetKind::effectiveness;
  p.seed = engine.seed;
  p.n_samples = eif.distribution.size();
  p.raw_point = effectiveness_point_raw(ctx, eif.point);
  p.point = std::min(1.0, p.raw_point);

  p.samples = std::move(eif.distribution.samples);
  std::vector<double> bases;
  if (options.bootstrap_base) {
    bases = bootstrap_medians(ctx.eff_base_values(), p.n_samples, engine.seed,
                              p.target);
  }
  std::size_t clipped = 0;
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    const double b = options.bootstrap_base ? bases[i] : base;
    const double raw = b * (1.0 + p.samples[i]);
    if (raw >= 1.0) ++clipped;
    p.samples[i] = std::min(1.0, raw);
  }
  p.clipped_fraction =
      static_cast<double>(clipped) / static_cast<double>(p.samples.size());
  fill_quantiles(p, options);
  return p;
}

double predict_defects_found(const Prediction& dc, const Prediction& eff) {
  return dc.point * eff.point;
}

}  // namespace hydeep
