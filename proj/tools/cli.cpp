#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hydeep/bundle_io.hpp"
#include "hydeep/calibration.hpp"
#include "hydeep/error.hpp"
#include "hydeep/evaluation.hpp"
#include "hydeep/increase.hpp"
#include "hydeep/prediction.hpp"
#include "hydeep/report.hpp"

namespace hydeep::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string bundle;
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
  std::string point = "analytic-mean";
  std::vector<std::string> exclude;
  std::vector<std::string> factors;
  std::string format = "json";
  std::string out;
};

struct CommandFlags {
  std::string target = "defect-content";
  std::string model = "influence-factor";
  std::string baseline;
  std::string test;
  std::vector<std::size_t> ks;
  std::size_t start = kDefaultHistoryStart;
  double size = 0.0;
  std::string levels;
  std::string spec;
  std::vector<double> quantiles = kDefaultQuantileProbs;
  bool bootstrap = false;
  std::string echo;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--bundle", f.bundle, "Context bundle (JSON)")->required();
  cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--samples", f.samples, "Monte-Carlo sample count")
      ->capture_default_str();
  cmd->add_option("--point", f.point, "Point estimate strategy")
      ->check(CLI::IsMember({"analytic-mean", "mc-median"}))
      ->capture_default_str();
  cmd->add_option("--exclude", f.exclude, "Release ids to exclude")
      ->delimiter(',');
  cmd->add_option("--factors", f.factors, "Active factor override")
      ->delimiter(',');
  cmd->add_option("--format", f.format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  cmd->add_option("--out", f.out, "Write the report to this file");
}

void add_target(CLI::App* cmd, CommandFlags& c) {
  cmd->add_option("--target", c.target, "Prediction target")
      ->check(CLI::IsMember({"defect-content", "effectiveness"}))
      ->capture_default_str();
}

TargetKind target_of(const CommandFlags& c) { return *parse_target(c.target); }

LevelMap parse_levels(const std::string& text) {
  LevelMap levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--levels expects ID=LEVEL pairs, got '" + item + "'");
    }
    try {
      std::size_t used = 0;
      const int level = std::stoi(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
      levels[item.substr(0, eq)] = level;
    } catch (const std::logic_error&) {
      throw UsageError("--levels: '" + item + "' has a non-integer level");
    }
  }
  return levels;
}

NewReleaseSpec read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open --spec file '" + path + "'");
  NewReleaseSpec spec;
  try {
    const auto j = nlohmann::json::parse(in);
    spec.size = j.at("size").get<double>();
    spec.levels = j.at("levels").get<LevelMap>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--spec file '" + path + "': " + e.what());
  }
  return spec;
}

void apply_exclusions(ContextBundle& bundle,
                      const std::vector<std::string>& ids) {
  for (const auto& id : ids) {
    auto it = std::find_if(bundle.releases.begin(), bundle.releases.end(),
                           [&](const ReleaseRecord& r) { return r.id == id; });
    if (it == bundle.releases.end()) {
      throw UsageError("--exclude: unknown release '" + id + "'");
    }
    it->excluded = true;
  }
}

// Listed ids replace the active set of every target that defines them;
// targets without a listed id keep their defaults.
ActiveFactors resolve_active(const ContextBundle& bundle,
                             const std::vector<std::string>& overrides) {
  ActiveFactors active = default_active_factors(bundle);
  if (overrides.empty()) return active;
  ActiveFactors listed;
  for (const auto& id : overrides) {
    bool known = false;
    for (auto t : kAllTargets) {
      if (bundle.find_factor(t, id)) {
        listed[t].push_back(id);
        known = true;
      }
    }
    if (!known) throw UsageError("--factors: unknown factor '" + id + "'");
  }
  for (auto& [t, ids] : listed) active[t] = std::move(ids);
  return active;
}

std::vector<std::string> ranking_order(const ContextBundle& bundle,
                                       TargetKind target, std::ostream& err) {
  const auto ids = bundle.factor_ids(target);
  const bool has_rankings =
      std::any_of(bundle.rankings.begin(), bundle.rankings.end(),
                  [&](const FactorRanking& r) { return r.target == target; });
  if (!has_rankings) {
    err << "warning: no " << to_string(target)
        << " rankings; using declaration order\n";
    return ids;
  }
  std::vector<std::string> order;
  for (const auto& f : aggregate_rankings(bundle.rankings, target, ids)) {
    order.push_back(f.id);
  }
  return order;
}

void emit(const std::string& text, const CommonFlags& f, std::ostream& out) {
  if (f.out.empty()) {
    out << text;
  } else {
    write_text_file(f.out, text);
  }
}

class Runner {
 public:
  Runner(const CommonFlags& common, const CommandFlags& cmd, std::ostream& out,
         std::ostream& err)
      : common_(common), cmd_(cmd), out_(out), err_(err) {}

  int operator()(const std::string& command) {
    auto loaded = load_bundle(common_.bundle);
    for (const auto& w : loaded.warnings) {
      err_ << "warning: " << format_diagnostic(w) << '\n';
    }
    if (!loaded.ok()) {
      for (const auto& e : loaded.errors) {
        err_ << "error: " << format_diagnostic(e) << '\n';
      }
      return kExitValidation;
    }
    bundle_ = std::move(*loaded.bundle);
    apply_exclusions(bundle_, common_.exclude);
    format_ = *parse_report_format(common_.format);
    if (common_.samples == 0) throw UsageError("--samples must be positive");
    engine_.samples = common_.samples;
    engine_.seed = common_.seed;
    engine_.point = common_.point == "mc-median" ? PointStrategy::mc_median
                                                 : PointStrategy::analytic_mean;

    if (command == "check") return check();
    if (command == "rank") return rank();

    err_ << "seed: " << engine_.seed << '\n';
    const auto active = resolve_active(bundle_, common_.factors);
    model_ = make_causal_model(bundle_, active);
    if (command == "calibrate") return calibrate_cmd();
    if (command == "predict") return predict_cmd();
    if (command == "crossval") return crossval_cmd();
    if (command == "ablate") return ablate_cmd();
    if (command == "historysim") return historysim_cmd();
    throw UsageError("unknown command " + command);
  }

 private:
  int check() {
    if (!cmd_.echo.empty()) write_text_file(cmd_.echo, bundle_to_json(bundle_));
    emit(render(descriptive_stats(bundle_.releases), format_), common_, out_);
    return kExitOk;
  }

  int rank() {
    const auto target = target_of(cmd_);
    RankingReport report{target, aggregate_rankings(bundle_.rankings, target,
                                                    bundle_.factor_ids(target))};
    emit(render(report, format_), common_, out_);
    return kExitOk;
  }

  int calibrate_cmd() {
    emit(render(calibrate(bundle_.releases, model_, engine_), format_),
         common_, out_);
    return kExitOk;
  }

  int predict_cmd() {
    NewReleaseSpec spec;
    if (!cmd_.spec.empty()) {
      spec = read_spec_file(cmd_.spec);
    } else {
      if (cmd_.levels.empty() && !(cmd_.size > 0.0)) {
        throw UsageError("predict needs --spec or --size with --levels");
      }
      spec.size = cmd_.size;
      spec.levels = parse_levels(cmd_.levels);
    }
    if (!(spec.size > 0.0)) throw UsageError("--size must be positive");
    for (double q : cmd_.quantiles) {
      if (!(q >= 0.0 && q <= 1.0)) {
        throw UsageError("--quantiles must lie in [0, 1]");
      }
    }
    PredictOptions options;
    options.quantile_probs = cmd_.quantiles;
    options.bootstrap_base = cmd_.bootstrap;

    const auto ctx = calibrate(bundle_.releases, model_, engine_);
    PredictionReport report{
        predict_defect_content(ctx, model_.defect_content, spec, engine_,
                               options),
        std::nullopt, std::nullopt};
    if (ctx.eff_base_median) {
      report.effectiveness = predict_effectiveness(ctx, model_.effectiveness,
                                                   spec, engine_, options);
      report.defects_found =
          predict_defects_found(report.defect_content, *report.effectiveness);
    } else {
      err_ << "warning: no release with defects; effectiveness not predicted\n";
    }
    emit(render(report, format_), common_, out_);
    return kExitOk;
  }

  int crossval_cmd() {
    const auto target = target_of(cmd_);
    const auto model_kind = parse_model_kind(cmd_.model);
    if (!model_kind) throw UsageError("unknown --model " + cmd_.model);
    CrossValidationReport report;
    report.target = target;
    report.model = loocv(bundle_.releases, model_, *model_kind, target, engine_);
    if (!cmd_.baseline.empty()) {
      const auto baseline_kind = parse_model_kind(cmd_.baseline);
      if (!baseline_kind) throw UsageError("unknown --baseline " + cmd_.baseline);
      report.baseline =
          loocv(bundle_.releases, model_, *baseline_kind, target, engine_);
    }
    if (!cmd_.test.empty()) {
      if (cmd_.test != "wilcoxon") throw UsageError("unknown --test " + cmd_.test);
      if (!report.baseline) throw UsageError("--test needs --baseline");
      report.test = wilcoxon_one_sided(pair_mres(report.model, *report.baseline));
    }
    emit(render(report, format_), common_, out_);
    return kExitOk;
  }

  int ablate_cmd() {
    const auto target = target_of(cmd_);
    AblationReport report;
    report.target = target;
    report.ranking_order = ranking_order(bundle_, target, err_);
    std::vector<std::size_t> ks = cmd_.ks;
    if (ks.empty()) {
      for (std::size_t k = 0; k <= report.ranking_order.size(); ++k) {
        ks.push_back(k);
      }
    }
    report.points =
        ablation_curve(bundle_.releases, bundle_.quantifications, model_,
                       target, report.ranking_order, ks, engine_);
    emit(render(report, format_), common_, out_);
    return kExitOk;
  }

  int historysim_cmd() {
    const auto target = target_of(cmd_);
    HistoryReport report{target, history_simulation(bundle_.releases, model_,
                                                    cmd_.start, engine_,
                                                    target)};
    emit(render(report, format_), common_, out_);
    return kExitOk;
  }

  const CommonFlags& common_;
  const CommandFlags& cmd_;
  std::ostream& out_;
  std::ostream& err_;
  ContextBundle bundle_;
  ReportFormat format_ = ReportFormat::json;
  EngineOptions engine_;
  CausalModel model_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Hybrid defect content and QA effectiveness estimation",
               "hydeep"};
  app.require_subcommand(1, 1);

  CommonFlags common;
  CommandFlags cmd;

  auto* check = app.add_subcommand(
      "check", "Validate a bundle and show descriptive statistics");
  add_common(check, common);
  check->add_option("--echo", cmd.echo,
                    "Also write the bundle back in canonical form");

  auto* rank = app.add_subcommand("rank", "Aggregate expert factor rankings");
  add_common(rank, common);
  add_target(rank, cmd);

  auto* calib = app.add_subcommand(
      "calibrate", "Derive base defect density and effectiveness");
  add_common(calib, common);

  auto* predict = app.add_subcommand("predict", "Predict a new release");
  add_common(predict, common);
  predict->add_option("--size", cmd.size, "Size of the new release");
  predict->add_option("--levels", cmd.levels, "Factor levels, ID=L[,ID=L]");
  predict->add_option("--spec", cmd.spec, "JSON file with size and levels");
  predict->add_option("--quantiles", cmd.quantiles, "Reported quantiles")
      ->delimiter(',');
  predict->add_flag("--bootstrap", cmd.bootstrap,
                    "Resample historical base values per draw");

  auto* crossval = app.add_subcommand(
      "crossval", "Leave-one-out cross-validation");
  add_common(crossval, common);
  add_target(crossval, cmd);
  crossval->add_option("--model", cmd.model, "Model under test")
      ->capture_default_str();
  crossval->add_option("--baseline", cmd.baseline, "Comparison model");
  crossval->add_option("--test", cmd.test, "Significance test (wilcoxon)");

  auto* ablate = app.add_subcommand(
      "ablate", "Cross-validate with the top-k ranked factors");
  add_common(ablate, common);
  add_target(ablate, cmd);
  ablate->add_option("--ks", cmd.ks, "Factor counts (default 0..K)")
      ->delimiter(',');

  auto* historysim = app.add_subcommand(
      "historysim", "Replay model building over a growing history");
  add_common(historysim, common);
  add_target(historysim, cmd);
  historysim->add_option("--start", cmd.start, "Initial history size")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  const auto subcommands = app.get_subcommands();
  const std::string command = subcommands.front()->get_name();
  try {
    return Runner(common, cmd, out, err)(command);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace hydeep::cli
