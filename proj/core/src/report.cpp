#include "hydeep/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "hydeep/error.hpp"

namespace hydeep {
namespace {

using nlohmann::json;

json num(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return std::strtod(format_number(v).c_str(), nullptr);
}

json opt_num(const std::optional<double>& v) {
  return v ? num(*v) : json(nullptr);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string pred_label(double q) { return "pred(" + format_number(q) + ")"; }

// Rows of cells rendered either as CSV or as a space-aligned table.
class Table {
 public:
  explicit Table(std::vector<std::string> header) {
    rows_.push_back(std::move(header));
  }

  void add(std::vector<std::string> row) {
    row.resize(rows_.front().size());
    rows_.push_back(std::move(row));
  }

  std::string csv() const {
    std::string out;
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += escape(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  std::string text() const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        width[i] = std::max(width[i], row[i].size());
      }
    }
    std::string out;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) line += "  ";
        line += row[i];
        if (i + 1 < row.size()) line.append(width[i] - row[i].size(), ' ');
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + '\n';
    }
    return out;
  }

  std::string render(ReportFormat format) const {
    return format == ReportFormat::csv ? csv() : text();
  }

 private:
  static std::string escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

  std::vector<std::vector<std::string>> rows_;
};

std::string opt_text(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

json accuracy_json(const AccuracyReport& r) {
  json cases = json::array();
  for (const auto& c : r.per_case) {
    cases.push_back({{"release", c.release_id},
                     {"predicted", num(c.predicted)},
                     {"actual", num(c.actual)},
                     {"re", num(c.re)},
                     {"mre", num(c.mre)}});
  }
  json pred = json::object();
  for (const auto& [q, v] : r.pred) pred[format_number(q)] = num(v);
  return {{"model", r.model_name},
          {"cases", std::move(cases)},
          {"mmre", num(r.mmre)},
          {"pred", std::move(pred)}};
}

Table accuracy_table(const AccuracyReport& r) {
  Table t({"release", "predicted", "actual", "mre"});
  for (const auto& c : r.per_case) {
    t.add({c.release_id, format_number(c.predicted), format_number(c.actual),
           format_number(c.mre)});
  }
  t.add({"mmre", "", "", format_number(r.mmre)});
  for (const auto& [q, v] : r.pred) {
    t.add({pred_label(q), "", "", format_number(v)});
  }
  return t;
}

json wilcoxon_json(const WilcoxonResult& w) {
  return {{"w_plus", num(w.w_plus)},
          {"w_minus", num(w.w_minus)},
          {"n_effective", w.n_effective},
          {"p_one_sided", num(w.p_one_sided)},
          {"method", to_string(w.method)},
          {"zero_differences", "dropped"},
          {"ties", "mid-ranks"}};
}

Table wilcoxon_table(const WilcoxonResult& w) {
  Table t({"statistic", "value"});
  t.add({"w_plus", format_number(w.w_plus)});
  t.add({"w_minus", format_number(w.w_minus)});
  t.add({"n_effective", std::to_string(w.n_effective)});
  t.add({"p_one_sided", format_number(w.p_one_sided)});
  t.add({"method", std::string(to_string(w.method))});
  t.add({"zero_differences", "dropped"});
  t.add({"ties", "mid-ranks"});
  return t;
}

json prediction_json(const Prediction& p) {
  json q = json::object();
  for (const auto& [prob, v] : p.quantiles) q[format_number(prob)] = num(v);
  json out = {{"target", to_string(p.target)},
              {"point", num(p.point)},
              {"quantiles", std::move(q)},
              {"seed", p.seed},
              {"n_samples", p.n_samples}};
  if (p.target == TargetKind::effectiveness) {
    out["raw_point"] = num(p.raw_point);
    out["clipped_fraction"] = num(p.clipped_fraction);
  }
  return out;
}

void add_prediction_rows(Table& t, const Prediction& p,
                         const std::string& prefix) {
  t.add({prefix + "point", format_number(p.point)});
  if (p.target == TargetKind::effectiveness) {
    t.add({prefix + "raw_point", format_number(p.raw_point)});
    t.add({prefix + "clipped_fraction", format_number(p.clipped_fraction)});
  }
  for (const auto& [prob, v] : p.quantiles) {
    t.add({prefix + "q" + format_number(prob), format_number(v)});
  }
  t.add({prefix + "seed", std::to_string(p.seed)});
  t.add({prefix + "n_samples", std::to_string(p.n_samples)});
}

}  // namespace

std::optional<ReportFormat> parse_report_format(
    std::string_view text) noexcept {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  if (text == "text") return ReportFormat::text;
  return std::nullopt;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string render(const AccuracyReport& report, ReportFormat format) {
  if (format == ReportFormat::json) return dump(accuracy_json(report));
  return accuracy_table(report).render(format);
}

std::string render(const CalibratedContext& ctx, ReportFormat format) {
  if (format == ReportFormat::json) {
    json releases = json::array();
    for (const auto& id : ctx.included_ids) {
      const auto& b = ctx.per_release.at(id);
      releases.push_back({{"release", id},
                          {"dd_base", num(b.dd_base)},
                          {"eff_base", opt_num(b.eff_base)},
                          {"ddif_point", num(b.ddif_point)},
                          {"eif_point", num(b.eif_point)}});
    }
    return dump({{"releases", std::move(releases)},
                 {"dd_base_median", num(ctx.dd_base_median)},
                 {"eff_base_median", opt_num(ctx.eff_base_median)},
                 {"included", ctx.included_ids}});
  }
  Table t({"release", "dd_base", "eff_base", "ddif_point", "eif_point"});
  for (const auto& id : ctx.included_ids) {
    const auto& b = ctx.per_release.at(id);
    t.add({id, format_number(b.dd_base), opt_text(b.eff_base),
           format_number(b.ddif_point), format_number(b.eif_point)});
  }
  t.add({"median", format_number(ctx.dd_base_median),
         opt_text(ctx.eff_base_median), "", ""});
  return t.render(format);
}

std::string render(const Prediction& prediction, ReportFormat format) {
  if (format == ReportFormat::json) return dump(prediction_json(prediction));
  Table t({"key", "value"});
  t.add({"target", std::string(to_string(prediction.target))});
  add_prediction_rows(t, prediction, "");
  return t.render(format);
}

std::string render(const DescriptiveStats& stats, ReportFormat format) {
  if (format == ReportFormat::json) {
    json releases = json::array();
    for (const auto& [id, m] : stats.per_release) {
      releases.push_back({{"release", id},
                          {"defect_density", num(m.defect_density)},
                          {"effectiveness", opt_num(m.effectiveness)}});
    }
    json flagged = json::array();
    for (const auto& f : stats.flagged) {
      flagged.push_back(
          {{"release", f.release_id}, {"measure", f.measure}, {"reason", f.reason}});
    }
    return dump({{"releases", std::move(releases)},
                 {"flagged", std::move(flagged)}});
  }
  Table t({"release", "defect_density", "effectiveness", "flags"});
  for (const auto& [id, m] : stats.per_release) {
    std::string flags;
    for (const auto& f : stats.flagged) {
      if (f.release_id != id) continue;
      if (!flags.empty()) flags += "; ";
      flags += f.measure + " " + f.reason;
    }
    t.add({id, format_number(m.defect_density), opt_text(m.effectiveness),
           flags});
  }
  return t.render(format);
}

std::string render(const WilcoxonResult& result, ReportFormat format) {
  if (format == ReportFormat::json) return dump(wilcoxon_json(result));
  return wilcoxon_table(result).render(format);
}

std::string render(const RankingReport& report, ReportFormat format) {
  if (format == ReportFormat::json) {
    json factors = json::array();
    std::size_t position = 1;
    for (const auto& f : report.factors) {
      factors.push_back({{"position", position++},
                         {"factor", f.id},
                         {"mean_rank", num(f.mean_rank)},
                         {"median_rank", num(f.median_rank)}});
    }
    return dump({{"target", to_string(report.target)},
                 {"factors", std::move(factors)}});
  }
  Table t({"position", "factor", "mean_rank", "median_rank"});
  std::size_t position = 1;
  for (const auto& f : report.factors) {
    t.add({std::to_string(position++), f.id, format_number(f.mean_rank),
           format_number(f.median_rank)});
  }
  return t.render(format);
}

std::string render(const PredictionReport& report, ReportFormat format) {
  if (format == ReportFormat::json) {
    json out = {{"defect_content", prediction_json(report.defect_content)}};
    out["effectiveness"] = report.effectiveness
                               ? prediction_json(*report.effectiveness)
                               : json(nullptr);
    out["defects_found"] = opt_num(report.defects_found);
    return dump(out);
  }
  Table t({"key", "value"});
  add_prediction_rows(t, report.defect_content, "defect_content.");
  if (report.effectiveness) {
    add_prediction_rows(t, *report.effectiveness, "effectiveness.");
  }
  if (report.defects_found) {
    t.add({"defects_found", format_number(*report.defects_found)});
  }
  return t.render(format);
}

std::string render(const CrossValidationReport& report, ReportFormat format) {
  if (format == ReportFormat::json) {
    json out = {{"target", to_string(report.target)},
                {"model", accuracy_json(report.model)}};
    out["baseline"] =
        report.baseline ? accuracy_json(*report.baseline) : json(nullptr);
    out["test"] = report.test ? wilcoxon_json(*report.test) : json(nullptr);
    return dump(out);
  }
  std::string out = "# " + report.model.model_name + "\n" +
                    accuracy_table(report.model).render(format);
  if (report.baseline) {
    out += "\n# " + report.baseline->model_name + "\n" +
           accuracy_table(*report.baseline).render(format);
  }
  if (report.test) {
    out += "\n# wilcoxon one-sided\n" +
           wilcoxon_table(*report.test).render(format);
  }
  return out;
}

std::string render(const AblationReport& report, ReportFormat format) {
  if (format == ReportFormat::json) {
    json points = json::array();
    for (const auto& p : report.points) {
      json pred = json::object();
      for (const auto& [q, v] : p.report.pred) pred[format_number(q)] = num(v);
      std::vector<std::string> active(
          report.ranking_order.begin(),
          report.ranking_order.begin() + static_cast<std::ptrdiff_t>(p.k));
      points.push_back({{"k", p.k},
                        {"factors", active},
                        {"mmre", num(p.report.mmre)},
                        {"pred", std::move(pred)}});
    }
    return dump({{"target", to_string(report.target)},
                 {"ranking", report.ranking_order},
                 {"points", std::move(points)}});
  }
  std::vector<std::string> header = {"k", "mmre"};
  if (!report.points.empty()) {
    for (const auto& [q, v] : report.points.front().report.pred) {
      header.push_back(pred_label(q));
    }
  }
  Table t(header);
  for (const auto& p : report.points) {
    std::vector<std::string> row = {std::to_string(p.k),
                                    format_number(p.report.mmre)};
    for (const auto& [q, v] : p.report.pred) row.push_back(format_number(v));
    t.add(std::move(row));
  }
  return t.render(format);
}

std::string render(const HistoryReport& report, ReportFormat format) {
  if (format == ReportFormat::json) {
    json steps = json::array();
    for (const auto& s : report.steps) {
      steps.push_back({{"history_size", s.history_size},
                       {"release", s.predicted_release_id},
                       {"predicted", num(s.predicted)},
                       {"actual", num(s.actual)},
                       {"mre", num(s.mre)}});
    }
    return dump(
        {{"target", to_string(report.target)}, {"steps", std::move(steps)}});
  }
  Table t({"history_size", "release", "predicted", "actual", "mre"});
  for (const auto& s : report.steps) {
    t.add({std::to_string(s.history_size), s.predicted_release_id,
           format_number(s.predicted), format_number(s.actual),
           format_number(s.mre)});
  }
  return t.render(format);
}

void write_text_file(const std::filesystem::path& path,
                     std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::unwritable_path,
                "cannot write '" + path.string() + "'");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(ErrorKind::unwritable_path,
                "write to '" + path.string() + "' failed");
  }
}

}  // namespace hydeep
