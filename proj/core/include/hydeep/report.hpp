#pragma once

// Report rendering. Output is deterministic: sorted JSON keys and every
// real formatted to 6 significant digits. CSV uses ',' separators, '.'
// decimals and LF line endings.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydeep/calibration.hpp"
#include "hydeep/evaluation.hpp"
#include "hydeep/model.hpp"
#include "hydeep/prediction.hpp"

namespace hydeep {

enum class ReportFormat { json, csv, text };

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept;

/// "%.6g"
std::string format_number(double value);

struct RankingReport {
  TargetKind target = TargetKind::defect_content;
  std::vector<RankedFactor> factors;
};

struct PredictionReport {
  Prediction defect_content;
  std::optional<Prediction> effectiveness;
  std::optional<double> defects_found;
};

struct CrossValidationReport {
  TargetKind target = TargetKind::defect_content;
  AccuracyReport model;
  std::optional<AccuracyReport> baseline;
  std::optional<WilcoxonResult> test;
};

struct AblationReport {
  TargetKind target = TargetKind::defect_content;
  std::vector<std::string> ranking_order;
  std::vector<AblationPoint> points;
};

struct HistoryReport {
  TargetKind target = TargetKind::defect_content;
  std::vector<HistoryStep> steps;
};

std::string render(const AccuracyReport& report, ReportFormat format);
std::string render(const CalibratedContext& ctx, ReportFormat format);
std::string render(const Prediction& prediction, ReportFormat format);
std::string render(const DescriptiveStats& stats, ReportFormat format);
std::string render(const WilcoxonResult& result, ReportFormat format);
std::string render(const RankingReport& report, ReportFormat format);
std::string render(const PredictionReport& report, ReportFormat format);
std::string render(const CrossValidationReport& report, ReportFormat format);
std::string render(const AblationReport& report, ReportFormat format);
std::string render(const HistoryReport& report, ReportFormat format);

/// Throws Error(unwritable_path) when the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view text);

template <typename Report>
void write_report(const Report& report, ReportFormat format,
                  const std::filesystem::path& path) {
  write_text_file(path, render(report, format));
}

}  // namespace hydeep
