#pragma once

// On-disk context bundle: one JSON document with the keys `factors`,
// `quantifications`, `rankings`, `releases` and `active_factors`.
// See docs/bundle_format.md.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydeep/model.hpp"

namespace hydeep {

enum class DiagnosticCode {
  parse_error,
  schema_error,
  reference_error,
  duplicate_id,
  triangle_order,
  level_range,
  value_range,
  rank_range,
  both_target_factor,
  outlier,
};

std::string_view to_string(DiagnosticCode code) noexcept;

struct Diagnostic {
  DiagnosticCode code = DiagnosticCode::schema_error;
  /// e.g. "release A", "quantification E2/D3/defect_content"
  std::string entity;
  std::string field;
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d);

struct LoadResult {
  /// Present only when there are no errors.
  std::optional<ContextBundle> bundle;
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const noexcept { return bundle.has_value(); }
};

/// Parses and validates exhaustively; every error names entity and field.
LoadResult parse_bundle(std::string_view json_text);
LoadResult load_bundle(const std::filesystem::path& path);

/// Invariant checks on an in-memory bundle (cross references, triangle
/// order, level ranges, uniqueness). Warnings cover factor names shared by
/// both targets and releases flagged by the outlier screen.
void validate_bundle(const ContextBundle& bundle,
                     std::vector<Diagnostic>& errors,
                     std::vector<Diagnostic>& warnings);

/// Canonical JSON text; parse_bundle(bundle_to_json(b)) reproduces b.
std::string bundle_to_json(const ContextBundle& bundle);

}  // namespace hydeep
