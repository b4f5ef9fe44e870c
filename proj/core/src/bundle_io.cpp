#include "hydeep/bundle_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hydeep/calibration.hpp"

namespace hydeep {
namespace {

using nlohmann::json;

// Collects schema diagnostics while reading one JSON object.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string entity,
               std::vector<Diagnostic>& errors)
      : obj_(obj), entity_(std::move(entity)), errors_(errors) {}

  const std::string& entity() const { return entity_; }

  void fail(DiagnosticCode code, const std::string& field,
            const std::string& message) {
    errors_.push_back({code, entity_, field, message});
  }

  const json* find(const std::string& field, bool required) {
    auto it = obj_.find(field);
    if (it == obj_.end() || it->is_null()) {
      if (required) fail(DiagnosticCode::schema_error, field, "missing field");
      return nullptr;
    }
    return &*it;
  }

  std::string string(const std::string& field, bool required = true) {
    const json* v = find(field, required);
    if (!v) return {};
    if (!v->is_string()) {
      fail(DiagnosticCode::schema_error, field, "expected a string");
      return {};
    }
    return v->get<std::string>();
  }

  double number(const std::string& field) {
    const json* v = find(field, true);
    if (!v) return 0.0;
    if (!v->is_number()) {
      fail(DiagnosticCode::schema_error, field, "expected a number");
      return 0.0;
    }
    return v->get<double>();
  }

  std::optional<TargetKind> target(const std::string& field = "target") {
    const auto text = string(field);
    if (text.empty()) return std::nullopt;
    auto t = parse_target(text);
    if (!t) {
      fail(DiagnosticCode::schema_error, field,
           "unknown target '" + text +
               "' (expected defect_content or effectiveness)");
    }
    return t;
  }

  /// Integer-valued map; non-integers are reported and skipped.
  std::map<std::string, int> int_map(const std::string& field) {
    std::map<std::string, int> out;
    const json* v = find(field, true);
    if (!v) return out;
    if (!v->is_object()) {
      fail(DiagnosticCode::schema_error, field, "expected an object");
      return out;
    }
    for (const auto& [key, value] : v->items()) {
      if (!value.is_number_integer()) {
        fail(DiagnosticCode::schema_error, field + "." + key,
             "expected an integer");
        continue;
      }
      out[key] = value.get<int>();
    }
    return out;
  }

 private:
  const json& obj_;
  std::string entity_;
  std::vector<Diagnostic>& errors_;
};

const json* array_field(const json& root, const std::string& key,
                        bool required, std::vector<Diagnostic>& errors) {
  auto it = root.find(key);
  if (it == root.end() || it->is_null()) {
    if (required) {
      errors.push_back({DiagnosticCode::schema_error, "bundle", key,
                        "missing top-level array"});
    }
    return nullptr;
  }
  if (!it->is_array()) {
    errors.push_back(
        {DiagnosticCode::schema_error, "bundle", key, "expected an array"});
    return nullptr;
  }
  return &*it;
}

std::string indexed(const std::string& kind, std::size_t i,
                    const std::string& id) {
  if (!id.empty()) return kind + " " + id;
  return kind + " #" + std::to_string(i);
}

void read_factors(const json& root, ContextBundle& b,
                  std::vector<Diagnostic>& errors) {
  const json* arr = array_field(root, "factors", true, errors);
  if (!arr) return;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const auto& item = (*arr)[i];
    if (!item.is_object()) {
      errors.push_back({DiagnosticCode::schema_error,
                        indexed("factor", i, ""), "", "expected an object"});
      continue;
    }
    const std::string id =
        item.contains("id") && item["id"].is_string() ? item["id"].get<std::string>() : "";
    ObjectReader r(item, indexed("factor", i, id), errors);
    InfluenceFactor f;
    f.id = r.string("id");
    f.name = r.string("name");
    f.description = r.string("description", false);
    auto t = r.target();
    if (t) f.target = *t;
    bool levels_ok = true;
    if (const json* lv = r.find("levels", true)) {
      if (!lv->is_array() || lv->size() != kLevelCount) {
        r.fail(DiagnosticCode::schema_error, "levels",
               "expected exactly 4 level descriptions");
        levels_ok = false;
      } else {
        for (int k = 0; k < kLevelCount; ++k) {
          if (!(*lv)[k].is_string()) {
            r.fail(DiagnosticCode::schema_error,
                   "levels[" + std::to_string(k) + "]", "expected a string");
            levels_ok = false;
          } else {
            f.levels[k] = (*lv)[k].get<std::string>();
          }
        }
      }
    } else {
      levels_ok = false;
    }
    if (!f.id.empty() && t && levels_ok) b.factors.push_back(std::move(f));
  }
}

void read_quantifications(const json& root, ContextBundle& b,
                          std::vector<Diagnostic>& errors) {
  const json* arr = array_field(root, "quantifications", true, errors);
  if (!arr) return;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const auto& item = (*arr)[i];
    if (!item.is_object()) {
      errors.push_back({DiagnosticCode::schema_error,
                        indexed("quantification", i, ""), "",
                        "expected an object"});
      continue;
    }
    ObjectReader r(item, indexed("quantification", i, ""), errors);
    ExpertTriangle tri;
    tri.expert = r.string("expert");
    tri.factor_id = r.string("factor");
    auto t = r.target();
    tri.min = r.number("min");
    tri.most_likely = r.number("most_likely");
    tri.max = r.number("max");
    if (t) tri.target = *t;
    if (!tri.expert.empty() && !tri.factor_id.empty() && t) {
      b.quantifications.push_back(std::move(tri));
    }
  }
}

void read_rankings(const json& root, ContextBundle& b,
                   std::vector<Diagnostic>& errors) {
  const json* arr = array_field(root, "rankings", false, errors);
  if (!arr) return;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const auto& item = (*arr)[i];
    if (!item.is_object()) {
      errors.push_back({DiagnosticCode::schema_error,
                        indexed("ranking", i, ""), "", "expected an object"});
      continue;
    }
    ObjectReader r(item, indexed("ranking", i, ""), errors);
    FactorRanking ranking;
    ranking.expert = r.string("expert");
    auto t = r.target();
    ranking.ranks = r.int_map("ranks");
    if (t) ranking.target = *t;
    if (!ranking.expert.empty() && t) b.rankings.push_back(std::move(ranking));
  }
}

void read_releases(const json& root, ContextBundle& b,
                   std::vector<Diagnostic>& errors) {
  const json* arr = array_field(root, "releases", true, errors);
  if (!arr) return;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const auto& item = (*arr)[i];
    if (!item.is_object()) {
      errors.push_back({DiagnosticCode::schema_error,
                        indexed("release", i, ""), "", "expected an object"});
      continue;
    }
    const std::string id =
        item.contains("id") && item["id"].is_string() ? item["id"].get<std::string>() : "";
    ObjectReader r(item, indexed("release", i, id), errors);
    ReleaseRecord rel;
    rel.id = r.string("id");
    rel.size = r.number("size");
    rel.defects_found = r.number("defects_found");
    rel.defects_slipped = r.number("defects_slipped");
    rel.levels = r.int_map("levels");
    if (const json* ex = r.find("excluded", false)) {
      if (ex->is_boolean()) {
        rel.excluded = ex->get<bool>();
      } else {
        r.fail(DiagnosticCode::schema_error, "excluded", "expected a boolean");
      }
    }
    rel.note = r.string("note", false);
    if (!rel.id.empty()) b.releases.push_back(std::move(rel));
  }
}

void read_active_factors(const json& root, ContextBundle& b,
                         std::vector<Diagnostic>& errors) {
  auto it = root.find("active_factors");
  if (it == root.end() || it->is_null()) return;
  if (!it->is_object()) {
    errors.push_back({DiagnosticCode::schema_error, "bundle", "active_factors",
                      "expected an object"});
    return;
  }
  for (const auto& [key, value] : it->items()) {
    auto t = parse_target(key);
    if (!t) {
      errors.push_back({DiagnosticCode::schema_error, "bundle",
                        "active_factors." + key, "unknown target"});
      continue;
    }
    if (!value.is_array()) {
      errors.push_back({DiagnosticCode::schema_error, "bundle",
                        "active_factors." + key, "expected an array of ids"});
      continue;
    }
    std::vector<std::string> ids;
    for (const auto& v : value) {
      if (v.is_string()) {
        ids.push_back(v.get<std::string>());
      } else {
        errors.push_back({DiagnosticCode::schema_error, "bundle",
                          "active_factors." + key, "expected string ids"});
      }
    }
    b.active_factors[*t] = std::move(ids);
  }
}

std::string triangle_entity(const ExpertTriangle& tri) {
  return "quantification " + tri.expert + "/" + tri.factor_id + "/" +
         std::string(to_string(tri.target));
}

}  // namespace

std::string_view to_string(DiagnosticCode code) noexcept {
  switch (code) {
    case DiagnosticCode::parse_error: return "parse-error";
    case DiagnosticCode::schema_error: return "schema-error";
    case DiagnosticCode::reference_error: return "reference-error";
    case DiagnosticCode::duplicate_id: return "duplicate-id";
    case DiagnosticCode::triangle_order: return "triangle-order";
    case DiagnosticCode::level_range: return "level-range";
    case DiagnosticCode::value_range: return "value-range";
    case DiagnosticCode::rank_range: return "rank-range";
    case DiagnosticCode::both_target_factor: return "both-target-factor";
    case DiagnosticCode::outlier: return "outlier";
  }
  return "unknown";
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = std::string(to_string(d.code)) + ": " + d.entity;
  if (!d.field.empty()) out += " [" + d.field + "]";
  return out + ": " + d.message;
}

void validate_bundle(const ContextBundle& b, std::vector<Diagnostic>& errors,
                     std::vector<Diagnostic>& warnings) {
  auto error = [&](DiagnosticCode code, std::string entity, std::string field,
                   std::string message) {
    errors.push_back(
        {code, std::move(entity), std::move(field), std::move(message)});
  };

  std::set<std::pair<TargetKind, std::string>> factor_keys;
  std::set<std::string> all_ids;
  std::map<std::string, std::set<TargetKind>> targets_by_name;
  for (const auto& f : b.factors) {
    if (!factor_keys.insert({f.target, f.id}).second) {
      error(DiagnosticCode::duplicate_id, "factor " + f.id, "id",
            "duplicate factor id for target " +
                std::string(to_string(f.target)));
    }
    all_ids.insert(f.id);
    targets_by_name[f.name].insert(f.target);
  }
  for (const auto& [name, targets] : targets_by_name) {
    if (targets.size() > 1) {
      warnings.push_back(
          {DiagnosticCode::both_target_factor, "factor '" + name + "'", "target",
           "influences both defect content and effectiveness; experts find "
           "the two opposing influences hard to separate when quantifying"});
    }
  }

  std::set<std::pair<TargetKind, std::string>> quantified;
  for (const auto& tri : b.quantifications) {
    const auto entity = triangle_entity(tri);
    if (!factor_keys.count({tri.target, tri.factor_id})) {
      error(DiagnosticCode::reference_error, entity, "factor",
            "no " + std::string(to_string(tri.target)) + " factor '" +
                tri.factor_id + "'");
    }
    if (!(0.0 <= tri.min)) {
      error(DiagnosticCode::triangle_order, entity, "min",
            "expert " + tri.expert + ", factor " + tri.factor_id +
                ": min must be >= 0");
    }
    if (!(tri.min <= tri.most_likely && tri.most_likely <= tri.max)) {
      error(DiagnosticCode::triangle_order, entity, "most_likely",
            "expert " + tri.expert + ", factor " + tri.factor_id +
                ": requires min <= most_likely <= max");
    }
    quantified.insert({tri.target, tri.factor_id});
  }
  for (const auto& key : factor_keys) {
    if (!quantified.count(key)) {
      error(DiagnosticCode::reference_error, "factor " + key.second,
            "quantifications",
            "no " + std::string(to_string(key.first)) + " quantification");
    }
  }

  for (const auto& r : b.rankings) {
    const auto entity = "ranking " + r.expert + "/" +
                        std::string(to_string(r.target));
    const auto ids = b.factor_ids(r.target);
    const auto k = static_cast<int>(ids.size());
    for (const auto& [id, rank] : r.ranks) {
      if (!factor_keys.count({r.target, id})) {
        error(DiagnosticCode::reference_error, entity, "ranks." + id,
              "unknown factor");
      }
      if (rank < 1 || rank > k) {
        error(DiagnosticCode::rank_range, entity, "ranks." + id,
              "rank " + std::to_string(rank) + " outside [1, " +
                  std::to_string(k) + "]");
      }
    }
    for (const auto& id : ids) {
      if (!r.ranks.count(id)) {
        error(DiagnosticCode::reference_error, entity, "ranks." + id,
              "ranking omits factor " + id);
      }
    }
  }

  std::set<std::string> release_ids;
  for (const auto& r : b.releases) {
    const auto entity = "release " + r.id;
    if (!release_ids.insert(r.id).second) {
      error(DiagnosticCode::duplicate_id, entity, "id", "duplicate release id");
    }
    if (!(r.size > 0.0)) {
      error(DiagnosticCode::value_range, entity, "size", "must be > 0");
    }
    if (!(r.defects_found >= 0.0)) {
      error(DiagnosticCode::value_range, entity, "defects_found",
            "must be >= 0");
    }
    if (!(r.defects_slipped >= 0.0)) {
      error(DiagnosticCode::value_range, entity, "defects_slipped",
            "must be >= 0");
    }
    for (const auto& [id, level] : r.levels) {
      if (!all_ids.count(id)) {
        error(DiagnosticCode::reference_error, entity, "levels." + id,
              "unknown factor");
      }
      if (level < 0 || level > kMaxLevel) {
        error(DiagnosticCode::level_range, entity, "levels." + id,
              "level " + std::to_string(level) + " outside [0, 3]");
      }
    }
    for (const auto& id : all_ids) {
      if (!r.levels.count(id)) {
        error(DiagnosticCode::reference_error, entity, "levels." + id,
              "release " + r.id + " has no level for factor " + id);
      }
    }
  }

  for (const auto& [target, ids] : b.active_factors) {
    for (const auto& id : ids) {
      if (!factor_keys.count({target, id})) {
        error(DiagnosticCode::reference_error, "bundle",
              "active_factors." + std::string(to_string(target)),
              "unknown factor " + id);
      }
    }
  }

  const bool measures_ok =
      std::all_of(b.releases.begin(), b.releases.end(),
                  [](const ReleaseRecord& r) {
                    return r.size > 0.0 && r.defects_found >= 0.0 &&
                           r.defects_slipped >= 0.0;
                  });
  if (measures_ok && !b.releases.empty()) {
    for (const auto& flag : descriptive_stats(b.releases).flagged) {
      warnings.push_back({DiagnosticCode::outlier,
                          "release " + flag.release_id, flag.measure,
                          flag.reason});
    }
  }
}

LoadResult parse_bundle(std::string_view json_text) {
  LoadResult result;
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    result.errors.push_back(
        {DiagnosticCode::parse_error, "bundle", "", e.what()});
    return result;
  }
  if (!root.is_object()) {
    result.errors.push_back({DiagnosticCode::parse_error, "bundle", "",
                             "top level must be a JSON object"});
    return result;
  }
  ContextBundle b;
  read_factors(root, b, result.errors);
  read_quantifications(root, b, result.errors);
  read_rankings(root, b, result.errors);
  read_releases(root, b, result.errors);
  read_active_factors(root, b, result.errors);
  validate_bundle(b, result.errors, result.warnings);
  if (result.errors.empty()) result.bundle = std::move(b);
  return result;
}

LoadResult load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    LoadResult result;
    result.errors.push_back({DiagnosticCode::parse_error, path.string(), "",
                             "cannot open bundle file"});
    return result;
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_bundle(text.str());
}

std::string bundle_to_json(const ContextBundle& b) {
  json root = json::object();
  json factors = json::array();
  for (const auto& f : b.factors) {
    factors.push_back({{"id", f.id},
                       {"name", f.name},
                       {"description", f.description},
                       {"target", to_string(f.target)},
                       {"levels", f.levels}});
  }
  json quantifications = json::array();
  for (const auto& t : b.quantifications) {
    quantifications.push_back({{"expert", t.expert},
                               {"factor", t.factor_id},
                               {"target", to_string(t.target)},
                               {"min", t.min},
                               {"most_likely", t.most_likely},
                               {"max", t.max}});
  }
  json rankings = json::array();
  for (const auto& r : b.rankings) {
    rankings.push_back({{"expert", r.expert},
                        {"target", to_string(r.target)},
                        {"ranks", r.ranks}});
  }
  json releases = json::array();
  for (const auto& r : b.releases) {
    json rel = {{"id", r.id},
                {"size", r.size},
                {"defects_found", r.defects_found},
                {"defects_slipped", r.defects_slipped},
                {"levels", r.levels},
                {"excluded", r.excluded}};
    if (!r.note.empty()) rel["note"] = r.note;
    releases.push_back(std::move(rel));
  }
  root["factors"] = std::move(factors);
  root["quantifications"] = std::move(quantifications);
  root["rankings"] = std::move(rankings);
  root["releases"] = std::move(releases);
  if (!b.active_factors.empty()) {
    json active = json::object();
    for (const auto& [t, ids] : b.active_factors) {
      active[std::string(to_string(t))] = ids;
    }
    root["active_factors"] = std::move(active);
  }
  return root.dump(2) + "\n";
}

}  // namespace hydeep
