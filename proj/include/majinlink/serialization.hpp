#pragma once

// JSON mappings for the domain types and JSON Lines helpers.

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "majinlink/catalogue.hpp"
#include "majinlink/dedup.hpp"
#include "majinlink/error.hpp"
#include "majinlink/evaluation.hpp"
#include "majinlink/ingest.hpp"
#include "majinlink/linkage.hpp"
#include "majinlink/records.hpp"

namespace majinlink {

using Json = nlohmann::json;

// Identifiers are written as their canonical string; reading accepts any raw
// form and drops values that fail validation.
void to_json(Json& j, const Identifier& id);
IdentifierSet identifiers_from_json(const Json& j);

void to_json(Json& j, const WorkRecord& w);
void from_json(const Json& j, WorkRecord& w);
void to_json(Json& j, const EditionRecord& e);
void from_json(const Json& j, EditionRecord& e);
void to_json(Json& j, const AuthorRecord& a);
void from_json(const Json& j, AuthorRecord& a);
void to_json(Json& j, const ShadowItem& s);
void from_json(const Json& j, ShadowItem& s);
void to_json(Json& j, const Cluster& c);
void from_json(const Json& j, Cluster& c);
/// title_score rounded to 4 decimals.
void to_json(Json& j, const Candidate& c);
void from_json(const Json& j, Candidate& c);
void to_json(Json& j, const EvalLabel& l);
void from_json(const Json& j, EvalLabel& l);
void to_json(Json& j, const CatalogueEntry& e);
void from_json(const Json& j, CatalogueEntry& e);

double round_to(double value, int decimals);

/// Calls `fn` for every non-blank line parsed as JSON. Parse errors carry
/// the file name and line number.
void for_each_jsonl(const std::filesystem::path& path, const std::function<void(const Json&)>& fn);

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path) {
  std::vector<T> out;
  for_each_jsonl(path, [&](const Json& j) { out.push_back(j.get<T>()); });
  return out;
}

template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  for (const auto& r : records) out << Json(r).dump() << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace majinlink
