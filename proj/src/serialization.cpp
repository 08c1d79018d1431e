#include "majinlink/serialization.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace majinlink {

namespace {

template <typename T>
void get_optional(const Json& j, const char* key, std::optional<T>& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) {
    out = it->get<T>();
  } else {
    out.reset();
  }
}

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? Json(*v) : Json(nullptr);
}

std::vector<std::string> string_list(const Json& j, const char* key) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) return it->get<std::vector<std::string>>();
  return {};
}

}  // namespace

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

void to_json(Json& j, const Identifier& id) { j = id.value; }

IdentifierSet identifiers_from_json(const Json& j) {
  IdentifierSet out;
  if (j.is_null()) return out;
  for (const auto& v : j) {
    std::string raw = v.is_object() ? v.at("value").get<std::string>() : v.get<std::string>();
    if (auto id = normalize_identifier(raw)) out.insert(std::move(*id));
  }
  return out;
}

void to_json(Json& j, const WorkRecord& w) {
  j = Json{{"work_id", w.work_id},
           {"title", w.title},
           {"author_ids", w.author_ids},
           {"author_names", w.author_names},
           {"edition_ids", w.edition_ids}};
  put_optional(j, "first_publication_year", w.first_publication_year);
  put_optional(j, "genres", w.genres);
  put_optional(j, "avg_rating", w.avg_rating);
  put_optional(j, "ratings_count", w.ratings_count);
  put_optional(j, "reviews_count", w.reviews_count);
}

void from_json(const Json& j, WorkRecord& w) {
  w.work_id = j.at("work_id").get<std::string>();
  w.title = j.value("title", "");
  w.author_ids = string_list(j, "author_ids");
  w.author_names = string_list(j, "author_names");
  w.edition_ids = string_list(j, "edition_ids");
  get_optional(j, "first_publication_year", w.first_publication_year);
  get_optional(j, "genres", w.genres);
  get_optional(j, "avg_rating", w.avg_rating);
  get_optional(j, "ratings_count", w.ratings_count);
  get_optional(j, "reviews_count", w.reviews_count);
}

void to_json(Json& j, const EditionRecord& e) {
  j = Json{{"edition_id", e.edition_id}, {"work_id", e.work_id}, {"title", e.title},
           {"language", e.language},     {"identifiers", e.identifiers}};
  put_optional(j, "publication_year", e.publication_year);
}

void from_json(const Json& j, EditionRecord& e) {
  e.edition_id = j.at("edition_id").get<std::string>();
  e.work_id = j.at("work_id").get<std::string>();
  e.title = j.value("title", "");
  e.language = normalize_language(j.value("language", "und"));
  e.identifiers = identifiers_from_json(j.value("identifiers", Json::array()));
  get_optional(j, "publication_year", e.publication_year);
}

void to_json(Json& j, const AuthorRecord& a) {
  j = Json{{"author_id", a.author_id}, {"name", a.name}, {"work_ids", a.work_ids}};
  put_optional(j, "ratings_count", a.ratings_count);
}

void from_json(const Json& j, AuthorRecord& a) {
  a.author_id = j.at("author_id").get<std::string>();
  a.name = j.value("name", "");
  a.work_ids = string_list(j, "work_ids");
  get_optional(j, "ratings_count", a.ratings_count);
}

void to_json(Json& j, const ShadowItem& s) {
  j = Json{{"item_id", s.item_id},
           {"extension", s.extension},
           {"size_bytes", s.size_bytes},
           {"identifiers", s.identifiers}};
  put_optional(j, "declared_title", s.declared_title);
  put_optional(j, "declared_language", s.declared_language);
  put_optional(j, "text_ref", s.text_ref);
  if (!s.embedded_identifiers.empty()) j["embedded_identifiers"] = s.embedded_identifiers;
}

void from_json(const Json& j, ShadowItem& s) {
  s.item_id = j.at("item_id").get<std::string>();
  s.extension = j.value("extension", "");
  if (!s.extension.empty() && s.extension.front() == '.') s.extension.erase(0, 1);
  for (auto& c : s.extension) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  s.size_bytes = j.value("size_bytes", std::uint64_t{0});
  s.identifiers = identifiers_from_json(j.value("identifiers", Json::array()));
  s.embedded_identifiers = identifiers_from_json(j.value("embedded_identifiers", Json::array()));
  get_optional(j, "declared_title", s.declared_title);
  get_optional(j, "declared_language", s.declared_language);
  get_optional(j, "text_ref", s.text_ref);
}

void to_json(Json& j, const Cluster& c) {
  j = Json{{"cluster_id", c.cluster_id}, {"item_ids", c.item_ids}, {"language", c.language},
           {"identifiers", c.identifiers}, {"titles", c.titles}};
}

void from_json(const Json& j, Cluster& c) {
  c.cluster_id = j.at("cluster_id").get<std::string>();
  c.item_ids = j.at("item_ids").get<std::vector<std::string>>();
  if (c.item_ids.empty()) throw Error(ErrorCode::Parse, "cluster " + c.cluster_id + " has no items");
  c.language = j.value("language", "und");
  c.identifiers = identifiers_from_json(j.value("identifiers", Json::array()));
  c.titles = string_list(j, "titles");
}

void to_json(Json& j, const Candidate& c) {
  j = Json{{"cluster_id", c.cluster_id},
           {"work_id", c.work_id},
           {"language", c.language},
           {"title_score", round_to(c.title_score, 4)},
           {"shared_identifiers", c.shared_identifiers}};
}

void from_json(const Json& j, Candidate& c) {
  c.cluster_id = j.at("cluster_id").get<std::string>();
  c.work_id = j.at("work_id").get<std::string>();
  c.language = j.value("language", "und");
  c.title_score = j.at("title_score").get<double>();
  c.shared_identifiers = identifiers_from_json(j.value("shared_identifiers", Json::array()));
}

void to_json(Json& j, const EvalLabel& l) {
  j = Json{{"cluster_id", l.key.cluster_id},
           {"work_id", l.key.work_id},
           {"label", std::string(to_string(l.label))},
           {"evaluator_id", l.evaluator_id},
           {"timestamp", l.timestamp}};
}

void from_json(const Json& j, EvalLabel& l) {
  l.key.cluster_id = j.at("cluster_id").get<std::string>();
  l.key.work_id = j.at("work_id").get<std::string>();
  const auto label = parse_label(j.at("label").get<std::string>());
  if (!label) throw Error(ErrorCode::Parse, "bad label value");
  l.label = *label;
  l.evaluator_id = j.value("evaluator_id", "");
  l.timestamp = j.value("timestamp", "");
}

void to_json(Json& j, const CatalogueEntry& e) {
  j = Json{{"work_id", e.work_id},
           {"first_publication_year", e.first_publication_year},
           {"author_names", e.author_names},
           {"author_ids", e.author_ids},
           {"title", e.title},
           {"shadow_item_ids", e.shadow_item_ids},
           {"language", e.language}};
  put_optional(j, "avg_rating", e.avg_rating);
  put_optional(j, "ratings_count", e.ratings_count);
  put_optional(j, "reviews_count", e.reviews_count);
  put_optional(j, "genres", e.genres);
  if (e.experimental) j["experimental"] = true;
}

void from_json(const Json& j, CatalogueEntry& e) {
  e.work_id = j.at("work_id").get<std::string>();
  e.first_publication_year = j.at("first_publication_year").get<int>();
  e.author_names = string_list(j, "author_names");
  e.author_ids = string_list(j, "author_ids");
  e.title = j.value("title", "");
  e.shadow_item_ids = string_list(j, "shadow_item_ids");
  e.language = j.value("language", "und");
  e.experimental = j.value("experimental", false);
  get_optional(j, "avg_rating", e.avg_rating);
  get_optional(j, "ratings_count", e.ratings_count);
  get_optional(j, "reviews_count", e.reviews_count);
  get_optional(j, "genres", e.genres);
}

void for_each_jsonl(const std::filesystem::path& path, const std::function<void(const Json&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(Json::parse(line));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.write(contents.data(), static_cast<std::streamsize>(contents.size()))) {
    throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
}

}  // namespace majinlink
