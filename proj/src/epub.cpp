#include <map>
#include <vector>

#include "majinlink/error.hpp"
#include "majinlink/ingest.hpp"
#include "markup.hpp"
#include "zip_archive.hpp"

namespace majinlink {

namespace {

using detail::MarkupScanner;
using detail::MarkupToken;
using detail::tag_attribute;

struct ManifestItem {
  std::string href;
  std::string media_type;
};

struct Package {
  std::map<std::string, ManifestItem> manifest;
  std::vector<std::string> spine;
  std::vector<std::string> identifiers;
  std::optional<std::string> title;
};

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      const auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
      };
      const int hi = hex(s[i + 1]);
      const int lo = hex(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

// Joins an href onto the OPF directory, resolving "." and "..".
std::string resolve_href(const std::string& base_dir, std::string_view href) {
  if (auto hash = href.find('#'); hash != std::string_view::npos) href = href.substr(0, hash);
  std::string joined = href.starts_with("/") ? std::string(href.substr(1)) : base_dir + std::string(href);
  joined = percent_decode(joined);
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= joined.size()) {
    const auto slash = joined.find('/', pos);
    const auto stop = slash == std::string::npos ? joined.size() : slash;
    std::string part = joined.substr(pos, stop - pos);
    if (part == "..") {
      if (!parts.empty()) parts.pop_back();
    } else if (!part.empty() && part != ".") {
      parts.push_back(std::move(part));
    }
    pos = stop + 1;
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back('/');
    out += parts[i];
  }
  return out;
}

std::string find_package_path(std::string_view container) {
  MarkupScanner scanner(container);
  std::optional<std::string> fallback;
  while (auto tok = scanner.next()) {
    if ((tok->kind == MarkupToken::Kind::Open || tok->kind == MarkupToken::Kind::SelfClosing) &&
        tok->name == "rootfile") {
      auto path = tag_attribute(tok->raw, "full-path");
      if (!path) continue;
      const auto media = tag_attribute(tok->raw, "media-type");
      if (!media || *media == "application/oebps-package+xml") return *path;
      if (!fallback) fallback = path;
    }
  }
  if (fallback) return *fallback;
  throw ExtractionError("epub: container.xml names no rootfile");
}

Package parse_package(std::string_view opf) {
  Package pkg;
  MarkupScanner scanner(opf);
  // Set while inside <dc:identifier> or <dc:title>.
  std::optional<std::string> capture_name;
  std::string captured;
  while (auto tok = scanner.next()) {
    if (capture_name) {
      if (tok->kind == MarkupToken::Kind::Text) {
        captured += detail::decode_entities(tok->raw);
      } else if (tok->kind == MarkupToken::Kind::CData) {
        captured.append(tok->raw);
      } else if (tok->kind == MarkupToken::Kind::Close && tok->name == *capture_name) {
        if (*capture_name == "identifier") pkg.identifiers.push_back(captured);
        if (*capture_name == "title" && !pkg.title) pkg.title = captured;
        capture_name.reset();
      }
      continue;
    }
    const bool opening = tok->kind == MarkupToken::Kind::Open || tok->kind == MarkupToken::Kind::SelfClosing;
    if (!opening) continue;
    if (tok->name == "item") {
      auto id = tag_attribute(tok->raw, "id");
      auto href = tag_attribute(tok->raw, "href");
      if (id && href) {
        pkg.manifest[*id] = {*href, tag_attribute(tok->raw, "media-type").value_or("")};
      }
    } else if (tok->name == "itemref") {
      if (auto idref = tag_attribute(tok->raw, "idref")) pkg.spine.push_back(*idref);
    } else if ((tok->name == "identifier" || tok->name == "title") &&
               tok->kind == MarkupToken::Kind::Open && tok->raw.starts_with("<dc:")) {
      capture_name = tok->name;
      captured.clear();
    }
  }
  return pkg;
}

bool is_text_document(const ManifestItem& item) {
  if (item.media_type.empty()) return true;
  return item.media_type.find("html") != std::string::npos ||
         item.media_type.find("xml") != std::string::npos;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

EpubContent extract_epub(std::span<const std::byte> epub_bytes) {
  const detail::ZipArchive zip(epub_bytes);

  const auto container = zip.read("META-INF/container.xml");
  if (!container) throw ExtractionError("epub: missing META-INF/container.xml");
  const std::string package_path = find_package_path(*container);
  const auto opf = zip.read(package_path);
  if (!opf) throw ExtractionError("epub: missing package document " + package_path);

  const Package pkg = parse_package(*opf);
  if (pkg.spine.empty()) throw ExtractionError("epub: empty spine");
  const auto slash = package_path.rfind('/');
  const std::string base_dir = slash == std::string::npos ? "" : package_path.substr(0, slash + 1);

  EpubContent out;
  for (const auto& raw : pkg.identifiers) out.raw_identifiers.push_back(trim(raw));
  if (pkg.title) out.title = trim(*pkg.title);

  for (const auto& idref : pkg.spine) {
    const auto it = pkg.manifest.find(idref);
    if (it == pkg.manifest.end()) throw ExtractionError("epub: spine references unknown item " + idref);
    if (!is_text_document(it->second)) continue;
    const std::string path = resolve_href(base_dir, it->second.href);
    auto doc = zip.read(path);
    if (!doc) throw ExtractionError("epub: missing spine document " + path);
    if (doc->starts_with("\xEF\xBB\xBF")) doc->erase(0, 3);
    if (!detail::valid_utf8(*doc)) throw ExtractionError("epub: undecodable document " + path);
    std::string text = detail::xhtml_to_text(*doc);
    if (text.empty()) continue;
    if (!out.text.empty()) out.text += "\n\n";
    out.text += text;
  }
  return out;
}

std::string extract_epub_text(std::span<const std::byte> epub_bytes) {
  return extract_epub(epub_bytes).text;
}

}  // namespace majinlink
