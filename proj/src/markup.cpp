#include "markup.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

namespace majinlink::detail {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return lower(x) == lower(y); });
}

std::string local_name(std::string_view tag_body) {
  std::size_t end = 0;
  while (end < tag_body.size() && !is_space(tag_body[end]) && tag_body[end] != '/' &&
         tag_body[end] != '>') {
    ++end;
  }
  std::string_view name = tag_body.substr(0, end);
  if (auto colon = name.rfind(':'); colon != std::string_view::npos) name.remove_prefix(colon + 1);
  std::string out(name);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

// Finds the '>' closing a tag that starts at `from`, skipping quoted values.
std::size_t tag_end(std::string_view doc, std::size_t from) {
  char quote = 0;
  for (std::size_t i = from; i < doc.size(); ++i) {
    const char c = doc[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      return i;
    }
  }
  return std::string_view::npos;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

const std::unordered_map<std::string_view, char32_t>& named_entities() {
  static const std::unordered_map<std::string_view, char32_t> table = {
      {"amp", U'&'},      {"lt", U'<'},        {"gt", U'>'},       {"quot", U'"'},
      {"apos", U'\''},    {"nbsp", 0x00a0},    {"shy", 0x00ad},    {"copy", 0x00a9},
      {"reg", 0x00ae},    {"laquo", 0x00ab},   {"raquo", 0x00bb},  {"mdash", 0x2014},
      {"ndash", 0x2013},  {"hellip", 0x2026},  {"lsquo", 0x2018},  {"rsquo", 0x2019},
      {"ldquo", 0x201c},  {"rdquo", 0x201d},   {"bull", 0x2022},   {"middot", 0x00b7},
      {"eacute", 0x00e9}, {"egrave", 0x00e8},  {"ecirc", 0x00ea},  {"agrave", 0x00e0},
      {"acirc", 0x00e2},  {"ccedil", 0x00e7},  {"ocirc", 0x00f4},  {"ucirc", 0x00fb},
      {"uuml", 0x00fc},   {"ouml", 0x00f6},    {"auml", 0x00e4},   {"szlig", 0x00df},
      {"ntilde", 0x00f1}, {"iacute", 0x00ed},  {"oacute", 0x00f3}, {"uacute", 0x00fa},
      {"aacute", 0x00e1}, {"euml", 0x00eb},    {"iuml", 0x00ef},   {"thinsp", 0x2009},
      {"ensp", 0x2002},   {"emsp", 0x2003},    {"zwnj", 0x200c},   {"zwj", 0x200d},
  };
  return table;
}

const std::unordered_set<std::string_view>& block_elements() {
  static const std::unordered_set<std::string_view> set = {
      "p",     "div",   "br",      "hr",     "h1",      "h2",         "h3",   "h4",
      "h5",    "h6",    "li",      "ul",     "ol",      "dl",         "dt",   "dd",
      "tr",    "table", "thead",   "tbody",  "tfoot",   "blockquote", "pre",  "section",
      "article", "header", "footer", "aside", "nav",    "figure",     "figcaption",
      "body",  "html",  "address", "caption", "main",   "center",
  };
  return set;
}

}  // namespace

std::optional<MarkupToken> MarkupScanner::next() {
  if (pos_ >= doc_.size()) return std::nullopt;
  const std::string_view rest = doc_.substr(pos_);
  MarkupToken tok;

  if (rest.front() != '<') {
    const auto lt = rest.find('<');
    tok.kind = MarkupToken::Kind::Text;
    tok.raw = rest.substr(0, lt);
    pos_ += tok.raw.size();
    return tok;
  }

  auto skip_to = [&](std::string_view terminator, std::size_t from) {
    const auto end = rest.find(terminator, from);
    const auto stop = end == std::string_view::npos ? rest.size() : end + terminator.size();
    tok.raw = rest.substr(0, stop);
    pos_ += stop;
  };

  if (rest.starts_with("<!--")) {
    tok.kind = MarkupToken::Kind::Skip;
    skip_to("-->", 4);
    return tok;
  }
  if (rest.starts_with("<![CDATA[")) {
    tok.kind = MarkupToken::Kind::CData;
    const auto end = rest.find("]]>", 9);
    const auto inner_end = end == std::string_view::npos ? rest.size() : end;
    tok.raw = rest.substr(9, inner_end - 9);
    pos_ += end == std::string_view::npos ? rest.size() : end + 3;
    return tok;
  }
  if (rest.starts_with("<!") || rest.starts_with("<?")) {
    tok.kind = MarkupToken::Kind::Skip;
    skip_to(">", 2);
    return tok;
  }

  const auto close = tag_end(rest, 1);
  if (close == std::string_view::npos) {
    tok.kind = MarkupToken::Kind::Skip;
    tok.raw = rest;
    pos_ = doc_.size();
    return tok;
  }
  tok.raw = rest.substr(0, close + 1);
  pos_ += close + 1;
  if (rest.size() > 1 && rest[1] == '/') {
    tok.kind = MarkupToken::Kind::Close;
    tok.name = local_name(rest.substr(2));
  } else {
    tok.kind = close > 0 && rest[close - 1] == '/' ? MarkupToken::Kind::SelfClosing
                                                   : MarkupToken::Kind::Open;
    tok.name = local_name(rest.substr(1));
  }
  return tok;
}

void MarkupScanner::skip_until_close(std::string_view name) {
  while (pos_ < doc_.size()) {
    const auto lt = doc_.find("</", pos_);
    if (lt == std::string_view::npos) break;
    const auto end = tag_end(doc_, lt + 2);
    if (end == std::string_view::npos) break;
    pos_ = end + 1;
    if (local_name(doc_.substr(lt + 2)) == name) return;
  }
  pos_ = doc_.size();
}

std::optional<std::string> tag_attribute(std::string_view tag, std::string_view name) {
  std::size_t i = tag.find_first_of(" \t\r\n");
  while (i != std::string_view::npos && i < tag.size()) {
    while (i < tag.size() && (is_space(tag[i]) || tag[i] == '/')) ++i;
    const std::size_t key_start = i;
    while (i < tag.size() && tag[i] != '=' && !is_space(tag[i]) && tag[i] != '>' && tag[i] != '/') ++i;
    std::string_view key = tag.substr(key_start, i - key_start);
    if (key.empty()) return std::nullopt;
    while (i < tag.size() && is_space(tag[i])) ++i;
    if (i >= tag.size() || tag[i] != '=') continue;
    ++i;
    while (i < tag.size() && is_space(tag[i])) ++i;
    if (i >= tag.size()) return std::nullopt;
    std::string_view value;
    if (tag[i] == '"' || tag[i] == '\'') {
      const char q = tag[i];
      const auto end = tag.find(q, i + 1);
      if (end == std::string_view::npos) return std::nullopt;
      value = tag.substr(i + 1, end - i - 1);
      i = end + 1;
    } else {
      const std::size_t start = i;
      while (i < tag.size() && !is_space(tag[i]) && tag[i] != '>') ++i;
      value = tag.substr(start, i - start);
    }
    if (auto colon = key.rfind(':'); colon != std::string_view::npos) key.remove_prefix(colon + 1);
    if (iequals(key, name)) return decode_entities(value);
  }
  return std::nullopt;
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    const auto semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(text[i++]);
      continue;
    }
    const std::string_view ref = text.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (ref.size() > 1 && ref[0] == '#') {
      const bool hex = ref[1] == 'x' || ref[1] == 'X';
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      std::uint32_t v = 0;
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, hex ? 16 : 10);
      if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty() && v > 0 &&
          v <= 0x10ffff && !(v >= 0xd800 && v <= 0xdfff)) {
        cp = v;
      }
    } else if (auto it = named_entities().find(ref); it != named_entities().end()) {
      cp = it->second;
    }
    if (cp) {
      append_utf8(out, *cp);
      i = semi + 1;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

std::string xhtml_to_text(std::string_view doc) {
  std::vector<std::string> paragraphs;
  std::string current;

  auto flush = [&] {
    std::string collapsed;
    bool space = false;
    for (char c : current) {
      if (is_space(c)) {
        space = !collapsed.empty();
        continue;
      }
      if (space) collapsed.push_back(' ');
      space = false;
      collapsed.push_back(c);
    }
    if (!collapsed.empty()) paragraphs.push_back(std::move(collapsed));
    current.clear();
  };

  MarkupScanner scanner(doc);
  while (auto tok = scanner.next()) {
    switch (tok->kind) {
      case MarkupToken::Kind::Text: current += decode_entities(tok->raw); break;
      case MarkupToken::Kind::CData: current.append(tok->raw); break;
      case MarkupToken::Kind::Skip: break;
      case MarkupToken::Kind::Open:
        if (tok->name == "head" || tok->name == "script" || tok->name == "style") {
          scanner.skip_until_close(tok->name);
          break;
        }
        [[fallthrough]];
      case MarkupToken::Kind::SelfClosing:
      case MarkupToken::Kind::Close:
        if (block_elements().contains(tok->name)) {
          flush();
        } else if (tok->name == "td" || tok->name == "th") {
          current.push_back(' ');
        }
        break;
    }
  }
  flush();

  std::string out;
  for (std::size_t i = 0; i < paragraphs.size(); ++i) {
    if (i) out.push_back('\n');
    out += paragraphs[i];
  }
  return out;
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    char32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      len = 2;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      len = 3;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
    i += len;
  }
  return true;
}

}  // namespace majinlink::detail
