#include "fixtures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <set>
#include <fstream>
#include <stdexcept>

#include <json.hpp>
#include <zlib.h>

namespace fixture {

namespace fs = std::filesystem;

std::vector<std::byte> to_bytes(const std::string& s) {
  std::vector<std::byte> out(s.size());
  std::memcpy(out.data(), s.data(), s.size());
  return out;
}

namespace {

void put16(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put32(std::string& out, std::uint32_t v) {
  put16(out, v & 0xffff);
  put16(out, v >> 16);
}

std::string raw_deflate(const std::string& data) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw std::runtime_error("deflateInit2 failed");
  }
  std::string out(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw std::runtime_error("deflate failed");
  out.resize(zs.total_out);
  return out;
}

}  // namespace

void ZipWriter::add(const std::string& name, const std::string& data, bool deflate) {
  Entry e;
  e.name = name;
  e.crc = static_cast<std::uint32_t>(crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
                                           static_cast<uInt>(data.size())));
  e.size = static_cast<std::uint32_t>(data.size());
  e.method = deflate ? 8 : 0;
  e.payload = deflate ? raw_deflate(data) : data;
  entries_.push_back(std::move(e));
}

std::vector<std::byte> ZipWriter::finish() const {
  std::string out;
  std::string central;
  for (const auto& e : entries_) {
    const auto offset = static_cast<std::uint32_t>(out.size());
    put32(out, 0x04034b50);
    put16(out, 20);
    put16(out, 0);
    put16(out, e.method);
    put16(out, 0);
    put16(out, 0);
    put32(out, e.crc);
    put32(out, static_cast<std::uint32_t>(e.payload.size()));
    put32(out, e.size);
    put16(out, static_cast<std::uint32_t>(e.name.size()));
    put16(out, 0);
    out += e.name;
    out += e.payload;

    put32(central, 0x02014b50);
    put16(central, 20);
    put16(central, 20);
    put16(central, 0);
    put16(central, e.method);
    put16(central, 0);
    put16(central, 0);
    put32(central, e.crc);
    put32(central, static_cast<std::uint32_t>(e.payload.size()));
    put32(central, e.size);
    put16(central, static_cast<std::uint32_t>(e.name.size()));
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, 0);
    put32(central, offset);
    central += e.name;
  }
  const auto cd_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, 0x06054b50);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint32_t>(entries_.size()));
  put16(out, static_cast<std::uint32_t>(entries_.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0);
  return to_bytes(out);
}

std::string paragraphs(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += "<p>" + l + "</p>\n";
  return out;
}

std::vector<std::byte> make_epub(const EpubSpec& spec) {
  ZipWriter zip;
  zip.add("mimetype", "application/epub+zip");
  zip.add("META-INF/container.xml",
          "<?xml version=\"1.0\"?>\n"
          "<container version=\"1.0\" xmlns=\"urn:oasis:names:tc:opendocument:xmlns:container\">\n"
          "  <rootfiles><rootfile full-path=\"OEBPS/content.opf\" "
          "media-type=\"application/oebps-package+xml\"/></rootfiles>\n"
          "</container>\n");
  std::string opf =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<package xmlns=\"http://www.idpf.org/2007/opf\" version=\"3.0\" unique-identifier=\"uid\">\n"
      "<metadata xmlns:dc=\"http://purl.org/dc/elements/1.1/\">\n"
      "<dc:title>" + spec.title + "</dc:title>\n";
  for (std::size_t i = 0; i < spec.identifiers.size(); ++i) {
    opf += "<dc:identifier id=\"id" + std::to_string(i) + "\">" + spec.identifiers[i] + "</dc:identifier>\n";
  }
  opf += "</metadata>\n<manifest>\n<item id=\"nav\" href=\"nav.xhtml\" media-type=\"application/xhtml+xml\" properties=\"nav\"/>\n"
         "<item id=\"css\" href=\"style.css\" media-type=\"text/css\"/>\n";
  for (std::size_t i = 0; i < spec.chapters.size(); ++i) {
    opf += "<item id=\"ch" + std::to_string(i) + "\" href=\"text/ch" + std::to_string(i) +
           ".xhtml\" media-type=\"application/xhtml+xml\"/>\n";
  }
  opf += "</manifest>\n<spine>\n";
  for (std::size_t i = 0; i < spec.chapters.size(); ++i) opf += "<itemref idref=\"ch" + std::to_string(i) + "\"/>\n";
  opf += "</spine>\n</package>\n";
  zip.add("OEBPS/content.opf", opf);
  zip.add("OEBPS/style.css", "p { margin: 0 }\n");
  zip.add("OEBPS/nav.xhtml", "<html><body><nav><ol><li>Contents</li></ol></nav></body></html>");
  for (std::size_t i = 0; i < spec.chapters.size(); ++i) {
    const std::string doc =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!DOCTYPE html>\n"
        "<html xmlns=\"http://www.w3.org/1999/xhtml\"><head><title>Chapter</title>"
        "<style>p{color:red}</style></head>\n<body>\n" + spec.chapters[i] + "</body></html>\n";
    zip.add("OEBPS/text/ch" + std::to_string(i) + ".xhtml", doc, spec.deflate_chapters);
  }
  return zip.finish();
}

TempDir::TempDir() {
  static std::mt19937_64 rng(std::random_device{}());
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto p = fs::temp_directory_path() / ("mjl-test-" + std::to_string(rng()));
    if (fs::create_directory(p)) {
      path_ = p;
      return;
    }
  }
  throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_binary(const fs::path& path, const std::vector<std::byte>& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

namespace {

std::string digits(std::mt19937_64& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng() % 10));
  return s;
}

char check13(const std::string& first12) {
  int sum = 0;
  for (std::size_t i = 0; i < 12; ++i) sum += (first12[i] - '0') * (i % 2 ? 3 : 1);
  return static_cast<char>('0' + (10 - sum % 10) % 10);
}

}  // namespace

std::string random_isbn13(std::mt19937_64& rng) {
  std::string s = "978" + digits(rng, 9);
  return s + check13(s);
}

std::string random_isbn10(std::mt19937_64& rng) {
  std::string s = digits(rng, 9);
  int sum = 0;
  for (std::size_t i = 0; i < 9; ++i) sum += (s[i] - '0') * static_cast<int>(10 - i);
  const int c = (11 - sum % 11) % 11;
  return s + (c == 10 ? 'X' : static_cast<char>('0' + c));
}

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> jaccard_pair(std::mt19937_64& rng, double j,
                                                                               std::size_t union_size) {
  const auto shared = static_cast<std::size_t>(std::llround(j * static_cast<double>(union_size)));
  const std::size_t each = (union_size - shared) / 2;
  std::set<std::uint64_t> seen;
  auto fresh = [&] {
    std::uint64_t v;
    do {
      v = rng();
    } while (!seen.insert(v).second);
    return v;
  };
  std::vector<std::uint64_t> a, b;
  for (std::size_t i = 0; i < shared; ++i) {
    const auto v = fresh();
    a.push_back(v);
    b.push_back(v);
  }
  for (std::size_t i = 0; i < each; ++i) a.push_back(fresh());
  for (std::size_t i = 0; i < each; ++i) b.push_back(fresh());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return {a, b};
}

Corpus write_corpus(const CorpusSpec& spec, const fs::path& dir) {
  using nlohmann::json;
  std::mt19937_64 rng(spec.seed);
  auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };

  std::vector<std::string> vocab;
  for (int i = 0; i < 6000; ++i) {
    std::string w;
    const std::size_t len = 3 + below(7);
    for (std::size_t j = 0; j < len; ++j) w.push_back(static_cast<char>('a' + below(26)));
    vocab.push_back(w);
  }
  auto words = [&](std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(vocab[below(vocab.size())]);
    return out;
  };
  auto join = [](const std::vector<std::string>& ws, std::size_t from, std::size_t to) {
    std::string s;
    for (std::size_t i = from; i < to; ++i) {
      if (i > from) s.push_back(' ');
      s += ws[i];
    }
    return s;
  };
  auto capitalize = [](std::string s) {
    bool start = true;
    for (auto& c : s) {
      if (start && std::isalpha(static_cast<unsigned char>(c))) c = static_cast<char>(std::toupper(c));
      start = c == ' ';
    }
    return s;
  };

  Corpus corpus;
  corpus.payload_dir = dir / "payloads";
  corpus.items_file = dir / "shadow_items.jsonl";
  corpus.works_file = dir / "works.jsonl";
  corpus.editions_file = dir / "editions.jsonl";
  fs::create_directories(corpus.payload_dir);

  struct Work {
    std::string id, title;
    std::vector<std::string> isbns;
    std::vector<std::string> text;
  };
  std::vector<Work> works(spec.works);
  std::ofstream wout(corpus.works_file), eout(corpus.editions_file);
  for (std::size_t w = 0; w < spec.works; ++w) {
    char id[32];
    std::snprintf(id, sizeof id, "w%04zu", w);
    Work& work = works[w];
    work.id = id;
    const std::size_t n_title = 2 + below(4);
    work.title = capitalize(join(words(n_title), 0, n_title));
    work.text = words(spec.words_per_text);
    json wj{{"work_id", work.id},
            {"title", work.title},
            {"author_ids", {"a" + std::to_string(w % 150)}},
            {"author_names", {"Author " + std::to_string(w % 150)}},
            {"first_publication_year", 1800 + static_cast<int>(below(220))},
            {"ratings_count", static_cast<int>(below(500))},
            {"edition_ids", json::array()}};
    if (w % 5 != 0) wj["genres"] = {"fiction"};
    if (w % 3 != 0) wj["reviews_count"] = static_cast<int>(below(50));
    for (std::size_t e = 0; e < spec.editions_per_work; ++e) {
      const std::string eid = work.id + "_e" + std::to_string(e);
      wj["edition_ids"].push_back(eid);
      const std::string isbn = random_isbn13(rng);
      work.isbns.push_back(isbn);
      std::string title = work.title;
      if (e == 1) title += ": A Novel";
      if (e == 2) std::transform(title.begin(), title.end(), title.begin(), ::toupper);
      json ej{{"edition_id", eid}, {"work_id", work.id}, {"title", title}, {"language", "en"}, {"identifiers", {isbn}}};
      eout << ej.dump() << '\n';
    }
    wout << wj.dump() << '\n';
  }

  std::ofstream iout(corpus.items_file);
  for (std::size_t i = 0; i < spec.items; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "i%05zu", i);
    const Work& work = works[i % spec.works];
    corpus.truth[id] = work.id;

    std::vector<std::string> text = work.text;
    for (auto& w : text) {
      if (chance(spec.word_edit_rate)) w = vocab[below(vocab.size())];
    }

    std::string title = work.title;
    if (chance(spec.heavy_title_noise_rate)) {
      title = capitalize(join(words(4), 0, 4));
    } else if (chance(0.3)) {
      title.erase(below(title.size()), 1);
    } else if (chance(0.3)) {
      title += " (Illustrated)";
    }

    std::string isbn = work.isbns[below(work.isbns.size())];
    if (chance(spec.wrong_identifier_rate)) {
      const Work& other = works[(i % spec.works + 1 + below(spec.works - 1)) % spec.works];
      isbn = other.isbns[0];
    }
    const bool embedded_only = chance(0.3);

    EpubSpec epub;
    epub.title = title;
    epub.identifiers = {isbn};
    for (std::size_t start = 0; start < text.size();) {
      std::vector<std::string> paras;
      const std::size_t chapter_end = std::min(text.size(), start + 800);
      for (; start < chapter_end; start += 40) paras.push_back(join(text, start, std::min(chapter_end, start + 40)));
      epub.chapters.push_back(paragraphs(paras));
    }
    const bool mobi = i % 20 == 7;
    write_binary(corpus.payload_dir / (std::string(id) + ".epub"), make_epub(epub));

    json ij{{"item_id", id},
            {"declared_title", title},
            {"declared_language", "en"},
            {"extension", mobi ? "mobi" : "epub"},
            {"size_bytes", 0},
            {"identifiers", embedded_only ? json::array() : json::array({isbn})}};
    iout << ij.dump() << '\n';
  }
  return corpus;
}

}  // namespace fixture
