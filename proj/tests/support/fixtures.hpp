#pragma once

// Test fixture builders: ZIP/EPUB writer, scratch directories, synthetic corpora.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace fixture {

std::vector<std::byte> to_bytes(const std::string& s);

class ZipWriter {
 public:
  /// deflate = raw deflate (method 8); otherwise stored (method 0).
  void add(const std::string& name, const std::string& data, bool deflate = false);
  std::vector<std::byte> finish() const;

 private:
  struct Entry {
    std::string name;
    std::uint32_t crc = 0;
    std::uint32_t size = 0;
    std::uint16_t method = 0;
    std::string payload;
  };
  std::vector<Entry> entries_;
};

struct EpubSpec {
  std::vector<std::string> chapters;  // XHTML body fragments, spine order
  std::vector<std::string> identifiers;
  std::string title = "Untitled";
  bool deflate_chapters = false;
};

std::vector<std::byte> make_epub(const EpubSpec& spec);
/// Plain paragraphs wrapped in <p>.
std::string paragraphs(const std::vector<std::string>& lines);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& contents);
void write_binary(const std::filesystem::path& path, const std::vector<std::byte>& bytes);

/// ISBN-13 with a correct check digit from a 978 prefix and 9 random digits.
std::string random_isbn13(std::mt19937_64& rng);
std::string random_isbn10(std::mt19937_64& rng);

/// Two sorted hash sets with |A u B| = union_size and |A n B| = round(j * union_size),
/// the remainder split evenly between the two sides.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> jaccard_pair(std::mt19937_64& rng, double j,
                                                                               std::size_t union_size);

/// Synthetic corpus for the end-to-end pipeline run.
struct CorpusSpec {
  std::size_t works = 200;
  std::size_t editions_per_work = 3;
  std::size_t items = 500;
  std::size_t words_per_text = 2200;
  double wrong_identifier_rate = 0.05;  // items carrying an ISBN of some other work
  double heavy_title_noise_rate = 0.05; // declared title unrelated to the work
  double word_edit_rate = 0.004;        // per-word replacement between copies
  std::uint64_t seed = 7;
};

struct Corpus {
  std::filesystem::path items_file;
  std::filesystem::path payload_dir;
  std::filesystem::path works_file;
  std::filesystem::path editions_file;
  std::map<std::string, std::string> truth;  // item_id -> work_id
};

Corpus write_corpus(const CorpusSpec& spec, const std::filesystem::path& dir);

}  // namespace fixture
