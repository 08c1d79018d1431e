#include <algorithm>
#include <fstream>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "majinlink/error.hpp"
#include "majinlink/hash.hpp"
#include "majinlink/ingest.hpp"

namespace majinlink {

namespace {

bool is_separator(UChar32 c) {
  return u_isUWhiteSpace(c) || u_ispunct(c) || u_iscntrl(c);
}

}  // namespace

std::string normalize_text(std::string_view text) {
  if (text.empty()) return {};
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::Io, "ICU NFKC data unavailable");

  const auto source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString folded = nfkc->normalize(source, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::InvalidArgument, "NFKC normalization failed");
  folded.toLower(icu::Locale::getRoot());

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < folded.length();) {
    const UChar32 c = folded.char32At(i);
    i += U16_LENGTH(c);
    if (is_separator(c)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) {
      collapsed.append(static_cast<UChar>(u' '));
      pending_space = false;
    }
    collapsed.append(c);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

ShingleSet shingle(std::string_view normalized_text, std::size_t k, std::string item_id) {
  ShingleSet out{std::move(item_id), {}};
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "shingle size must be positive");

  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < normalized_text.size()) {
    const auto end = normalized_text.find(' ', pos);
    const auto stop = end == std::string_view::npos ? normalized_text.size() : end;
    if (stop > pos) words.push_back(normalized_text.substr(pos, stop - pos));
    pos = stop + 1;
  }
  if (words.empty()) return out;

  std::string window;
  if (words.size() < k) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) window.push_back(' ');
      window.append(words[i]);
    }
    out.hashes.push_back(hash64(window));
    return out;
  }
  out.hashes.reserve(words.size() - k + 1);
  for (std::size_t i = 0; i + k <= words.size(); ++i) {
    window.clear();
    for (std::size_t j = 0; j < k; ++j) {
      if (j) window.push_back(' ');
      window.append(words[i + j]);
    }
    out.hashes.push_back(hash64(window));
  }
  std::sort(out.hashes.begin(), out.hashes.end());
  out.hashes.erase(std::unique(out.hashes.begin(), out.hashes.end()), out.hashes.end());
  return out;
}

double jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

void write_shingles(const std::filesystem::path& path, std::span<const std::uint64_t> hashes) {
  std::vector<std::uint64_t> sorted(hashes.begin(), hashes.end());
  std::sort(sorted.begin(), sorted.end());
  std::string buffer;
  buffer.reserve(sorted.size() * 8);
  for (auto h : sorted) {
    for (int b = 0; b < 8; ++b) buffer.push_back(static_cast<char>((h >> (8 * b)) & 0xff));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()))) {
    throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
}

std::vector<std::uint64_t> read_shingles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::string buffer((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buffer.size() % 8 != 0) throw Error(ErrorCode::Parse, "truncated shingle file " + path.string());
  std::vector<std::uint64_t> out(buffer.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buffer[i * 8 + b])) << (8 * b);
    }
    out[i] = v;
  }
  return out;
}

}  // namespace majinlink
