#include <algorithm>
#include <bit>
#include <unordered_map>
#include <vector>

#include "majinlink/ingest.hpp"
#include "majinlink/linkage.hpp"

namespace majinlink {
namespace fuzzy {

namespace {

// Bit-parallel LCS length (Allison-Dix / Hyyro) against a fixed pattern.
class LcsPattern {
 public:
  explicit LcsPattern(std::u32string_view pattern)
      : length_(pattern.size()), words_((pattern.size() + 63) / 64) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      auto& mask = masks_[pattern[i]];
      if (mask.empty()) mask.assign(words_, 0);
      mask[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  std::size_t length() const noexcept { return length_; }

  std::size_t lcs(std::u32string_view text) const {
    if (length_ == 0 || text.empty()) return 0;
    std::vector<std::uint64_t> row(words_, ~std::uint64_t{0});
    for (const char32_t c : text) {
      const auto it = masks_.find(c);
      if (it == masks_.end()) continue;
      const auto& mask = it->second;
      std::uint64_t carry = 0;
      for (std::size_t w = 0; w < words_; ++w) {
        const std::uint64_t u = row[w] & mask[w];
        const std::uint64_t sum = row[w] + u;
        const std::uint64_t total = sum + carry;
        carry = (sum < row[w]) || (total < sum) ? 1 : 0;
        row[w] = total | (row[w] - u);
      }
    }
    std::size_t ones = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = row[w];
      const std::size_t valid = std::min<std::size_t>(64, length_ - w * 64);
      if (valid < 64) bits &= (std::uint64_t{1} << valid) - 1;
      ones += static_cast<std::size_t>(std::popcount(bits));
    }
    return length_ - ones;
  }

  double ratio_with(std::u32string_view text) const {
    const std::size_t total = length_ + text.size();
    if (total == 0) return 100.0;
    const std::size_t dist = total - 2 * lcs(text);
    return 100.0 * (1.0 - static_cast<double>(dist) / static_cast<double>(total));
  }

 private:
  std::size_t length_;
  std::size_t words_;
  std::unordered_map<char32_t, std::vector<std::uint64_t>> masks_;
};

}  // namespace

std::size_t indel_distance(std::u32string_view a, std::u32string_view b) {
  return a.size() + b.size() - 2 * LcsPattern(a).lcs(b);
}

double ratio(std::u32string_view a, std::u32string_view b) {
  return LcsPattern(a).ratio_with(b);
}

double partial_ratio(std::u32string_view a, std::u32string_view b) {
  if (a.size() == b.size()) return ratio(a, b);
  const std::u32string_view shorter = a.size() < b.size() ? a : b;
  const std::u32string_view longer = a.size() < b.size() ? b : a;
  const std::size_t m = shorter.size();
  const std::size_t n = longer.size();

  const LcsPattern pattern(shorter);
  double best = pattern.ratio_with(longer);
  auto consider = [&](std::u32string_view window) {
    best = std::max(best, pattern.ratio_with(window));
    return best >= 100.0;
  };

  for (std::size_t start = 0; start + m <= n; ++start) {
    if (consider(longer.substr(start, m))) return 100.0;
  }
  for (std::size_t len = 1; len < m; ++len) {
    if (consider(longer.substr(0, len))) return 100.0;
    if (consider(longer.substr(n - len))) return 100.0;
  }
  return best;
}

std::u32string to_code_points(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  while (i < utf8.size()) {
    const auto c = static_cast<unsigned char>(utf8[i]);
    std::size_t len = 1;
    char32_t cp = 0xfffd;
    if (c < 0x80) {
      cp = c;
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
      out.push_back(0xfffd);
      ++i;
      continue;
    }
    if (i + len > utf8.size()) {
      out.push_back(0xfffd);
      break;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(utf8[i + k]);
      if ((cc & 0xc0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3f);
    }
    if (!ok) {
      out.push_back(0xfffd);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

}  // namespace fuzzy

double ratio(std::string_view a, std::string_view b) {
  return fuzzy::ratio(fuzzy::to_code_points(a), fuzzy::to_code_points(b));
}

double partial_ratio(std::string_view a, std::string_view b) {
  return fuzzy::partial_ratio(fuzzy::to_code_points(a), fuzzy::to_code_points(b));
}

std::optional<double> title_score(std::span<const std::string> cluster_titles,
                                  std::span<const std::string> edition_titles) {
  auto prepare = [](std::span<const std::string> titles) {
    std::vector<std::u32string> out;
    for (const auto& t : titles) {
      auto normalized = normalize_text(t);
      if (!normalized.empty()) out.push_back(fuzzy::to_code_points(normalized));
    }
    return out;
  };
  const auto left = prepare(cluster_titles);
  const auto right = prepare(edition_titles);
  if (left.empty() || right.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& a : left) {
    for (const auto& b : right) sum += fuzzy::partial_ratio(a, b);
  }
  return sum / static_cast<double>(left.size() * right.size());
}

}  // namespace majinlink
