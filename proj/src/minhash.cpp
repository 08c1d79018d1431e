#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "majinlink/dedup.hpp"
#include "majinlink/random.hpp"

namespace majinlink {

namespace {

std::uint64_t mod_mersenne61(unsigned __int128 x) {
  constexpr std::uint64_t p = kMersennePrime61;
  // 2^61 = 1 (mod p), so fold the high bits down twice.
  std::uint64_t lo = static_cast<std::uint64_t>(x & p);
  unsigned __int128 hi = x >> 61;
  unsigned __int128 folded = static_cast<unsigned __int128>(lo) + hi;
  std::uint64_t r = static_cast<std::uint64_t>(folded & p) + static_cast<std::uint64_t>(folded >> 61);
  while (r >= p) r -= p;
  return r;
}

}  // namespace

MinHasher::MinHasher(std::uint32_t num_perm, std::uint64_t seed) : seed_(seed) {
  if (num_perm == 0) throw Error(ErrorCode::InvalidArgument, "num_perm must be positive");
  Rng rng(seed);
  a_.reserve(num_perm);
  b_.reserve(num_perm);
  for (std::uint32_t i = 0; i < num_perm; ++i) {
    std::uint64_t a;
    do {
      a = uniform_below(rng, kMersennePrime61 - 1) + 1;
    } while ((a & 1U) == 0);
    a_.push_back(a);
    b_.push_back(uniform_below(rng, kMersennePrime61));
  }
}

MinHashSignature MinHasher::sign(const ShingleSet& shingles) const {
  return sign(shingles.item_id, shingles.hashes);
}

MinHashSignature MinHasher::sign(std::string item_id, std::span<const std::uint64_t> hashes) const {
  if (hashes.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cannot sign empty shingle set for '" + item_id + "'");
  }
  MinHashSignature sig{std::move(item_id), seed_,
                       std::vector<std::uint64_t>(a_.size(), std::numeric_limits<std::uint64_t>::max())};
  for (const std::uint64_t h : hashes) {
    const std::uint64_t x = mod_mersenne61(h);
    for (std::size_t i = 0; i < a_.size(); ++i) {
      const std::uint64_t v =
          mod_mersenne61(static_cast<unsigned __int128>(a_[i]) * x + b_[i]);
      if (v < sig.slots[i]) sig.slots[i] = v;
    }
  }
  return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.seed != b.seed || a.slots.size() != b.slots.size() || a.slots.empty()) {
    throw Error(ErrorCode::InvalidArgument, "signatures built with different parameters");
  }
  std::size_t equal = 0;
  for (std::size_t i = 0; i < a.slots.size(); ++i) equal += a.slots[i] == b.slots[i];
  return static_cast<double>(equal) / static_cast<double>(a.slots.size());
}

double candidate_probability(double s, std::uint32_t bands, std::uint32_t rows) {
  return 1.0 - std::pow(1.0 - std::pow(s, rows), bands);
}

namespace {

template <typename F>
double midpoint_integral(F&& f, double lo, double hi) {
  constexpr double kStep = 0.001;
  if (hi <= lo) return 0.0;
  const auto n = std::max<long>(1, std::lround((hi - lo) / kStep));
  const double h = (hi - lo) / static_cast<double>(n);
  double area = 0.0;
  for (long i = 0; i < n; ++i) area += f(lo + (static_cast<double>(i) + 0.5) * h);
  return area * h;
}

}  // namespace

double banding_error(double threshold, std::uint32_t bands, std::uint32_t rows, double fp_weight,
                     double fn_weight) {
  const double fp = midpoint_integral(
      [&](double s) { return candidate_probability(s, bands, rows); }, 0.0, threshold);
  const double fn = midpoint_integral(
      [&](double s) { return 1.0 - candidate_probability(s, bands, rows); }, threshold, 1.0);
  return fp_weight * fp + fn_weight * fn;
}

LshParams optimal_params(double threshold, std::uint32_t num_perm, double fp_weight,
                         double fn_weight) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "LSH threshold must be in (0,1)");
  }
  if (num_perm == 0) throw Error(ErrorCode::InvalidArgument, "num_perm must be positive");
  // Differences below this are quadrature rounding; such ties go to the smaller b.
  constexpr double kTieTolerance = 1e-12;
  LshParams best{0, 0, threshold, num_perm};
  double best_error = std::numeric_limits<double>::infinity();
  for (std::uint32_t b = 1; b <= num_perm; ++b) {
    for (std::uint32_t r = 1; b * r <= num_perm; ++r) {
      const double err = banding_error(threshold, b, r, fp_weight, fn_weight);
      if (err < best_error - kTieTolerance) {
        best_error = err;
        best.bands = b;
        best.rows = r;
      }
    }
  }
  return best;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}
  bool done() const { return pos_ >= data_.size(); }
  std::uint64_t uint(int bytes) {
    if (pos_ + static_cast<std::size_t>(bytes) > data_.size()) {
      throw Error(ErrorCode::Parse, "signatures.bin truncated");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_++])) << (8 * i);
    }
    return v;
  }
  std::string bytes(std::size_t n) {
    if (pos_ + n > data_.size()) throw Error(ErrorCode::Parse, "signatures.bin truncated");
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

constexpr char kSignatureMagic[4] = {'M', 'J', 'L', 'S'};
constexpr std::uint32_t kSignatureVersion = 1;

}  // namespace

void write_signatures(const std::filesystem::path& path,
                      std::span<const MinHashSignature> signatures, std::uint32_t num_perm,
                      std::uint64_t seed) {
  std::string out(kSignatureMagic, 4);
  put_u32(out, kSignatureVersion);
  put_u32(out, num_perm);
  put_u64(out, seed);
  for (const auto& sig : signatures) {
    if (sig.slots.size() != num_perm || sig.seed != seed) {
      throw Error(ErrorCode::InvalidArgument, "signature " + sig.item_id + " does not match header");
    }
    put_u32(out, static_cast<std::uint32_t>(sig.item_id.size()));
    out += sig.item_id;
    for (auto v : sig.slots) put_u64(out, v);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f.write(out.data(), static_cast<std::streamsize>(out.size()))) {
    throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
}

std::vector<MinHashSignature> read_signatures(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot read " + path.string());
  Reader in(std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>()));
  if (in.bytes(4) != std::string(kSignatureMagic, 4)) throw Error(ErrorCode::Parse, "not a signatures file");
  if (in.uint(4) != kSignatureVersion) throw Error(ErrorCode::Parse, "unsupported signatures version");
  const auto num_perm = static_cast<std::uint32_t>(in.uint(4));
  const std::uint64_t seed = in.uint(8);
  std::vector<MinHashSignature> out;
  while (!in.done()) {
    MinHashSignature sig;
    sig.item_id = in.bytes(static_cast<std::size_t>(in.uint(4)));
    sig.seed = seed;
    sig.slots.resize(num_perm);
    for (auto& v : sig.slots) v = in.uint(8);
    out.push_back(std::move(sig));
  }
  return out;
}

}  // namespace majinlink
