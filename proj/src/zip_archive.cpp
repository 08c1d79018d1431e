#include "zip_archive.hpp"

#include <zlib.h>

#include "majinlink/error.hpp"

namespace majinlink::detail {

namespace {

constexpr std::uint32_t kEndOfCentralDir = 0x06054b50;
constexpr std::uint32_t kCentralHeader = 0x02014b50;
constexpr std::uint32_t kLocalHeader = 0x04034b50;

std::uint16_t u16(std::span<const std::byte> d, std::size_t at) {
  if (at + 2 > d.size()) throw ExtractionError("zip: read past end");
  return static_cast<std::uint16_t>(std::to_integer<unsigned>(d[at]) |
                                    (std::to_integer<unsigned>(d[at + 1]) << 8));
}

std::uint32_t u32(std::span<const std::byte> d, std::size_t at) {
  return static_cast<std::uint32_t>(u16(d, at)) | (static_cast<std::uint32_t>(u16(d, at + 2)) << 16);
}

std::string inflate_raw(const std::byte* src, std::size_t size, std::size_t expected) {
  std::string out(expected + 1, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw ExtractionError("zip: inflateInit failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<std::byte*>(src));
  zs.avail_in = static_cast<uInt>(size);
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) throw ExtractionError("zip: corrupt deflate stream");
  out.resize(expected);
  return out;
}

}  // namespace

ZipArchive::ZipArchive(std::span<const std::byte> data) : data_(data) {
  if (data.size() < 22) throw ExtractionError("zip: too short");
  // The end record sits in the last 22 + 65535 (comment) bytes.
  std::size_t eocd = std::string::npos;
  const std::size_t floor = data.size() > 22 + 0xffff ? data.size() - 22 - 0xffff : 0;
  for (std::size_t i = data.size() - 22 + 1; i-- > floor;) {
    if (u32(data, i) == kEndOfCentralDir) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string::npos) throw ExtractionError("zip: end of central directory not found");

  const std::uint16_t count = u16(data, eocd + 10);
  const std::uint32_t dir_size = u32(data, eocd + 12);
  const std::uint32_t dir_offset = u32(data, eocd + 16);
  if (dir_offset == 0xffffffffu || count == 0xffff) throw ExtractionError("zip: ZIP64 not supported");
  if (static_cast<std::uint64_t>(dir_offset) + dir_size > data.size()) {
    throw ExtractionError("zip: central directory out of range");
  }

  std::size_t at = dir_offset;
  entries_.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) {
    if (u32(data, at) != kCentralHeader) throw ExtractionError("zip: bad central header");
    Entry e;
    const std::uint16_t flags = u16(data, at + 8);
    e.method = u16(data, at + 10);
    e.crc32 = u32(data, at + 16);
    e.compressed_size = u32(data, at + 20);
    e.uncompressed_size = u32(data, at + 24);
    const std::uint16_t name_len = u16(data, at + 28);
    const std::uint16_t extra_len = u16(data, at + 30);
    const std::uint16_t comment_len = u16(data, at + 32);
    e.local_header_offset = u32(data, at + 42);
    if (flags & 0x1) throw ExtractionError("zip: encrypted entries not supported");
    if (at + 46 + name_len > data.size()) throw ExtractionError("zip: truncated entry name");
    e.name.assign(reinterpret_cast<const char*>(data.data() + at + 46), name_len);
    entries_.push_back(std::move(e));
    at += 46 + static_cast<std::size_t>(name_len) + extra_len + comment_len;
  }
}

const ZipArchive::Entry* ZipArchive::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string ZipArchive::read(const Entry& entry) const {
  const std::size_t at = entry.local_header_offset;
  if (u32(data_, at) != kLocalHeader) throw ExtractionError("zip: bad local header for " + entry.name);
  const std::size_t start = at + 30 + u16(data_, at + 26) + u16(data_, at + 28);
  if (start + entry.compressed_size > data_.size()) {
    throw ExtractionError("zip: entry data out of range: " + entry.name);
  }
  const std::byte* src = data_.data() + start;

  std::string out;
  if (entry.method == 0) {
    if (entry.compressed_size != entry.uncompressed_size) throw ExtractionError("zip: stored size mismatch");
    out.assign(reinterpret_cast<const char*>(src), entry.compressed_size);
  } else if (entry.method == 8) {
    out = inflate_raw(src, entry.compressed_size, entry.uncompressed_size);
  } else {
    throw ExtractionError("zip: unsupported compression method " + std::to_string(entry.method));
  }
  const auto crc = ::crc32(0L, reinterpret_cast<const Bytef*>(out.data()), static_cast<uInt>(out.size()));
  if (crc != entry.crc32) throw ExtractionError("zip: CRC mismatch for " + entry.name);
  return out;
}

std::optional<std::string> ZipArchive::read(const std::string& name) const {
  if (const Entry* e = find(name)) return read(*e);
  return std::nullopt;
}

}  // namespace majinlink::detail
