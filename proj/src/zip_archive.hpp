#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace majinlink::detail {

/// Read-only view over an in-memory ZIP file. Supports stored and deflated
/// entries; no ZIP64, no encryption. Errors throw ExtractionError.
class ZipArchive {
 public:
  explicit ZipArchive(std::span<const std::byte> data);

  struct Entry {
    std::string name;
    std::uint16_t method = 0;
    std::uint32_t crc32 = 0;
    std::uint32_t compressed_size = 0;
    std::uint32_t uncompressed_size = 0;
    std::uint32_t local_header_offset = 0;
  };

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Entry* find(const std::string& name) const;
  /// Decompressed contents, CRC-checked.
  std::string read(const Entry& entry) const;
  std::optional<std::string> read(const std::string& name) const;

 private:
  std::span<const std::byte> data_;
  std::vector<Entry> entries_;
};

}  // namespace majinlink::detail
