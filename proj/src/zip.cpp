#include "bam/zip.hpp"

#include "bam/error.hpp"

#include <cstdint>
#include <limits>
#include <zlib.h>

namespace bam::zip {

namespace {

constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;  // 1980-01-01
constexpr std::uint16_t kVersion = 20;
constexpr std::uint16_t kDeflate = 8;
constexpr std::uint16_t kUtf8Names = 1 << 11;

void put16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xFF);
  out += static_cast<char>(v >> 8);
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::string deflate_raw(std::string_view data) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    throw Error(ErrorKind::Io, "deflateInit2 failed");
  std::string out(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorKind::Io, "deflate failed");
  out.resize(zs.total_out);
  return out;
}

}  // namespace

void Writer::add(std::string_view path, std::string_view content) {
  if (content.size() > std::numeric_limits<std::uint32_t>::max() / 2)
    throw Error(ErrorKind::Io, "zip entry too large: " + std::string(path));
  auto compressed = deflate_raw(content);
  Entry e{std::string(path),
          crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(content.data()), static_cast<uInt>(content.size())),
          content.size(), compressed.size(), archive_.size()};

  put32(archive_, 0x04034b50);
  put16(archive_, kVersion);
  put16(archive_, kUtf8Names);
  put16(archive_, kDeflate);
  put16(archive_, kDosTime);
  put16(archive_, kDosDate);
  put32(archive_, static_cast<std::uint32_t>(e.crc));
  put32(archive_, static_cast<std::uint32_t>(e.compressed_size));
  put32(archive_, static_cast<std::uint32_t>(e.size));
  put16(archive_, static_cast<std::uint16_t>(e.path.size()));
  put16(archive_, 0);
  archive_ += e.path;
  archive_ += compressed;
  entries_.push_back(std::move(e));
}

std::string Writer::finish() {
  auto directory_offset = archive_.size();
  for (const auto& e : entries_) {
    put32(archive_, 0x02014b50);
    put16(archive_, kVersion);
    put16(archive_, kVersion);
    put16(archive_, kUtf8Names);
    put16(archive_, kDeflate);
    put16(archive_, kDosTime);
    put16(archive_, kDosDate);
    put32(archive_, static_cast<std::uint32_t>(e.crc));
    put32(archive_, static_cast<std::uint32_t>(e.compressed_size));
    put32(archive_, static_cast<std::uint32_t>(e.size));
    put16(archive_, static_cast<std::uint16_t>(e.path.size()));
    put16(archive_, 0);  // extra
    put16(archive_, 0);  // comment
    put16(archive_, 0);  // disk
    put16(archive_, 0);  // internal attributes
    put32(archive_, 0);  // external attributes
    put32(archive_, static_cast<std::uint32_t>(e.offset));
    archive_ += e.path;
  }
  auto directory_size = archive_.size() - directory_offset;
  put32(archive_, 0x06054b50);
  put16(archive_, 0);
  put16(archive_, 0);
  put16(archive_, static_cast<std::uint16_t>(entries_.size()));
  put16(archive_, static_cast<std::uint16_t>(entries_.size()));
  put32(archive_, static_cast<std::uint32_t>(directory_size));
  put32(archive_, static_cast<std::uint32_t>(directory_offset));
  put16(archive_, 0);
  entries_.clear();
  return std::move(archive_);
}

}  // namespace bam::zip
