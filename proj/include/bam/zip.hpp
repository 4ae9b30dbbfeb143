#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bam::zip {

// Builds a ZIP archive in memory. Entries are deflated and stamped with a
// fixed 1980-01-01 timestamp so identical content gives identical bytes.
class Writer {
 public:
  void add(std::string_view path, std::string_view content);
  std::string finish();

 private:
  struct Entry {
    std::string path;
    unsigned long crc;
    std::size_t size;
    std::size_t compressed_size;
    std::size_t offset;
  };
  std::vector<Entry> entries_;
  std::string archive_;
};

}  // namespace bam::zip
