#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "msca/core.hpp"

namespace msca {

class ArrayFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An array together with the parameters recorded in its file header.
struct ArrayFile {
  CAParams params;
  Array rows;
};

// Text format: a header line "N k v t lambda", then N lines of k
// space-separated symbols. Lines end with '\n', no trailing whitespace.
std::string format_array(const ArrayFile& file);
ArrayFile parse_array(std::string_view text);

void write_array_file(const std::filesystem::path& path, const ArrayFile& file);
ArrayFile read_array_file(const std::filesystem::path& path);

}  // namespace msca
