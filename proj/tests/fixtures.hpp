#pragma once

#include <filesystem>
#include <string>

#include "msca/array_io.hpp"

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(MSCA_FIXTURE_DIR) / name;
}

inline msca::ArrayFile load_fixture(const std::string& name) {
  return msca::read_array_file(fixture_path(name));
}
