#include "msca/array_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace msca {
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<long long> parse_fields(std::string_view line, std::size_t line_no) {
  std::vector<long long> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (line[pos] == ' ') {
      throw ArrayFormatError("line " + std::to_string(line_no) + ": unexpected space");
    }
    const std::size_t end = std::min(line.find(' ', pos), line.size());
    long long value = 0;
    const auto* first = line.data() + pos;
    const auto* last = line.data() + end;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      throw ArrayFormatError("line " + std::to_string(line_no) + ": not an integer: '" +
                             std::string(line.substr(pos, end - pos)) + "'");
    }
    fields.push_back(value);
    pos = end;
    if (pos < line.size()) {
      ++pos;
      if (pos == line.size()) {
        throw ArrayFormatError("line " + std::to_string(line_no) + ": trailing whitespace");
      }
    }
  }
  return fields;
}

}  // namespace

std::string format_array(const ArrayFile& file) {
  std::ostringstream os;
  os << file.rows.size() << ' ' << file.params.k << ' ' << file.params.v << ' ' << file.params.t
     << ' ' << file.params.lambda << '\n';
  for (const Row& row : file.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != 0) {
        os << ' ';
      }
      os << row[c];
    }
    os << '\n';
  }
  return os.str();
}

ArrayFile parse_array(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw ArrayFormatError("empty array file");
  }
  const auto header = parse_fields(lines[0], 1);
  if (header.size() != 5) {
    throw ArrayFormatError("header must be 'N k v t lambda', got " +
                           std::to_string(header.size()) + " fields");
  }
  if (header[0] < 0) {
    throw ArrayFormatError("negative row count");
  }
  ArrayFile file;
  file.params = {static_cast<int>(header[3]), static_cast<int>(header[1]),
                 static_cast<int>(header[2]), static_cast<int>(header[4])};
  try {
    file.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ArrayFormatError(std::string("invalid header: ") + e.what());
  }
  const auto n = static_cast<std::size_t>(header[0]);
  if (lines.size() < n + 1) {
    throw ArrayFormatError("truncated file: header declares " + std::to_string(n) +
                           " rows, found " + std::to_string(lines.size() - 1));
  }
  if (lines.size() > n + 1) {
    throw ArrayFormatError("extra content after " + std::to_string(n) + " rows");
  }
  file.rows.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto fields = parse_fields(lines[i], i + 1);
    if (fields.size() != static_cast<std::size_t>(file.params.k)) {
      throw ArrayFormatError("line " + std::to_string(i + 1) + ": expected " +
                             std::to_string(file.params.k) + " symbols, got " +
                             std::to_string(fields.size()));
    }
    Row row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (fields[c] < 0 || fields[c] >= file.params.v) {
        throw ArrayFormatError("line " + std::to_string(i + 1) + ": symbol " +
                               std::to_string(fields[c]) + " out of range [0, " +
                               std::to_string(file.params.v) + ")");
      }
      row[c] = static_cast<Symbol>(fields[c]);
    }
    file.rows.push_back(std::move(row));
  }
  return file;
}

void write_array_file(const std::filesystem::path& path, const ArrayFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << format_array(file);
}

ArrayFile read_array_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ArrayFormatError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_array(buffer.str());
}

}  // namespace msca
