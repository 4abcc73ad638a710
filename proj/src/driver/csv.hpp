#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace wenplaq::driver {

using Cell = std::variant<double, long long, std::string>;

/// Twelve significant digits, C locale, no thousands separators.
std::string format_cell(const Cell &c);

/// CSV file whose first line is `# <schema> v<version>`.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path &path, const std::string &schema, int version,
              std::vector<std::string> columns);

    void row(const std::vector<Cell> &cells);
    void close();

  private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t width_;
};

}  // namespace wenplaq::driver
