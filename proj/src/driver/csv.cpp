#include "csv.hpp"

#include <cstdio>

#include "wenplaq/errors.hpp"

namespace wenplaq::driver {

std::string format_cell(const Cell &c) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                char buf[40];
                // Collapse negative zero so sign noise does not leak into outputs.
                std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
                return buf;
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v);
            } else {
                return v;
            }
        },
        c);
}

CsvWriter::CsvWriter(const std::filesystem::path &path, const std::string &schema, int version,
                     std::vector<std::string> columns)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), width_(columns.size()) {
    if (!out_) throw Error("cannot open " + path.string() + " for writing");
    out_ << "# " << schema << " v" << version << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<Cell> &cells) {
    if (cells.size() != width_) throw Error("CSV row width does not match the header of " + path_.string());
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format_cell(cells[i]);
    out_ << "\n";
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw Error("failed to write " + path_.string());
}

}  // namespace wenplaq::driver
