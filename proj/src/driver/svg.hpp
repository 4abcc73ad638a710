#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wenplaq::driver {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
    bool dashed = false;
};

struct PlotLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
};

void write_line_plot(const std::filesystem::path &path, const PlotLabels &labels, const std::vector<Series> &series);

/// Rows top to bottom, columns left to right; values mapped onto a blue-white-red scale over [-1, 1].
void write_heatmap(const std::filesystem::path &path, const PlotLabels &labels, const Eigen::MatrixXd &values,
                   const std::vector<std::string> &row_names, const std::vector<std::string> &column_names);

}  // namespace wenplaq::driver
