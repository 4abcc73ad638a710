#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "wenplaq/errors.hpp"

namespace wenplaq::driver {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 60;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

void save(const std::filesystem::path &path, const std::string &body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body << "</svg>\n";
    if (!out) throw Error("failed to write " + path.string());
}

void frame(std::ostringstream &s, const PlotLabels &labels) {
    s << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(labels.title) << "</text>\n";
    s << "<text x=\"" << num(kLeft + (kWidth - kLeft - kRight) / 2) << "\" y=\"" << num(kHeight - 15)
      << "\" text-anchor=\"middle\">" << escape(labels.x_label) << "</text>\n";
    s << "<text x=\"18\" y=\"" << num(kTop + (kHeight - kTop - kBottom) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << num(kTop + (kHeight - kTop - kBottom) / 2)
      << ")\">" << escape(labels.y_label) << "</text>\n";
}

}  // namespace

void write_line_plot(const std::filesystem::path &path, const PlotLabels &labels, const std::vector<Series> &series) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto &s : series) {
        for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
        for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
    if (!(x1 > x0)) x0 -= 1, x1 += 1;
    if (!(y1 > y0)) y0 -= 1, y1 += 1;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream s;
    frame(s, labels);
    s << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        s << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\">"
          << num(xv) << "</text>\n";
        s << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
          << "</text>\n";
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto &ser = series[i];
        s << "<polyline fill=\"none\" stroke=\"" << ser.color << "\" stroke-width=\"1.5\""
          << (ser.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
        for (std::size_t k = 0; k < ser.x.size() && k < ser.y.size(); ++k) {
            s << (k ? " " : "") << num(px(ser.x[k])) << "," << num(py(ser.y[k]));
        }
        s << "\"/>\n";
        const double ly = kTop + 14 + 18 * static_cast<double>(i);
        s << "<line x1=\"" << num(kWidth - kRight + 10) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
          << num(kWidth - kRight + 34) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << ser.color << "\""
          << (ser.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
        s << "<text x=\"" << num(kWidth - kRight + 40) << "\" y=\"" << num(ly) << "\">" << escape(ser.name)
          << "</text>\n";
    }
    save(path, s.str());
}

void write_heatmap(const std::filesystem::path &path, const PlotLabels &labels, const Eigen::MatrixXd &values,
                   const std::vector<std::string> &row_names, const std::vector<std::string> &column_names) {
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const double cw = pw / std::max<Eigen::Index>(1, values.cols()), ch = ph / std::max<Eigen::Index>(1, values.rows());
    std::ostringstream s;
    frame(s, labels);
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            const double v = std::clamp(values(r, c), -1.0, 1.0);
            const int fade = static_cast<int>(std::lround(255 * (1 - std::abs(v))));
            char color[16];
            if (v >= 0) {
                std::snprintf(color, sizeof color, "#ff%02x%02x", fade, fade);
            } else {
                std::snprintf(color, sizeof color, "#%02x%02xff", fade, fade);
            }
            s << "<rect x=\"" << num(kLeft + c * cw) << "\" y=\"" << num(kTop + r * ch) << "\" width=\"" << num(cw)
              << "\" height=\"" << num(ch) << "\" fill=\"" << color << "\" stroke=\"#888\" stroke-width=\"0.5\"/>\n";
        }
        if (static_cast<std::size_t>(r) < row_names.size()) {
            s << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(kTop + (r + 0.5) * ch + 4)
              << "\" text-anchor=\"end\">" << escape(row_names[static_cast<std::size_t>(r)]) << "</text>\n";
        }
    }
    for (Eigen::Index c = 0; c < values.cols() && static_cast<std::size_t>(c) < column_names.size(); ++c) {
        s << "<text x=\"" << num(kLeft + (c + 0.5) * cw) << "\" y=\"" << num(kTop + ph + 16)
          << "\" text-anchor=\"middle\">" << escape(column_names[static_cast<std::size_t>(c)]) << "</text>\n";
    }
    save(path, s.str());
}

}  // namespace wenplaq::driver
