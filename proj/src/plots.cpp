// Copyright 2026 The mixbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mixbench/plots.hpp"

#include "mixbench/errors.hpp"
#include "mixbench/methods.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace mixbench {
namespace {

constexpr double width = 720, height = 440;
constexpr double left = 70, right = 190, top = 50, bottom = 70;
constexpr double plot_w = width - left - right, plot_h = height - top - bottom;

const char* const palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"};

std::string num(double v) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(2) << v;
    return o.str();
}

std::string tick(double v) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(1) << (std::abs(v) < 1e-12 ? 0.0 : v);
    return o.str();
}

std::string color(std::size_t i) { return palette[i % (sizeof palette / sizeof *palette)]; }

// ARI can be negative; the axis covers [min(0, lowest), 1].
std::pair<double, double> y_range(const std::vector<double>& values) {
    double lo = 0.0;
    for (double v : values)
        if (std::isfinite(v)) lo = std::min(lo, v);
    return {std::floor(lo * 10.0) / 10.0, 1.0};
}

double y_pixel(double v, std::pair<double, double> range) {
    return top + plot_h * (range.second - v) / (range.second - range.first);
}

void header(std::ostringstream& s, const std::string& title) {
    s << R"(<?xml version="1.0" encoding="UTF-8"?>)" << '\n'
      << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << width << R"(" height=")" << height << R"(" viewBox="0 0 )"
      << width << ' ' << height << R"(" font-family="sans-serif" font-size="12">)" << '\n'
      << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n'
      << R"(<text x=")" << num(width / 2) << R"(" y="28" text-anchor="middle" font-size="16">)" << xml_escape(title)
      << "</text>\n";
}

void y_axis(std::ostringstream& s, std::pair<double, double> range, const std::string& label) {
    s << R"(<g stroke="#999" stroke-width="1">)" << '\n';
    for (double v = range.first; v <= range.second + 1e-9; v += 0.1) {
        const double y = y_pixel(v, range);
        s << R"(<line x1=")" << num(left) << R"(" y1=")" << num(y) << R"(" x2=")" << num(left + plot_w) << R"(" y2=")"
          << num(y) << R"(" stroke-opacity="0.25"/>)" << '\n';
    }
    s << "</g>\n";
    for (double v = range.first; v <= range.second + 1e-9; v += 0.2) {
        s << R"(<text x=")" << num(left - 8) << R"(" y=")" << num(y_pixel(v, range) + 4) << R"(" text-anchor="end">)"
          << tick(v) << "</text>\n";
    }
    s << R"(<line x1=")" << num(left) << R"(" y1=")" << num(top) << R"(" x2=")" << num(left) << R"(" y2=")" << num(top + plot_h)
      << R"(" stroke="black"/>)" << '\n'
      << R"(<line x1=")" << num(left) << R"(" y1=")" << num(top + plot_h) << R"(" x2=")" << num(left + plot_w) << R"(" y2=")"
      << num(top + plot_h) << R"(" stroke="black"/>)" << '\n'
      << R"(<text x="18" y=")" << num(top + plot_h / 2) << R"(" text-anchor="middle" transform="rotate(-90 18 )"
      << num(top + plot_h / 2) << R"x()">)x" << xml_escape(label) << "</text>\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::IoError, "write failed on " + path.string());
}

std::string display_name(const std::string& method) {
    try {
        return method_label(parse_method(method));
    } catch (const Error&) {
        return method;
    }
}

}  // namespace

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::vector<std::string>& x_levels,
                           const std::vector<PlotSeries>& series) {
    if (x_levels.empty()) throw Error(ErrorKind::EmptyInput, "line chart without x levels");
    std::vector<double> all;
    for (const auto& ser : series) {
        if (ser.values.size() != x_levels.size())
            throw Error(ErrorKind::LengthMismatch, "series '" + ser.name + "' does not match the x levels");
        all.insert(all.end(), ser.values.begin(), ser.values.end());
    }
    const auto range = y_range(all);
    const auto x_pixel = [&](std::size_t i) {
        return x_levels.size() == 1 ? left + plot_w / 2
                                    : left + plot_w * static_cast<double>(i) / static_cast<double>(x_levels.size() - 1);
    };

    std::ostringstream s;
    header(s, title);
    y_axis(s, range, "mean ARI");
    for (std::size_t i = 0; i < x_levels.size(); ++i)
        s << R"(<text x=")" << num(x_pixel(i)) << R"(" y=")" << num(top + plot_h + 18) << R"(" text-anchor="middle">)"
          << xml_escape(x_levels[i]) << "</text>\n";
    s << R"(<text x=")" << num(left + plot_w / 2) << R"(" y=")" << num(height - 22) << R"(" text-anchor="middle">)"
      << xml_escape(x_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        std::string points;
        for (std::size_t i = 0; i < x_levels.size(); ++i) {
            const double v = series[k].values[i];
            if (!std::isfinite(v)) continue;
            if (!points.empty()) points += ' ';
            points += num(x_pixel(i)) + "," + num(y_pixel(v, range));
        }
        s << R"(<polyline fill="none" stroke=")" << color(k) << R"(" stroke-width="2" points=")" << points << R"("><title>)"
          << xml_escape(series[k].name) << "</title></polyline>\n";
        const double ly = top + 10 + 18 * static_cast<double>(k);
        s << R"(<rect x=")" << num(width - right + 15) << R"(" y=")" << num(ly - 9) << R"(" width="12" height="12" fill=")"
          << color(k) << R"("/>)" << '\n'
          << R"(<text x=")" << num(width - right + 32) << R"(" y=")" << num(ly + 1) << R"(">)" << xml_escape(series[k].name)
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& labels, const std::vector<double>& values) {
    if (labels.empty()) throw Error(ErrorKind::EmptyInput, "bar chart without bars");
    if (labels.size() != values.size()) throw Error(ErrorKind::LengthMismatch, "bar labels and values differ in length");
    const auto range = y_range(values);
    const double slot = plot_w / static_cast<double>(labels.size());
    std::ostringstream s;
    header(s, title);
    y_axis(s, range, "mean ARI");
    const double zero = y_pixel(0.0, range);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double x = left + slot * static_cast<double>(i);
        const double cx = x + slot / 2;
        if (std::isfinite(values[i])) {
            const double y = y_pixel(values[i], range);
            s << R"(<rect x=")" << num(x + slot * 0.15) << R"(" y=")" << num(std::min(y, zero)) << R"(" width=")"
              << num(slot * 0.7) << R"(" height=")" << num(std::abs(zero - y)) << R"(" fill=")" << color(i) << R"("><title>)"
              << xml_escape(labels[i]) << ": " << num(values[i]) << "</title></rect>\n";
        }
        s << R"(<text x=")" << num(cx) << R"(" y=")" << num(top + plot_h + 16) << R"(" text-anchor="end" transform="rotate(-30 )"
          << num(cx) << ' ' << num(top + plot_h + 16) << R"x()">)x" << xml_escape(labels[i]) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::vector<std::filesystem::path> emit_plots(const SummaryTable& summary, const std::filesystem::path& out_dir) {
    if (summary.methods.empty() || summary.overall.empty()) throw Error(ErrorKind::EmptyInput, "empty summary");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    for (const auto& factor : summary.factors) {
        const auto& levels = summary.levels.at(factor);
        std::vector<PlotSeries> series;
        for (const auto& m : summary.methods) {
            PlotSeries ser{display_name(m), {}};
            for (const auto& level : levels) {
                const SummaryRow* row = summary.find(m, factor, level);
                ser.values.push_back(row ? row->mean_ari : std::nan(""));
            }
            series.push_back(std::move(ser));
        }
        const auto path = out_dir / ("ari_by_" + factor + ".svg");
        write_text(path, line_chart_svg("Mean ARI by " + factor, factor, levels, series));
        written.push_back(path);
    }
    std::vector<std::string> labels;
    std::vector<double> means;
    for (const auto& row : summary.overall) {
        labels.push_back(display_name(row.method));
        means.push_back(row.mean_ari);
    }
    const auto path = out_dir / "method_means.svg";
    write_text(path, bar_chart_svg("Mean ARI by method", labels, means));
    written.push_back(path);
    return written;
}

}  // namespace mixbench
