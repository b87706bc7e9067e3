// Copyright 2026 the qoc authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "qoc/survey.hpp"

namespace qoc {

namespace detail {

inline std::string svg_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string svg_sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

inline const char* peak_color(int peak)
{
    static const char* palette[] = {"#2e7d32", "#c62828", "#1565c0", "#ef6c00"};
    return palette[peak >= 0 ? peak % 4 : 0];
}

} // namespace detail

/**
 * Histogram as SVG bars. With two detected peaks the bars left of the
 * midpoint between the peak centers take the first peak's color and the rest
 * the second's; with one peak all bars share a color.
 */
inline std::string svg_histogram(const Histogram& hist, const std::vector<PeakStats>& peaks,
                                 const std::string& title)
{
    using detail::svg_num;
    const double width = 640.0, height = 400.0;
    const double left = 60.0, right = 20.0, top = 40.0, bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    int max_count = 1;
    for (int c : hist.counts) max_count = std::max(max_count, c);
    double split = std::numeric_limits<double>::infinity();
    if (peaks.size() >= 2) {
        split = 0.5 * (peaks[0].center + peaks[1].center);
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    const int bins = static_cast<int>(hist.counts.size());
    const double span = hist.hi - hist.lo;
    for (int i = 0; i < bins; ++i) {
        if (hist.counts[i] == 0) continue;
        const double x0 = left + plot_w * (hist.bin_left(i) - hist.lo) / span;
        const double x1 = left + plot_w * (hist.bin_right(i) - hist.lo) / span;
        const double h = plot_h * hist.counts[i] / max_count;
        const double center = 0.5 * (hist.bin_left(i) + hist.bin_right(i));
        const char* color = detail::peak_color(center <= split ? 0 : 1);
        out << "  <rect x=\"" << svg_num(x0) << "\" y=\"" << svg_num(top + plot_h - h)
            << "\" width=\"" << svg_num(std::max(x1 - x0 - 0.5, 0.5)) << "\" height=\""
            << svg_num(h) << "\" fill=\"" << color << "\"/>\n";
    }

    out << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << left << "\" y=\"" << height - 18
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << detail::svg_sci(hist.lo)
        << "</text>\n";
    out << "  <text x=\"" << left + plot_w << "\" y=\"" << height - 18
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << detail::svg_sci(hist.hi) << "</text>\n";
    out << "  <text x=\"" << left - 8 << "\" y=\"" << top + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << max_count
        << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

/**
 * Piecewise-constant control trajectories of every surveyed record, drawn as
 * step polylines colored by peak membership. `channel` selects the coherent
 * amplitude u or the incoherent density n.
 */
inline std::string svg_control_overlay(const SurveySummary& summary, const TimeGrid& grid,
                                       char channel, const std::string& title)
{
    using detail::svg_num;
    const double width = 640.0, height = 400.0;
    const double left = 60.0, right = 20.0, top = 40.0, bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < summary.records.size(); ++i) {
        if (summary.membership[i] < 0) continue;
        const ControlVector& v = summary.records[i].final_controls;
        for (int k = 0; k < grid.M; ++k) {
            const double y = channel == 'u' ? v.u[k] : v.n(k);
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        lo = 0.0;
        hi = 1.0;
    } else if (!(lo < hi)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double t0 = grid.boundaries.front(), t1 = grid.boundaries.back();
    auto x_of = [&](double t) { return left + plot_w * (t - t0) / (t1 - t0); };
    auto y_of = [&](double y) { return top + plot_h * (hi - y) / (hi - lo); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    for (std::size_t i = 0; i < summary.records.size(); ++i) {
        const int peak = summary.membership[i];
        if (peak < 0) continue;
        const ControlVector& v = summary.records[i].final_controls;
        out << "  <polyline fill=\"none\" stroke=\"" << detail::peak_color(peak)
            << "\" stroke-width=\"0.6\" stroke-opacity=\"0.35\" points=\"";
        for (int k = 0; k < grid.M; ++k) {
            const double y = y_of(channel == 'u' ? v.u[k] : v.n(k));
            out << svg_num(x_of(grid.boundaries[k])) << ',' << svg_num(y) << ' '
                << svg_num(x_of(grid.boundaries[k + 1])) << ',' << svg_num(y);
            if (k + 1 < grid.M) out << ' ';
        }
        out << "\"/>\n";
    }

    out << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << left << "\" y=\"" << height - 18
        << "\" font-family=\"sans-serif\" font-size=\"12\">t = " << detail::svg_sci(t0)
        << "</text>\n";
    out << "  <text x=\"" << left + plot_w << "\" y=\"" << height - 18
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">t = "
        << detail::svg_sci(t1) << "</text>\n";
    out << "  <text x=\"" << left - 8 << "\" y=\"" << top + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << detail::svg_sci(hi) << "</text>\n";
    out << "  <text x=\"" << left - 8 << "\" y=\"" << top + plot_h
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << detail::svg_sci(lo) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace qoc
