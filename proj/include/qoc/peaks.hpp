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
#include <vector>

namespace qoc {

/// Summary of one cluster of converged objective values.
struct PeakStats {
    double center = 0.0; // mean of member values
    double width = 0.0;  // two standard deviations
    int count = 0;
};

struct PeakDetection {
    std::vector<PeakStats> peaks;   // ordered by center, ascending
    std::vector<int> membership;    // peak index per input value
};

namespace detail {

inline PeakStats cluster_stats(const std::vector<double>& values,
                               const std::vector<int>& membership, int label)
{
    PeakStats s;
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (membership[i] == label) {
            sum += values[i];
            ++s.count;
        }
    }
    if (s.count == 0) return s;
    s.center = sum / s.count;
    double var = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (membership[i] == label) {
            const double d = values[i] - s.center;
            var += d * d;
        }
    }
    s.width = 2.0 * std::sqrt(var / s.count);
    return s;
}

} // namespace detail

/**
 * One-dimensional two-means clustering with a separation test. Centers start
 * at the extremes and iterate to a fixpoint; the split is kept only when the
 * centers differ by more than the summed cluster spreads, 2(sigma_1 + sigma_2),
 * and each cluster holds at least 5% of the values. Otherwise all values form
 * a single peak. Peaks are ordered by center, ascending.
 */
inline PeakDetection detect_peaks(const std::vector<double>& values)
{
    PeakDetection out;
    out.membership.assign(values.size(), 0);
    if (values.empty()) {
        return out;
    }
    if (values.size() == 1) {
        out.peaks.push_back({values[0], 0.0, 1});
        return out;
    }

    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    double c1 = *min_it, c2 = *max_it;

    if (c1 < c2) {
        for (int iter = 0; iter < 1000; ++iter) {
            double sum1 = 0.0, sum2 = 0.0;
            int n1 = 0, n2 = 0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const bool first = std::abs(values[i] - c1) <= std::abs(values[i] - c2);
                out.membership[i] = first ? 0 : 1;
                (first ? sum1 : sum2) += values[i];
                ++(first ? n1 : n2);
            }
            const double next1 = n1 > 0 ? sum1 / n1 : c1;
            const double next2 = n2 > 0 ? sum2 / n2 : c2;
            if (next1 == c1 && next2 == c2) break;
            c1 = next1;
            c2 = next2;
        }

        const PeakStats s1 = detail::cluster_stats(values, out.membership, 0);
        const PeakStats s2 = detail::cluster_stats(values, out.membership, 1);
        const double min_count = 0.05 * static_cast<double>(values.size());
        if (s1.count >= min_count && s2.count >= min_count
            && std::abs(s1.center - s2.center) > s1.width + s2.width) {
            // s.width is already 2 sigma, so the test reads |c1 - c2| > 2(s1 + s2).
            if (s1.center <= s2.center) {
                out.peaks = {s1, s2};
            } else {
                out.peaks = {s2, s1};
                for (auto& m : out.membership) m = 1 - m;
            }
            return out;
        }
    }

    std::fill(out.membership.begin(), out.membership.end(), 0);
    out.peaks = {detail::cluster_stats(values, out.membership, 0)};
    return out;
}

/// Equal-width histogram over [min, max]; bins are export metadata only, all
/// statistics work on the raw values.
struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<int> counts;

    double bin_left(int i) const
    {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(counts.size());
    }
    double bin_right(int i) const { return bin_left(i + 1); }
};

inline Histogram make_histogram(const std::vector<double>& values, int bins)
{
    Histogram h;
    h.counts.assign(std::max(bins, 1), 0);
    if (values.empty()) {
        return h;
    }
    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    h.lo = *min_it;
    h.hi = *max_it > *min_it ? *max_it : *min_it + 1.0;
    for (double v : values) {
        int idx = static_cast<int>((v - h.lo) / (h.hi - h.lo) * h.counts.size());
        idx = std::clamp(idx, 0, static_cast<int>(h.counts.size()) - 1);
        ++h.counts[idx];
    }
    return h;
}

} // namespace qoc
