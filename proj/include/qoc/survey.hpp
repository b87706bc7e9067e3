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

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "qoc/grape.hpp"
#include "qoc/peaks.hpp"
#include "qoc/sampling.hpp"

namespace qoc {

/// Multi-start experiment: L descents from random initial controls.
struct SurveyConfig {
    int L = 1000;
    std::uint64_t master_seed = 1;
    Interval u_range{-1.0, 1.0};
    Interval n_range{0.0, 1.0};
    int histogram_bins = 100;
    int parallelism = 0; // 0 = one worker per hardware thread

    void validate() const
    {
        if (L < 1 || histogram_bins < 2 || parallelism < 0) {
            throw std::invalid_argument("SurveyConfig: need L >= 1, bins >= 2, parallelism >= 0");
        }
        if (!(u_range.lo <= u_range.hi) || !(n_range.lo <= n_range.hi) || n_range.lo < 0.0) {
            throw std::invalid_argument("SurveyConfig: invalid sampling ranges");
        }
    }
};

struct RunTally {
    int converged = 0;
    int stuck = 0;
    int max_iters = 0;
    int failed = 0;
};

struct SurveySummary {
    std::vector<RunRecord> records;
    std::vector<int> membership; // peak index per record; -1 for excluded runs
    std::vector<PeakStats> objective_peaks;
    std::vector<PeakStats> frobenius_peaks; // membership inherited from the objective
    Histogram objective_hist;
    Histogram frobenius_hist;
    RunTally tally;
};

/**
 * Runs the survey: every run samples its initial controls from a stream keyed
 * by (master_seed, run_index) and descends independently, so the outcome is a
 * pure function of the config no matter how many worker threads execute it.
 * Runs that hit the iteration cap or fail are tallied and excluded from the
 * statistics; peak structure is computed on the remaining objective values and
 * carried over to the paired Frobenius values of the same records.
 */
inline SurveySummary run_survey(const SystemParams& params, const TimeGrid& grid,
                                const ObjectiveSpec& spec, const OptimizerConfig& opt,
                                const SurveyConfig& config)
{
    config.validate();
    opt.validate();

    SurveySummary summary;
    summary.records.resize(config.L);

    int workers = config.parallelism > 0 ? config.parallelism
                                         : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (workers > config.L) workers = config.L;

    std::atomic<int> next_index{0};
    auto work = [&]() {
        while (true) {
            const int idx = next_index.fetch_add(1);
            if (idx >= config.L) break;
            const ControlVector init = sample_initial(config.master_seed,
                                                      static_cast<std::uint64_t>(idx), grid,
                                                      config.u_range, config.n_range);
            try {
                summary.records[idx] =
                    descend(params, grid, init, spec, opt, static_cast<std::uint64_t>(idx));
            } catch (const std::exception&) {
                summary.records[idx].seed = static_cast<std::uint64_t>(idx);
                summary.records[idx].initial = init;
                summary.records[idx].final_controls = init;
                summary.records[idx].termination = Termination::Failed;
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    // Aggregation walks records in run-index order.
    std::vector<double> objective_values, frobenius_values;
    std::vector<int> included; // record index per included value
    for (int i = 0; i < config.L; ++i) {
        const RunRecord& rec = summary.records[i];
        switch (rec.termination) {
        case Termination::Converged: ++summary.tally.converged; break;
        case Termination::Stuck: ++summary.tally.stuck; break;
        case Termination::MaxIters: ++summary.tally.max_iters; break;
        case Termination::Failed: ++summary.tally.failed; break;
        }
        if (rec.terminated_normally()) {
            objective_values.push_back(rec.objective);
            frobenius_values.push_back(rec.frobenius);
            included.push_back(i);
        }
    }

    const PeakDetection detection = detect_peaks(objective_values);
    summary.objective_peaks = detection.peaks;
    summary.membership.assign(config.L, -1);
    for (std::size_t i = 0; i < included.size(); ++i) {
        summary.membership[included[i]] = detection.membership[i];
    }

    for (std::size_t peak = 0; peak < detection.peaks.size(); ++peak) {
        PeakStats s;
        double sum = 0.0;
        for (std::size_t i = 0; i < frobenius_values.size(); ++i) {
            if (detection.membership[i] == static_cast<int>(peak)) {
                sum += frobenius_values[i];
                ++s.count;
            }
        }
        if (s.count > 0) {
            s.center = sum / s.count;
            double var = 0.0;
            for (std::size_t i = 0; i < frobenius_values.size(); ++i) {
                if (detection.membership[i] == static_cast<int>(peak)) {
                    const double d = frobenius_values[i] - s.center;
                    var += d * d;
                }
            }
            s.width = 2.0 * std::sqrt(var / s.count);
        }
        summary.frobenius_peaks.push_back(s);
    }

    summary.objective_hist = make_histogram(objective_values, config.histogram_bins);
    summary.frobenius_hist = make_histogram(frobenius_values, config.histogram_bins);
    return summary;
}

/// Final controls of every record in one peak, for overlay plotting and the
/// sub-manifold geometry checks.
struct ManifoldBundle {
    int peak = 0;
    std::vector<int> run_ids;
    std::vector<const RunRecord*> records;
};

inline std::vector<ManifoldBundle> export_manifolds(const SurveySummary& summary)
{
    const int peak_count = static_cast<int>(summary.objective_peaks.size());
    std::vector<ManifoldBundle> bundles(peak_count);
    for (int p = 0; p < peak_count; ++p) {
        bundles[p].peak = p;
    }
    for (std::size_t i = 0; i < summary.records.size(); ++i) {
        const int label = summary.membership[i];
        if (label >= 0) {
            bundles[label].run_ids.push_back(static_cast<int>(i));
            bundles[label].records.push_back(&summary.records[i]);
        }
    }
    return bundles;
}

/// Optimize under one state set, evaluate the optimized controls under
/// another; the two peak structures side by side.
struct CrossObjectiveReport {
    std::vector<PeakStats> from_peaks;
    std::vector<PeakStats> substituted_peaks;
    std::vector<double> substituted_values;
    double substituted_mean = 0.0;
};

inline CrossObjectiveReport cross_objective_experiment(const SystemParams& params,
                                                       const TimeGrid& grid,
                                                       const ObjectiveSpec& from_spec,
                                                       const ObjectiveSpec& to_spec,
                                                       const OptimizerConfig& opt,
                                                       const SurveyConfig& config)
{
    if (from_spec.kind != ObjectiveKind::States || to_spec.kind != ObjectiveKind::States) {
        throw std::invalid_argument(
            "cross_objective_experiment: both objectives must be state-transfer kind");
    }
    CrossObjectiveReport report;
    const SurveySummary summary = run_survey(params, grid, from_spec, opt, config);
    report.from_peaks = summary.objective_peaks;
    for (const RunRecord& rec : summary.records) {
        if (rec.terminated_normally()) {
            report.substituted_values.push_back(
                cross_evaluate(params, grid, rec.final_controls, to_spec));
        }
    }
    report.substituted_peaks = detect_peaks(report.substituted_values).peaks;
    double sum = 0.0;
    for (double v : report.substituted_values) sum += v;
    report.substituted_mean =
        report.substituted_values.empty() ? 0.0 : sum / report.substituted_values.size();
    return report;
}

} // namespace qoc
