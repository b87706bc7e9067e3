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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qoc/qoc.hpp"

namespace fs = std::filesystem;

namespace {

// Exit-code contract: 0 success, 1 usage/config error, 2 numerical failure,
// 3 iteration-cap-dominated outcome.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitMaxIters = 3;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string gate;
    std::string objective;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags)
{
    cmd->add_option("--config", flags.config_path, "JSON configuration file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--gate", flags.gate, "target gate: H | T | rotation:theta | phase:delta");
    cmd->add_option("--objective", flags.objective,
                    "objective: set2 | set3-grk | set4 | frobenius");
}

qoc::RunConfig assemble_config(const CommonFlags& flags)
{
    qoc::RunConfig config;
    if (!flags.config_path.empty()) {
        config = qoc::load_run_config(flags.config_path);
    }
    if (!flags.gate.empty()) config.gate = flags.gate;
    if (!flags.objective.empty()) config.objective = flags.objective;
    if (!flags.out_dir.empty()) config.output_directory = flags.out_dir;
    config.validate();
    return config;
}

std::string out_path(const qoc::RunConfig& config, const std::string& name)
{
    fs::create_directories(config.output_directory);
    return (fs::path(config.output_directory) / name).string();
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

int cmd_simulate(const qoc::RunConfig& config, const std::string& controls_path,
                 const std::vector<double>& r0_values)
{
    const qoc::TimeGrid grid = config.grid();
    const qoc::ControlVector controls = qoc::load_controls(controls_path, grid.M);
    const Eigen::Vector3d r0(r0_values[0], r0_values[1], r0_values[2]);

    const auto states = qoc::propagate_state(config.system, grid, controls, r0);
    const qoc::EvolutionMatrix evo =
        qoc::propagate_evolution_matrix(config.system, grid, controls);

    const std::string csv_path = out_path(config, "trajectory.csv");
    qoc::write_text_file(csv_path, qoc::trajectory_csv(grid, states));

    qoc::json result;
    result["schema_version"] = 1;
    result["r0"] = {r0[0], r0[1], r0[2]};
    const Eigen::Vector3d rT = states.back();
    result["r_final"] = {rT[0], rT[1], rT[2]};
    qoc::json psi = qoc::json::array();
    for (int i = 0; i < 4; ++i) {
        psi.push_back({evo.psi(i, 0), evo.psi(i, 1), evo.psi(i, 2), evo.psi(i, 3)});
    }
    result["psi"] = std::move(psi);
    const std::string json_path = out_path(config, "result.json");
    qoc::write_json_file(json_path, result);

    std::cout << "simulate: wrote " << csv_path << " and " << json_path << "\n";
    return kExitOk;
}

int cmd_optimize(const qoc::RunConfig& config, std::uint64_t seed, const std::string& init_path)
{
    const qoc::ObjectiveSpec spec = config.objective_spec();
    if (spec.kind == qoc::ObjectiveKind::Frobenius) {
        std::cerr << "error: the frobenius objective has no gradient here; optimize a state "
                     "set and report frobenius alongside\n";
        return kExitNumerical;
    }
    const qoc::TimeGrid grid = config.grid();
    const qoc::ControlVector init =
        init_path.empty()
            ? qoc::sample_initial(config.survey.master_seed, seed, grid, config.survey.u_range,
                                  config.survey.n_range)
            : qoc::load_controls(init_path, grid.M);

    const qoc::RunRecord rec =
        qoc::descend(config.system, grid, init, spec, config.optimizer, seed);

    const std::string path = out_path(config, "run.json");
    qoc::write_json_file(path, qoc::run_record_to_json(rec));
    std::cout << "optimize: " << qoc::termination_name(rec.termination) << " after "
              << rec.iterations << " iterations, objective " << sci(rec.objective)
              << ", frobenius " << sci(rec.frobenius) << "; wrote " << path << "\n";

    switch (rec.termination) {
    case qoc::Termination::Converged:
    case qoc::Termination::Stuck: return kExitOk;
    case qoc::Termination::MaxIters: return kExitMaxIters;
    case qoc::Termination::Failed: return kExitNumerical;
    }
    return kExitNumerical;
}

int cmd_survey(const qoc::RunConfig& config)
{
    const qoc::ObjectiveSpec spec = config.objective_spec();
    if (spec.kind == qoc::ObjectiveKind::Frobenius) {
        std::cerr << "error: surveys optimize a state-set objective; frobenius statistics are "
                     "always included in the summary\n";
        return kExitNumerical;
    }
    const qoc::TimeGrid grid = config.grid();
    const qoc::SurveySummary summary =
        qoc::run_survey(config.system, grid, spec, config.optimizer, config.survey);

    qoc::write_json_file(out_path(config, "summary.json"),
                         qoc::survey_summary_to_json(summary, config.gate, config.objective));
    qoc::write_text_file(out_path(config, "manifolds.csv"),
                         qoc::manifolds_csv(summary, grid));
    qoc::write_json_file(out_path(config, "manifolds.json"),
                         qoc::manifolds_json(summary, grid));
    qoc::write_text_file(out_path(config, "histogram_objective.csv"),
                         qoc::histogram_csv(summary.objective_hist));
    qoc::write_text_file(out_path(config, "histogram_frobenius.csv"),
                         qoc::histogram_csv(summary.frobenius_hist));
    if (config.wants_format("svg")) {
        const std::string label = config.gate + "/" + config.objective;
        qoc::write_text_file(out_path(config, "histogram_objective.svg"),
                             qoc::svg_histogram(summary.objective_hist, summary.objective_peaks,
                                                "objective values, " + label));
        qoc::write_text_file(out_path(config, "histogram_frobenius.svg"),
                             qoc::svg_histogram(summary.frobenius_hist, summary.frobenius_peaks,
                                                "frobenius values, " + label));
        qoc::write_text_file(out_path(config, "controls_u.svg"),
                             qoc::svg_control_overlay(summary, grid, 'u',
                                                      "optimized u(t), " + label));
        qoc::write_text_file(out_path(config, "controls_n.svg"),
                             qoc::svg_control_overlay(summary, grid, 'n',
                                                      "optimized n(t), " + label));
    }

    std::cout << "survey: " << config.survey.L << " runs (converged "
              << summary.tally.converged << ", stuck " << summary.tally.stuck << ", max_iters "
              << summary.tally.max_iters << ", failed " << summary.tally.failed << ")\n";
    for (std::size_t p = 0; p < summary.objective_peaks.size(); ++p) {
        std::cout << "  peak " << p << ": objective center " << sci(summary.objective_peaks[p].center)
                  << " width " << sci(summary.objective_peaks[p].width) << " (count "
                  << summary.objective_peaks[p].count << "), frobenius center "
                  << sci(summary.frobenius_peaks[p].center) << " width "
                  << sci(summary.frobenius_peaks[p].width) << "\n";
    }
    std::cout << "  outputs in " << config.output_directory << "\n";

    if (summary.tally.failed == config.survey.L) return kExitNumerical;
    if (summary.tally.max_iters > config.survey.L / 2) return kExitMaxIters;
    return kExitOk;
}

int cmd_report(const std::string& summary_path)
{
    std::ifstream in(summary_path);
    if (!in) {
        std::cerr << "error: cannot open summary file: " << summary_path << "\n";
        return kExitUsage;
    }
    qoc::json j;
    in >> j;
    const qoc::NamedSummary named = qoc::survey_summary_from_json(j);
    if (named.summary.objective_peaks.empty()) {
        std::cerr << "error: summary contains no peaks\n";
        return kExitUsage;
    }

    auto row = [](const std::string& label, const std::vector<qoc::PeakStats>& peaks) {
        std::cout << label << ',' << sci(peaks[0].center) << ',' << sci(peaks[0].width);
        if (peaks.size() > 1) {
            std::cout << ',' << sci(peaks[1].center) << ',' << sci(peaks[1].width);
        } else {
            std::cout << ",-,-";
        }
        std::cout << '\n';
    };
    std::cout << "quantity,C1,W1,C2,W2\n";
    row("F[" + named.gate + "," + named.objective + "]", named.summary.objective_peaks);
    row("Frobenius[" + named.gate + "]", named.summary.frobenius_peaks);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"open-qubit gate-generation: simulation, gradient optimization, and "
                 "multi-start landscape surveys"};
    app.require_subcommand(1);

    CommonFlags sim_flags;
    std::string controls_path;
    std::vector<double> r0_values{0.0, 0.0, 1.0};
    CLI::App* sim = app.add_subcommand("simulate", "propagate one piecewise-constant control");
    add_common_flags(sim, sim_flags);
    sim->add_option("--controls", controls_path, "controls file: CSV rows u,n or JSON {u,n}")
        ->required()
        ->check(CLI::ExistingFile);
    sim->add_option("--r0", r0_values, "initial Bloch vector")->expected(3)->delimiter(',');

    CommonFlags opt_flags;
    std::uint64_t opt_seed = 0;
    std::string init_path;
    CLI::App* opt = app.add_subcommand("optimize", "run one gradient descent");
    add_common_flags(opt, opt_flags);
    CLI::Option* seed_opt =
        opt->add_option("--seed", opt_seed, "sampling stream index for the initial controls");
    opt->add_option("--init", init_path, "initial controls file instead of a sampled start")
        ->check(CLI::ExistingFile)
        ->excludes(seed_opt);

    CommonFlags survey_flags;
    int runs = 0;
    std::uint64_t master_seed = 0;
    bool svg = false;
    CLI::App* surv = app.add_subcommand("survey", "multi-start descent and peak statistics");
    add_common_flags(surv, survey_flags);
    surv->add_option("--runs", runs, "number of descents")->check(CLI::PositiveNumber);
    CLI::Option* seed_surv = surv->add_option("--seed", master_seed, "master seed");
    surv->add_flag("--svg", svg, "also write SVG plots");

    std::string summary_path;
    CLI::App* rep = app.add_subcommand("report", "peak-statistics table from a summary file");
    rep->add_option("summary", summary_path, "summary.json from a survey")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) {
            return cmd_simulate(assemble_config(sim_flags), controls_path, r0_values);
        }
        if (opt->parsed()) {
            return cmd_optimize(assemble_config(opt_flags), opt_seed, init_path);
        }
        if (surv->parsed()) {
            qoc::RunConfig config = assemble_config(survey_flags);
            if (runs > 0) config.survey.L = runs;
            if (seed_surv->count() > 0) config.survey.master_seed = master_seed;
            if (svg && !config.wants_format("svg")) config.output_formats.push_back("svg");
            return cmd_survey(config);
        }
        if (rep->parsed()) {
            return cmd_report(summary_path);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qoc::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
