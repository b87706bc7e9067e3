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

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qoc/survey.hpp"

namespace qoc {

using json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void require_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) {
        throw std::invalid_argument(where + ": expected a JSON object");
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument(where + ": unknown key \"" + it.key() + "\"");
        }
    }
}

/// Everything one invocation needs: physics, grid, gate and objective
/// identifiers, optimizer and survey settings, output destination.
struct RunConfig {
    int schema_version = 1;
    SystemParams system;
    double T = 5.0;
    int M = 10;
    std::string gate = "H";
    std::string objective = "set2";
    OptimizerConfig optimizer;
    SurveyConfig survey;
    std::string output_directory = ".";
    std::vector<std::string> output_formats = {"csv", "json"};

    TimeGrid grid() const { return TimeGrid::regular(T, M); }
    ObjectiveSpec objective_spec() const { return parse_objective(objective, parse_gate(gate)); }

    void validate() const
    {
        if (schema_version != 1) {
            throw std::invalid_argument("RunConfig: unsupported schema_version");
        }
        system.validate();
        if (!(T > 0.0) || M < 1) {
            throw std::invalid_argument("RunConfig: need T > 0 and M >= 1");
        }
        optimizer.validate();
        survey.validate();
        for (const std::string& f : output_formats) {
            if (f != "csv" && f != "json" && f != "svg") {
                throw std::invalid_argument("RunConfig: unknown output format \"" + f + "\"");
            }
        }
        objective_spec(); // throws on unknown gate/objective identifiers
    }

    bool wants_format(const std::string& f) const
    {
        for (const std::string& g : output_formats) {
            if (g == f) return true;
        }
        return false;
    }
};

inline json run_config_to_json(const RunConfig& c)
{
    json j;
    j["schema_version"] = c.schema_version;
    j["system"] = {{"omega", c.system.omega}, {"mu", c.system.mu}, {"gamma", c.system.gamma}};
    j["grid"] = {{"T", c.T}, {"M", c.M}};
    j["gate"] = c.gate;
    j["objective"] = c.objective;
    j["optimizer"] = {{"eps", c.optimizer.eps},
                      {"eps_grad", c.optimizer.eps_grad},
                      {"h0", c.optimizer.h0},
                      {"c", c.optimizer.c},
                      {"d", c.optimizer.d},
                      {"L_stuck", c.optimizer.L_stuck},
                      {"N_partition", c.optimizer.N_partition},
                      {"max_iters", c.optimizer.max_iters}};
    j["survey"] = {{"L", c.survey.L},
                   {"master_seed", c.survey.master_seed},
                   {"u_range", {c.survey.u_range.lo, c.survey.u_range.hi}},
                   {"n_range", {c.survey.n_range.lo, c.survey.n_range.hi}},
                   {"bins", c.survey.histogram_bins},
                   {"parallelism", c.survey.parallelism}};
    j["output"] = {{"directory", c.output_directory}, {"formats", c.output_formats}};
    return j;
}

inline RunConfig run_config_from_json(const json& j)
{
    RunConfig c;
    require_keys(j, "config", {"schema_version", "system", "grid", "gate", "objective",
                               "optimizer", "survey", "output"});
    if (j.contains("schema_version")) c.schema_version = j.at("schema_version").get<int>();
    if (j.contains("system")) {
        const json& s = j.at("system");
        require_keys(s, "config.system", {"omega", "mu", "gamma"});
        if (s.contains("omega")) c.system.omega = s.at("omega").get<double>();
        if (s.contains("mu")) c.system.mu = s.at("mu").get<double>();
        if (s.contains("gamma")) c.system.gamma = s.at("gamma").get<double>();
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        require_keys(g, "config.grid", {"T", "M"});
        if (g.contains("T")) c.T = g.at("T").get<double>();
        if (g.contains("M")) c.M = g.at("M").get<int>();
    }
    if (j.contains("gate")) c.gate = j.at("gate").get<std::string>();
    if (j.contains("objective")) c.objective = j.at("objective").get<std::string>();
    if (j.contains("optimizer")) {
        const json& o = j.at("optimizer");
        require_keys(o, "config.optimizer",
                     {"eps", "eps_grad", "h0", "c", "d", "L_stuck", "N_partition", "max_iters"});
        if (o.contains("eps")) c.optimizer.eps = o.at("eps").get<double>();
        if (o.contains("eps_grad")) c.optimizer.eps_grad = o.at("eps_grad").get<double>();
        if (o.contains("h0")) c.optimizer.h0 = o.at("h0").get<double>();
        if (o.contains("c")) c.optimizer.c = o.at("c").get<double>();
        if (o.contains("d")) c.optimizer.d = o.at("d").get<double>();
        if (o.contains("L_stuck")) c.optimizer.L_stuck = o.at("L_stuck").get<int>();
        if (o.contains("N_partition")) c.optimizer.N_partition = o.at("N_partition").get<int>();
        if (o.contains("max_iters")) c.optimizer.max_iters = o.at("max_iters").get<int>();
    }
    if (j.contains("survey")) {
        const json& s = j.at("survey");
        require_keys(s, "config.survey",
                     {"L", "master_seed", "u_range", "n_range", "bins", "parallelism"});
        if (s.contains("L")) c.survey.L = s.at("L").get<int>();
        if (s.contains("master_seed")) {
            c.survey.master_seed = s.at("master_seed").get<std::uint64_t>();
        }
        if (s.contains("u_range")) {
            const json& r = s.at("u_range");
            if (!r.is_array() || r.size() != 2) {
                throw std::invalid_argument("config.survey.u_range: expected [lo, hi]");
            }
            c.survey.u_range = {r[0].get<double>(), r[1].get<double>()};
        }
        if (s.contains("n_range")) {
            const json& r = s.at("n_range");
            if (!r.is_array() || r.size() != 2) {
                throw std::invalid_argument("config.survey.n_range: expected [lo, hi]");
            }
            c.survey.n_range = {r[0].get<double>(), r[1].get<double>()};
        }
        if (s.contains("bins")) c.survey.histogram_bins = s.at("bins").get<int>();
        if (s.contains("parallelism")) c.survey.parallelism = s.at("parallelism").get<int>();
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        require_keys(o, "config.output", {"directory", "formats"});
        if (o.contains("directory")) c.output_directory = o.at("directory").get<std::string>();
        if (o.contains("formats")) {
            c.output_formats = o.at("formats").get<std::vector<std::string>>();
        }
    }
    c.validate();
    return c;
}

inline RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path);
    }
    json j;
    in >> j;
    return run_config_from_json(j);
}

inline json run_record_to_json(const RunRecord& rec)
{
    json j;
    j["seed"] = rec.seed;
    j["termination"] = termination_name(rec.termination);
    j["iterations"] = rec.iterations;
    j["objective"] = rec.objective;
    j["frobenius"] = rec.frobenius;
    j["u"] = rec.final_controls.u;
    j["w"] = rec.final_controls.w;
    j["u0"] = rec.initial.u;
    j["w0"] = rec.initial.w;
    return j;
}

inline Termination parse_termination(const std::string& name)
{
    if (name == "CONVERGED") return Termination::Converged;
    if (name == "STUCK") return Termination::Stuck;
    if (name == "MAX_ITERS") return Termination::MaxIters;
    if (name == "FAILED") return Termination::Failed;
    throw std::invalid_argument("unknown termination: " + name);
}

inline RunRecord run_record_from_json(const json& j)
{
    require_keys(j, "record",
                 {"seed", "termination", "iterations", "objective", "frobenius", "u", "w", "u0",
                  "w0"});
    RunRecord rec;
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.termination = parse_termination(j.at("termination").get<std::string>());
    rec.iterations = j.at("iterations").get<int>();
    // Non-finite doubles serialize as JSON null.
    rec.objective = j.at("objective").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                : j.at("objective").get<double>();
    rec.frobenius = j.at("frobenius").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                : j.at("frobenius").get<double>();
    rec.final_controls.u = j.at("u").get<std::vector<double>>();
    rec.final_controls.w = j.at("w").get<std::vector<double>>();
    rec.initial.u = j.at("u0").get<std::vector<double>>();
    rec.initial.w = j.at("w0").get<std::vector<double>>();
    return rec;
}

inline json peak_to_json(const PeakStats& p)
{
    return json{{"center", p.center}, {"width", p.width}, {"count", p.count}};
}

inline PeakStats peak_from_json(const json& j)
{
    require_keys(j, "peak", {"center", "width", "count"});
    PeakStats p;
    p.center = j.at("center").get<double>();
    p.width = j.at("width").get<double>();
    p.count = j.at("count").get<int>();
    return p;
}

inline json histogram_to_json(const Histogram& h)
{
    return json{{"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}};
}

inline Histogram histogram_from_json(const json& j)
{
    require_keys(j, "histogram", {"lo", "hi", "counts"});
    Histogram h;
    h.lo = j.at("lo").get<double>();
    h.hi = j.at("hi").get<double>();
    h.counts = j.at("counts").get<std::vector<int>>();
    return h;
}

/// The summary deliberately omits the parallelism setting: its content is a
/// pure function of the physics, the seeds and the run count, so files from
/// differently threaded executions compare byte-for-byte equal.
inline json survey_summary_to_json(const SurveySummary& s, const std::string& gate,
                                   const std::string& objective)
{
    json j;
    j["schema_version"] = 1;
    j["gate"] = gate;
    j["objective"] = objective;
    j["tally"] = {{"converged", s.tally.converged},
                  {"stuck", s.tally.stuck},
                  {"max_iters", s.tally.max_iters},
                  {"failed", s.tally.failed}};
    j["objective_peaks"] = json::array();
    for (const PeakStats& p : s.objective_peaks) j["objective_peaks"].push_back(peak_to_json(p));
    j["frobenius_peaks"] = json::array();
    for (const PeakStats& p : s.frobenius_peaks) j["frobenius_peaks"].push_back(peak_to_json(p));
    j["objective_histogram"] = histogram_to_json(s.objective_hist);
    j["frobenius_histogram"] = histogram_to_json(s.frobenius_hist);
    j["membership"] = s.membership;
    j["records"] = json::array();
    for (const RunRecord& rec : s.records) j["records"].push_back(run_record_to_json(rec));
    return j;
}

struct NamedSummary {
    std::string gate;
    std::string objective;
    SurveySummary summary;
};

inline NamedSummary survey_summary_from_json(const json& j)
{
    require_keys(j, "summary",
                 {"schema_version", "gate", "objective", "tally", "objective_peaks",
                  "frobenius_peaks", "objective_histogram", "frobenius_histogram", "membership",
                  "records"});
    NamedSummary named;
    named.gate = j.at("gate").get<std::string>();
    named.objective = j.at("objective").get<std::string>();
    SurveySummary& s = named.summary;
    const json& t = j.at("tally");
    require_keys(t, "summary.tally", {"converged", "stuck", "max_iters", "failed"});
    s.tally.converged = t.at("converged").get<int>();
    s.tally.stuck = t.at("stuck").get<int>();
    s.tally.max_iters = t.at("max_iters").get<int>();
    s.tally.failed = t.at("failed").get<int>();
    for (const json& p : j.at("objective_peaks")) s.objective_peaks.push_back(peak_from_json(p));
    for (const json& p : j.at("frobenius_peaks")) s.frobenius_peaks.push_back(peak_from_json(p));
    s.objective_hist = histogram_from_json(j.at("objective_histogram"));
    s.frobenius_hist = histogram_from_json(j.at("frobenius_histogram"));
    s.membership = j.at("membership").get<std::vector<int>>();
    for (const json& r : j.at("records")) s.records.push_back(run_record_from_json(r));
    return named;
}

inline void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing: " + path);
    }
}

inline void write_json_file(const std::string& path, const json& j)
{
    write_text_file(path, j.dump(2) + "\n");
}

/// CSV of a Bloch trajectory over the interval boundaries: k, t, r1, r2, r3.
inline std::string trajectory_csv(const TimeGrid& grid,
                                  const std::vector<Eigen::Vector3d>& states)
{
    std::ostringstream out;
    out << "k,t,r1,r2,r3\n";
    for (std::size_t k = 0; k < states.size(); ++k) {
        out << k << ',' << format_double(grid.boundaries[k]) << ','
            << format_double(states[k][0]) << ',' << format_double(states[k][1]) << ','
            << format_double(states[k][2]) << '\n';
    }
    return out.str();
}

/// CSV of the peak-labeled optimized controls:
/// run_id, peak, interval_index, t_start, t_end, u, n.
inline std::string manifolds_csv(const SurveySummary& summary, const TimeGrid& grid)
{
    std::ostringstream out;
    out << "run_id,peak,interval_index,t_start,t_end,u,n\n";
    for (std::size_t i = 0; i < summary.records.size(); ++i) {
        const int peak = summary.membership[i];
        if (peak < 0) continue;
        const ControlVector& v = summary.records[i].final_controls;
        for (int k = 0; k < grid.M; ++k) {
            out << i << ',' << peak << ',' << k << ',' << format_double(grid.boundaries[k])
                << ',' << format_double(grid.boundaries[k + 1]) << ',' << format_double(v.u[k])
                << ',' << format_double(v.n(k)) << '\n';
        }
    }
    return out.str();
}

inline json manifolds_json(const SurveySummary& summary, const TimeGrid& grid)
{
    json bundles = json::array();
    for (const ManifoldBundle& bundle : export_manifolds(summary)) {
        json b;
        b["peak"] = bundle.peak;
        b["t_boundaries"] = grid.boundaries;
        b["runs"] = json::array();
        for (std::size_t i = 0; i < bundle.records.size(); ++i) {
            const ControlVector& v = bundle.records[i]->final_controls;
            std::vector<double> n(v.w.size());
            for (std::size_t k = 0; k < n.size(); ++k) n[k] = v.n(static_cast<int>(k));
            b["runs"].push_back(json{{"run_id", bundle.run_ids[i]}, {"u", v.u}, {"n", n}});
        }
        bundles.push_back(std::move(b));
    }
    return json{{"schema_version", 1}, {"bundles", std::move(bundles)}};
}

inline std::string histogram_csv(const Histogram& h)
{
    std::ostringstream out;
    out << "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const int idx = static_cast<int>(i);
        out << format_double(h.bin_left(idx)) << ',' << format_double(h.bin_right(idx)) << ','
            << h.counts[i] << '\n';
    }
    return out.str();
}

/// Reads M control pairs from JSON {"u": [...], "n": [...]} or from CSV rows
/// "u,n" (optional header). Returns the (u, w = sqrt(n)) vector.
inline ControlVector parse_controls_json(const json& j, int m)
{
    require_keys(j, "controls", {"u", "n"});
    const std::vector<double> u = j.at("u").get<std::vector<double>>();
    const std::vector<double> n = j.at("n").get<std::vector<double>>();
    if (static_cast<int>(u.size()) != m || static_cast<int>(n.size()) != m) {
        throw std::invalid_argument("controls: expected " + std::to_string(m)
                                    + " values per channel");
    }
    ControlVector v = ControlVector::zeros(m);
    for (int k = 0; k < m; ++k) {
        if (n[k] < 0.0) {
            throw std::invalid_argument("controls: n must be nonnegative");
        }
        v.u[k] = u[k];
        v.w[k] = std::sqrt(n[k]);
    }
    return v;
}

inline ControlVector parse_controls_csv(std::istream& in, int m)
{
    std::vector<double> u, n;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b)) {
            throw std::invalid_argument("controls CSV: expected rows \"u,n\"");
        }
        try {
            u.push_back(std::stod(a));
            n.push_back(std::stod(b));
        } catch (const std::exception&) {
            if (u.empty() && n.empty()) continue; // header row
            throw std::invalid_argument("controls CSV: non-numeric row: " + line);
        }
    }
    json j;
    j["u"] = u;
    j["n"] = n;
    return parse_controls_json(j, m);
}

inline ControlVector load_controls(const std::string& path, int m)
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open controls file: " + path);
    }
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        json j;
        in >> j;
        return parse_controls_json(j, m);
    }
    return parse_controls_csv(in, m);
}

} // namespace qoc
