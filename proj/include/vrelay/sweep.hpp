#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "config_io.hpp"
#include "simulator.hpp"
#include "strategy.hpp"

namespace vrelay {

enum class Engine
{
    analytic,
    sim_analytic_mode,
    sim_relaxed
};

inline constexpr std::array<Engine, 3> kAllEngines = {Engine::analytic, Engine::sim_analytic_mode,
                                                       Engine::sim_relaxed};

inline std::string_view to_string(Engine e)
{
    switch (e) {
    case Engine::analytic:
        return "analytic";
    case Engine::sim_analytic_mode:
        return "sim_analytic_mode";
    case Engine::sim_relaxed:
        return "sim_relaxed";
    }
    return "?";
}

inline Engine parse_engine(std::string_view name)
{
    for (Engine e : kAllEngines)
        if (to_string(e) == name)
            return e;
    throw ConfigError("unknown engine: " + std::string(name));
}

/// One sweep: a base configuration, a key swept over a grid, and what to
/// evaluate at every grid point.
struct SweepSpec
{
    std::string parameter;
    std::vector<double> grid;
    std::vector<Engine> engines{Engine::analytic};
    std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};
    Settings base;
    std::string output;
    std::string plot_template = "custom";
    std::string x_label;
    std::uint64_t drops = 100000;
    std::uint64_t seed = 1;
};

/// Throws ConfigError on the first violated invariant.
inline void check_spec(const SweepSpec& spec)
{
    if (!is_config_key(spec.parameter))
        throw ConfigError("sweep: unknown parameter '" + spec.parameter + "'");
    if (spec.grid.empty())
        throw ConfigError("sweep: empty grid");
    for (std::size_t i = 1; i < spec.grid.size(); ++i)
        if (!(spec.grid[i] > spec.grid[i - 1]))
            throw ConfigError("sweep: grid must be strictly increasing");
    if (spec.engines.empty())
        throw ConfigError("sweep: no engine");
    if (spec.strategies.empty())
        throw ConfigError("sweep: no strategy");
    if (spec.drops == 0)
        throw ConfigError("sweep: drops must be positive");
}

/// Reads a recipe. Recognized keys: parameter, grid, engines, strategies,
/// output, template, x_label, drops, seed and config (a base config file,
/// relative to the recipe). Every other key is a config setting applied on
/// top of the base file.
inline SweepSpec parse_sweep_spec(const Settings& settings, const std::filesystem::path& directory = {})
{
    SweepSpec spec;
    for (const auto& [key, value] : settings) {
        try {
            if (key == "parameter") {
                spec.parameter = value;
            } else if (key == "grid") {
                spec.grid.clear();
                for (const auto& w : detail::split_words(value))
                    spec.grid.push_back(parse_number(w));
            } else if (key == "engines") {
                spec.engines.clear();
                for (const auto& w : detail::split_words(value))
                    spec.engines.push_back(parse_engine(w));
            } else if (key == "strategies") {
                spec.strategies.clear();
                for (const auto& w : detail::split_words(value))
                    spec.strategies.push_back(parse_strategy(w));
            } else if (key == "output") {
                spec.output = value;
            } else if (key == "template") {
                spec.plot_template = value;
            } else if (key == "x_label") {
                spec.x_label = value;
            } else if (key == "drops") {
                spec.drops = static_cast<std::uint64_t>(parse_number(value));
            } else if (key == "seed") {
                spec.seed = static_cast<std::uint64_t>(parse_number(value));
            } else if (key == "config") {
                const auto base = read_settings_file((directory / value).string());
                spec.base.insert(spec.base.end(), base.begin(), base.end());
            } else {
                spec.base.emplace_back(key, value);
            }
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key + ": " + e.what());
        }
    }
    // Surface bad base settings before any work starts.
    apply_settings({}, spec.base);
    check_spec(spec);
    return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path)
{
    return parse_sweep_spec(read_settings_file(path), std::filesystem::path(path).parent_path());
}

struct ResultRow
{
    double swept_value = 0.0;
    Strategy strategy = Strategy::baseline;
    Engine engine = Engine::analytic;
    double mean_se = 0.0;
    double half_width = 0.0;
    double relative_gain = 0.0;
    std::string error;

    bool operator==(const ResultRow&) const = default;
};

namespace detail {

/// Seed of the simulation at one grid point; engines get distinct streams.
inline std::uint64_t point_seed(std::uint64_t master, std::size_t grid_index, Engine engine)
{
    return make_stream(master, 3 * grid_index + static_cast<std::size_t>(engine))();
}

inline std::vector<ResultRow> evaluate_point(const SweepSpec& spec, std::size_t index, Engine engine,
                                             unsigned threads)
{
    const double value = spec.grid[index];
    std::vector<ResultRow> rows;
    for (Strategy s : spec.strategies)
        rows.push_back({value, s, engine, 0.0, 0.0, 0.0, {}});
    try {
        Settings settings = spec.base;
        settings.emplace_back(spec.parameter, format_number(value));
        const Configuration c = apply_settings({}, settings);
        const auto report = validate(c.street, c.stochastic);
        if (!report.empty()) {
            std::string msg = "inadmissible:";
            for (const auto& r : report)
                msg += " " + r + ";";
            msg.pop_back();
            throw ConfigError(msg);
        }
        const Scenario scn(c.street, c.stochastic);
        std::array<double, 3> mean{};
        std::array<double, 3> half{};
        if (engine == Engine::analytic) {
            const auto m = mean_se_strategies(scn);
            for (Strategy s : kAllStrategies)
                mean[static_cast<std::size_t>(s)] = m[s];
        } else {
            const auto mode =
                engine == Engine::sim_relaxed ? SimulationMode::relaxed() : SimulationMode::analytic();
            const auto est = estimate_strategies(scn, mode, spec.drops, point_seed(spec.seed, index, engine), threads);
            for (std::size_t k = 0; k < 3; ++k) {
                mean[k] = est[k].mean;
                half[k] = est[k].half_width_95;
            }
        }
        const double base = mean[static_cast<std::size_t>(Strategy::baseline)];
        for (auto& r : rows) {
            const auto k = static_cast<std::size_t>(r.strategy);
            r.mean_se = mean[k];
            r.half_width = half[k];
            r.relative_gain = base > 0.0 ? mean[k] / base - 1.0 : std::numeric_limits<double>::quiet_NaN();
        }
    } catch (const std::exception& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (auto& r : rows) {
            r.mean_se = nan;
            r.half_width = nan;
            r.relative_gain = nan;
            r.error = e.what();
        }
    }
    return rows;
}

}  // namespace detail

inline constexpr std::array<std::string_view, 7> kCsvColumns = {
    "swept_value", "strategy", "engine", "mean_se", "half_width", "relative_gain", "error"};

inline std::string csv_header()
{
    std::string out;
    for (auto c : kCsvColumns)
        out += (out.empty() ? "" : ",") + std::string(c);
    return out;
}

namespace detail {

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

/// Splits one CSV record starting at `pos`; handles quoted fields with
/// embedded commas, quotes and newlines.
inline std::optional<std::vector<std::string>> csv_record(const std::string& text, std::size_t& pos)
{
    if (pos >= text.size())
        return std::nullopt;
    std::vector<std::string> fields(1);
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos++];
        if (quoted) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    fields.back() += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    if (quoted)
        throw ConfigError("csv: unterminated quote");
    return fields;
}

}  // namespace detail

inline std::string format_csv(const std::vector<ResultRow>& rows)
{
    std::string out = csv_header() + "\n";
    for (const auto& r : rows) {
        out += format_number(r.swept_value) + "," + std::string(to_string(r.strategy)) + "," +
               std::string(to_string(r.engine)) + "," + format_number(r.mean_se) + "," +
               format_number(r.half_width) + "," + format_number(r.relative_gain) + "," +
               detail::csv_escape(r.error) + "\n";
    }
    return out;
}

inline std::vector<ResultRow> parse_csv(const std::string& text)
{
    std::size_t pos = 0;
    const auto header = detail::csv_record(text, pos);
    if (!header || !std::equal(header->begin(), header->end(), kCsvColumns.begin(), kCsvColumns.end()))
        throw ConfigError("csv: unexpected header");
    std::vector<ResultRow> rows;
    while (auto rec = detail::csv_record(text, pos)) {
        if (rec->size() == 1 && rec->front().empty())
            continue;
        if (rec->size() != kCsvColumns.size())
            throw ConfigError("csv: expected 7 fields, got " + std::to_string(rec->size()));
        const auto& f = *rec;
        rows.push_back({parse_number(f[0]), parse_strategy(f[1]), parse_engine(f[2]), parse_number(f[3]),
                        parse_number(f[4]), parse_number(f[5]), f[6]});
    }
    return rows;
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    const std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out)
        throw ConfigError("cannot write " + path);
}

/// Evaluates every grid point x engine x strategy. Rows are ordered by grid
/// index, then engine, then strategy, whatever the completion order; a failed
/// point yields rows carrying the error and NaN values. Writes the CSV to
/// spec.output when it is set.
inline std::vector<ResultRow> run_sweep(const SweepSpec& spec, unsigned threads = 1)
{
    check_spec(spec);
    const std::size_t n_engines = spec.engines.size();
    const std::size_t tasks = spec.grid.size() * n_engines;
    std::vector<std::vector<ResultRow>> results(tasks);
    threads = std::max(1u, threads);
    const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
    // Leftover threads go to the drop loop of each point; the estimate does
    // not depend on how many there are.
    const unsigned inner = std::max(1u, threads / outer);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks; t = next++)
            results[t] = detail::evaluate_point(spec, t / n_engines, spec.engines[t % n_engines], inner);
    };
    if (outer == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < outer; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    std::vector<ResultRow> rows;
    for (auto& r : results)
        rows.insert(rows.end(), r.begin(), r.end());
    if (!spec.output.empty())
        write_text_file(spec.output, format_csv(rows));
    return rows;
}

namespace detail {

struct PlotTemplate
{
    std::string_view id;
    std::string_view x_label;
    std::string_view y_label;
    bool gain = false;  // plot relative gain in percent, without the baseline
};

inline constexpr std::array<PlotTemplate, 5> kPlotTemplates{{
    {"fig5", "Pedestrian density [humans/m$^2$]", "Mean SE [bits/s/Hz]", false},
    {"fig6", "Vehicle density [vehicles/100 m per lane]", "Mean SE [bits/s/Hz]", false},
    {"fig7", "COW range R [m]", "Mean SE [bits/s/Hz]", false},
    {"fig8", "Fraction of relay-capable cars $p_R$", "SE gain over Baseline [%]", true},
    {"custom", "", "Mean SE [bits/s/Hz]", false},
}};

inline std::string py_string(std::string_view s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\\' || c == '\'')
            out += '\\';
        out += c;
    }
    return out + "'";
}

}  // namespace detail

inline bool is_plot_template(std::string_view id)
{
    return std::any_of(detail::kPlotTemplates.begin(), detail::kPlotTemplates.end(),
                       [&](const auto& t) { return t.id == id; });
}

/// Self-contained matplotlib script that reads `csv_path` and draws one curve
/// per (strategy, engine) present in `rows`. `x_label` overrides the
/// template's axis label (the custom template has none of its own).
inline std::string emit_plot_script(const std::vector<ResultRow>& rows, std::string_view template_id,
                                    const std::string& csv_path, std::string_view x_label = {})
{
    const auto it = std::find_if(detail::kPlotTemplates.begin(), detail::kPlotTemplates.end(),
                                 [&](const auto& t) { return t.id == template_id; });
    if (it == detail::kPlotTemplates.end())
        throw ConfigError("unknown plot template: " + std::string(template_id));
    if (rows.empty())
        throw ConfigError("plot: no rows");

    std::vector<std::pair<Strategy, Engine>> curves;
    for (const auto& r : rows) {
        if (it->gain && r.strategy == Strategy::baseline)
            continue;
        const std::pair key{r.strategy, r.engine};
        if (std::find(curves.begin(), curves.end(), key) == curves.end())
            curves.push_back(key);
    }
    if (curves.empty())
        throw ConfigError("plot: no strategy to draw");

    const std::string_view xl = !x_label.empty() ? x_label : (!it->x_label.empty() ? it->x_label : "swept value");
    std::ostringstream py;
    py << "import csv\n"
       << "import math\n"
       << "import sys\n"
       << "import matplotlib\n"
       << "matplotlib.use('Agg')\n"
       << "import matplotlib.pyplot as plt\n\n"
       << "CSV = sys.argv[1] if len(sys.argv) > 1 else " << detail::py_string(csv_path) << "\n"
       << "OUT = sys.argv[2] if len(sys.argv) > 2 else CSV.rsplit('.', 1)[0] + '.png'\n"
       << "GAIN = " << (it->gain ? "True" : "False") << "\n"
       << "CURVES = [\n";
    for (const auto& [s, e] : curves)
        py << "    (" << detail::py_string(to_string(s)) << ", " << detail::py_string(to_string(e)) << "),\n";
    py << "]\n"
       << "COLORS = {'baseline': 'tab:blue', 'conservative': 'tab:orange', 'aggressive': 'tab:green'}\n"
       << "STYLES = {'analytic': ('-', None), 'sim_analytic_mode': ('none', 'o'), 'sim_relaxed': ('none', 'x')}\n\n"
       << "data = {}\n"
       << "with open(CSV, newline='') as f:\n"
       << "    for row in csv.DictReader(f):\n"
       << "        if row['error']:\n"
       << "            continue\n"
       << "        y = float(row['relative_gain']) * 100.0 if GAIN else float(row['mean_se'])\n"
       << "        hw = float(row['half_width'])\n"
       << "        if GAIN:\n"
       << "            hw = float('nan')\n"
       << "        data.setdefault((row['strategy'], row['engine']), []).append((float(row['swept_value']), y, hw))\n\n"
       << "fig, ax = plt.subplots(figsize=(6, 4))\n"
       << "for strategy, engine in CURVES:\n"
       << "    pts = sorted(data.get((strategy, engine), []))\n"
       << "    if not pts:\n"
       << "        continue\n"
       << "    xs, ys, hws = zip(*pts)\n"
       << "    line, marker = STYLES[engine]\n"
       << "    err = None if all(math.isnan(h) or h == 0.0 for h in hws) else hws\n"
       << "    ax.errorbar(xs, ys, yerr=err, linestyle=line, marker=marker, color=COLORS[strategy],\n"
       << "                label=f'{strategy} ({engine})')\n"
       << "ax.set_xlabel(" << detail::py_string(xl) << ")\n"
       << "ax.set_ylabel(" << detail::py_string(it->y_label) << ")\n"
       << "ax.grid(True, alpha=0.3)\n"
       << "ax.legend()\n"
       << "fig.tight_layout()\n"
       << "fig.savefig(OUT, dpi=150)\n"
       << "print(OUT)\n";
    return py.str();
}

}  // namespace vrelay
