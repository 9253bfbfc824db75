// vrelay: sweeps, config checks and single-point analytic-vs-simulation
// comparisons from the command line.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <vrelay/blockage.hpp>
#include <vrelay/config_io.hpp>
#include <vrelay/simulator.hpp>
#include <vrelay/sweep.hpp>

namespace {

using namespace vrelay;

Settings parse_overrides(const std::vector<std::string>& sets)
{
    Settings out;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + s + "'");
        out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return out;
}

Configuration load_with_overrides(const std::string& path, const std::vector<std::string>& sets)
{
    Settings settings = path.empty() ? Settings{} : read_settings_file(path);
    const Settings extra = parse_overrides(sets);
    settings.insert(settings.end(), extra.begin(), extra.end());
    return apply_settings({}, settings);
}

int report_inadmissible(const Configuration& c)
{
    const auto report = validate(c.street, c.stochastic);
    for (const auto& r : report)
        std::cerr << "violated: " << r << "\n";
    return report.empty() ? 0 : 1;
}

struct SweepArgs
{
    std::string spec;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> drops;
    std::string out;
    std::string plot;
    unsigned threads = 1;
};

int run_sweep_command(const SweepArgs& a)
{
    SweepSpec spec = load_sweep_spec(a.spec);
    const Settings extra = parse_overrides(a.sets);
    spec.base.insert(spec.base.end(), extra.begin(), extra.end());
    apply_settings({}, spec.base);
    if (a.seed)
        spec.seed = *a.seed;
    if (a.drops)
        spec.drops = *a.drops;
    if (!a.out.empty())
        spec.output = a.out;
    if (spec.output.empty())
        spec.output = std::filesystem::path(a.spec).stem().string() + ".csv";
    if (!is_plot_template(spec.plot_template))
        throw ConfigError("unknown plot template: " + spec.plot_template);

    const auto rows = run_sweep(spec, a.threads);
    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            ++failed;
            std::cerr << "point " << format_number(r.swept_value) << " (" << to_string(r.engine)
                      << "): " << r.error << "\n";
        }
    }

    const std::string plot =
        !a.plot.empty() ? a.plot : std::filesystem::path(spec.output).replace_extension(".py").string();
    write_text_file(plot, emit_plot_script(rows, spec.plot_template, spec.output, spec.x_label));
    std::cout << rows.size() << " rows -> " << spec.output << " (plot script " << plot << ")";
    if (failed > 0)
        std::cout << ", " << failed << " rows with errors";
    std::cout << "\n";
    return 0;
}

int run_validate_command(const std::string& path)
{
    const Configuration c = load_configuration(path);
    if (report_inadmissible(c) != 0)
        return 1;
    const Scenario scn(c.street, c.stochastic);
    const auto& s = c.street;
    std::printf("admissible\n");
    std::printf("  mean pedestrian gap     %.6g m (%.6g humans/m^2)\n", c.stochastic.pedestrian_gap.mean(),
                pedestrian_area_density(c.stochastic.pedestrian_gap, s.r_P));
    std::printf("  mean vehicle gap        %.6g m\n", c.stochastic.vehicle_gap.mean());
    std::printf("  lowest blocking bus     %.6g m (UE-AP), %.6g m (COW-AP)\n", min_blocking_bus_height_ue_ap(s),
                min_blocking_bus_height_cow_ap(s));
    std::printf("  COW window half-length  %.6g m\n", cow_window_half_length(s));
    std::printf("  COW coverage            %.6g\n", cow_coverage_probability(scn));
    return 0;
}

struct OracleArgs
{
    std::string quantity;
    double position = 0.0;
    std::string strategy = "baseline";
    std::string config;
    std::vector<std::string> sets;
    std::string mode = "analytic";
    std::uint64_t seed = 1;
    std::uint64_t drops = 1000000;
    unsigned threads = 1;
};

Quantity make_quantity(const OracleArgs& a)
{
    if (a.quantity == "ue_ap_human")
        return Quantity::ue_ap_human(a.position);
    if (a.quantity == "ue_ap_vehicle")
        return Quantity::ue_ap_vehicle(a.position);
    if (a.quantity == "ue_ap_joint")
        return Quantity::ue_ap_joint(a.position);
    if (a.quantity == "cow_coverage")
        return Quantity::cow_coverage();
    if (a.quantity == "ue_cow")
        return Quantity::ue_cow(a.position);
    if (a.quantity == "cow_ap")
        return Quantity::cow_ap(a.position);
    if (a.quantity == "mean_se")
        return Quantity::mean_se(parse_strategy(a.strategy));
    throw ConfigError("unknown quantity: " + a.quantity);
}

int run_oracle_command(const OracleArgs& a)
{
    const Configuration c = load_with_overrides(a.config, a.sets);
    if (report_inadmissible(c) != 0)
        return 2;
    SimulationMode mode;
    if (a.mode == "analytic")
        mode = SimulationMode::analytic();
    else if (a.mode == "relaxed")
        mode = SimulationMode::relaxed();
    else
        throw ConfigError("--mode must be analytic or relaxed");
    const Scenario scn(c.street, c.stochastic);
    const Quantity q = make_quantity(a);
    const double exact = analytic_value(scn, q);
    const SimEstimate sim = estimate(scn, mode, q, a.drops, a.seed, a.threads);
    const double tol = std::max(2.0 * sim.half_width_95, 0.02);
    const bool agree = std::abs(sim.mean - exact) <= tol;
    std::printf("%s analytic %.9g simulated %.9g +- %.3g (%llu drops) |diff| %.3g tol %.3g %s\n",
                a.quantity.c_str(), exact, sim.mean, sim.half_width_95,
                static_cast<unsigned long long>(sim.n_drops), std::abs(sim.mean - exact), tol,
                agree ? "AGREE" : "DISAGREE");
    return agree ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral-efficiency evaluation of mmWave vehicular relaying"};
    app.require_subcommand(1);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());

    SweepArgs sweep;
    sweep.threads = hw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a sweep recipe, write CSV and a plot script");
    sweep_cmd->add_option("spec", sweep.spec, "Recipe file")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--seed", sweep.seed, "Master seed (overrides the recipe)");
    sweep_cmd->add_option("--drops", sweep.drops, "Drops per simulated point (overrides the recipe)");
    sweep_cmd->add_option("--out", sweep.out, "CSV path (overrides the recipe)");
    sweep_cmd->add_option("--plot", sweep.plot, "Plot script path (default: CSV path with .py)");
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--set", sweep.sets, "Config override key=value (repeatable)");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a config file and print derived quantities");
    validate_cmd->add_option("config", validate_path, "Config file")->required()->check(CLI::ExistingFile);

    OracleArgs oracle;
    oracle.threads = hw;
    auto* oracle_cmd = app.add_subcommand("oracle", "Compare one analytic quantity with the simulator");
    oracle_cmd
        ->add_option("quantity", oracle.quantity,
                     "ue_ap_human | ue_ap_vehicle | ue_ap_joint | cow_coverage | ue_cow | cow_ap | mean_se")
        ->required();
    oracle_cmd->add_option("position", oracle.position, "x0, x_S or x1 in meters, as the quantity needs");
    oracle_cmd->add_option("--strategy", oracle.strategy, "Strategy for mean_se");
    oracle_cmd->add_option("--config", oracle.config, "Config file (defaults otherwise)")->check(CLI::ExistingFile);
    oracle_cmd->add_option("--set", oracle.sets, "Config override key=value (repeatable)");
    oracle_cmd->add_option("--mode", oracle.mode, "Simulation mode: analytic | relaxed");
    oracle_cmd->add_option("--seed", oracle.seed, "Master seed");
    oracle_cmd->add_option("--drops", oracle.drops, "Drops")->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--threads", oracle.threads, "Worker threads")->check(CLI::PositiveNumber);

    app.add_subcommand("defaults", "Print the default config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep_cmd)
            return run_sweep_command(sweep);
        if (*validate_cmd)
            return run_validate_command(validate_path);
        if (*oracle_cmd)
            return run_oracle_command(oracle);
        std::cout << format_configuration({});
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
