// Command-line front end: loads a scenario file, runs one analysis command
// and writes CSV/text artifacts into the output directory.
//
// Exit codes: 0 success, 1 validation failure, 2 instability, 3 size-guard
// violation, 4 I/O or malformed input.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tdmjls/io.hpp"
#include "tdmjls/scenario.hpp"

namespace fs = std::filesystem;
using namespace tdmjls;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInstability = 2;
constexpr int kExitSizeGuard = 3;
constexpr int kExitIo = 4;

struct Options {
    std::string scenario_path;
    std::string out_dir = ".";
    std::optional<double> alpha;
    std::optional<std::int64_t> horizon;
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::vector<double> alphas;
};

Scenario load_with_overrides(const Options& opt)
{
    Scenario sc = load_scenario(opt.scenario_path);
    if (opt.alpha) sc.alpha = *opt.alpha;
    if (opt.horizon) sc.horizon = *opt.horizon;
    if (opt.trials) sc.trials = *opt.trials;
    if (opt.seed) sc.seed = *opt.seed;
    if (!(sc.alpha >= 0.0)) throw StructuralError("alpha must be nonnegative");
    return sc;
}

std::ofstream open_output(const Options& opt, const std::string& name)
{
    fs::create_directories(opt.out_dir);
    const fs::path path = fs::path(opt.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw StructuralError("cannot open output file: " + path.string());
    return out;
}

std::string meta(const Scenario& sc, const std::string& extras = "")
{
    return metadata_line(scenario_fingerprint(sc), sc.seed, extras);
}

int cmd_validate(const Options& opt)
{
    const Scenario sc = parse_scenario(opt.scenario_path);
    const ValidationReport report = validate(sc);
    std::cout << report.to_string();
    std::cout << (report.all_passed() ? "scenario accepted\n" : "scenario rejected\n");
    return report.all_passed() ? kExitOk : kExitValidation;
}

int cmd_exact(const Options& opt)
{
    const Scenario sc = load_with_overrides(opt);
    const ErrorTrajectory traj = error_trajectory(sc.mdp, sc.net, sc.initial_state_dist,
                                                  sc.alpha, sc.theta0, sc.horizon);
    auto out = open_output(opt, "exact.csv");
    write_trajectory_csv(out, traj, meta(sc, "alpha=" + format_double(sc.alpha) +
                                                 " horizon=" + std::to_string(sc.horizon)));
    std::cout << "delta[0]=" << format_double(traj.deltas.front())
              << " delta[" << sc.horizon << "]=" << format_double(traj.deltas.back()) << '\n';
    return kExitOk;
}

int cmd_steady(const Options& opt)
{
    const Scenario sc = load_with_overrides(opt);
    const JumpChain chain = build_jump_chain(sc.mdp, sc.initial_state_dist);
    const MeanDynamics dyn = mean_dynamics(sc.mdp, chain);
    const ModeSystem modes = build_modes(sc.mdp, sc.net, chain, sc.alpha, dyn);
    const LtiMoments lti = assemble_lti(modes, chain, sc.size_guard);
    const SteadyState ss = steady_state(modes, chain, lti);
    auto out = open_output(opt, "steady.txt");
    out << meta(sc, "alpha=" + format_double(sc.alpha)) << '\n' << steady_text(ss);
    std::cout << "delta_inf=" << format_double(ss.delta_inf) << '\n';
    return kExitOk;
}

int cmd_spectrum(const Options& opt)
{
    const Scenario sc = load_with_overrides(opt);
    const JumpChain chain = build_jump_chain(sc.mdp, sc.initial_state_dist);
    const MeanDynamics dyn = mean_dynamics(sc.mdp, chain);
    const ModeSystem modes = build_modes(sc.mdp, sc.net, chain, sc.alpha, dyn);
    const LtiMoments lti = assemble_lti(modes, chain, sc.size_guard);
    const SpectralReport rep = spectrum_report(lti, chain, dyn, sc.alpha);

    const std::string text = spectrum_text(rep);
    std::cout << text;
    auto out = open_output(opt, "spectrum.txt");
    out << meta(sc, "alpha=" + format_double(sc.alpha)) << '\n' << text;
    auto json_out = open_output(opt, "spectrum.json");
    json_out << spectrum_json(rep);
    return kExitOk;
}

int cmd_perturb(const Options& opt)
{
    const Scenario sc = load_with_overrides(opt);
    const std::vector<double> grid =
        opt.alphas.empty() ? default_alpha_grid(sc.alpha) : opt.alphas;
    const PerturbationSweep sweep =
        alpha_sweep(sc.mdp, sc.net, sc.initial_state_dist, grid, sc.size_guard);

    auto out = open_output(opt, "perturb.csv");
    write_sweep_csv(out, sweep, meta(sc));
    const std::string summary = sweep_summary_text(sweep);
    std::cout << summary;
    auto sum_out = open_output(opt, "perturb_summary.txt");
    sum_out << meta(sc) << '\n' << summary;
    return kExitOk;
}

int cmd_simulate(const Options& opt)
{
    const Scenario sc = load_with_overrides(opt);
    const McEstimate mc = monte_carlo_error(sc.mdp, sc.net, sc.initial_state_dist, sc.alpha,
                                            sc.theta0, sc.horizon, sc.trials, sc.seed);
    auto out = open_output(opt, "simulate.csv");
    write_mc_csv(out, mc, nullptr,
                 meta(sc, "alpha=" + format_double(sc.alpha) + " trials=" +
                              std::to_string(sc.trials) + " rng=mt19937_64/splitmix64"));
    std::cout << "delta_hat[" << sc.horizon << "]=" << format_double(mc.deltas_hat.back())
              << " stderr=" << format_double(mc.stderrs.back()) << '\n';
    return kExitOk;
}

int cmd_compare(const Options& opt)
{
    const Scenario sc = load_with_overrides(opt);
    const ErrorTrajectory traj = error_trajectory(sc.mdp, sc.net, sc.initial_state_dist,
                                                  sc.alpha, sc.theta0, sc.horizon);
    const McEstimate mc = monte_carlo_error(sc.mdp, sc.net, sc.initial_state_dist, sc.alpha,
                                            sc.theta0, sc.horizon, sc.trials, sc.seed);
    const std::vector<CompareRow> rows = compare_rows(traj, mc);
    auto out = open_output(opt, "compare.csv");
    write_compare_csv(out, rows, meta(sc, "alpha=" + format_double(sc.alpha) + " trials=" +
                                              std::to_string(sc.trials)));

    std::int64_t within = 0;
    for (const auto& r : rows)
        if (std::abs(r.z) <= 4.0) ++within;
    std::cout << "rows=" << rows.size() << " |z|<=4: " << within << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact finite-time error analysis for decentralized TD(0)"};
    app.require_subcommand(1);

    Options opt;
    std::string alphas_csv;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", opt.scenario_path, "Scenario JSON file")->required();
        cmd->add_option("--out", opt.out_dir, "Output directory (default: current)");
        cmd->add_option("--alpha", opt.alpha, "Step size override");
        cmd->add_option("--horizon", opt.horizon, "Horizon override");
        cmd->add_option("--trials", opt.trials, "Trial count override");
        cmd->add_option("--seed", opt.seed, "Master seed override");
        cmd->add_option("--alphas", alphas_csv, "Comma-separated step-size grid (perturb)");
    };

    struct Entry {
        const char* name;
        const char* desc;
        int (*run)(const Options&);
    };
    const Entry entries[] = {
        {"validate", "Check every scenario invariant and print the report", cmd_validate},
        {"exact", "Exact mean-squared error trajectory (CSV)", cmd_exact},
        {"steady", "Steady-state moments and delta_inf", cmd_steady},
        {"spectrum", "Spectral radii, stability verdict and first-order predictions", cmd_spectrum},
        {"perturb", "Step-size sweep with small-alpha slope diagnostics", cmd_perturb},
        {"simulate", "Monte Carlo estimate of the error trajectory (CSV)", cmd_simulate},
        {"compare", "Joined exact-vs-Monte-Carlo table with z-scores (CSV)", cmd_compare},
    };
    for (const auto& e : entries) add_common(app.add_subcommand(e.name, e.desc));

    CLI11_PARSE(app, argc, argv);

    if (!alphas_csv.empty()) {
        std::stringstream ss(alphas_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) opt.alphas.push_back(std::stod(tok));
    }

    try {
        for (const auto& e : entries)
            if (app.get_subcommand(e.name)->parsed()) return e.run(opt);
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << e.report.to_string() << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const UnstableSystemError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInstability;
    } catch (const InstabilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInstability;
    } catch (const SizeGuardError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSizeGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}
