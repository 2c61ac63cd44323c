// porolim: finite-volume experiments for 1-D two-phase flow in a porous
// medium and its Richards-type limit. Subcommands: run, compare, sweep,
// diagnose, presets.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "porolim/porolim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct GlobalOpts {
    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    int cells = 0;
    double sigma = 0.0;
    double mu = 0.0;
    bool quiet = false;
};

void add_common(CLI::App* cmd, GlobalOpts& g) {
    cmd->add_option("--config", g.config_path, "config file (key = value lines)");
    cmd->add_option("--preset", g.preset_name, "builtin preset: test1, test2, test3");
    cmd->add_option("--out", g.out_dir, "output directory (default: $POROLIM_OUT or .)");
    cmd->add_option("--cells", g.cells, "override n_cells");
    cmd->add_option("--sigma", g.sigma, "override CFL factor sigma");
    cmd->add_option("--mu", g.mu, "override viscosity ratio mu");
    cmd->add_flag("--quiet", g.quiet, "suppress progress output");
}

porolim::RunConfig resolve_config(const GlobalOpts& g) {
    porolim::RunConfig cfg;
    if (!g.preset_name.empty()) cfg = porolim::preset(g.preset_name);
    if (!g.config_path.empty()) cfg = porolim::parse_config_file(g.config_path, cfg);
    if (g.config_path.empty() && g.preset_name.empty())
        throw porolim::ConfigError("give --preset or --config");
    if (g.cells > 0) cfg.n_cells = static_cast<std::size_t>(g.cells);
    if (g.sigma > 0.0) cfg.sigma = g.sigma;
    if (g.mu > 0.0) cfg.mu = g.mu;
    if (!g.out_dir.empty()) {
        cfg.out_dir = g.out_dir;
    } else if (cfg.out_dir == ".") {
        if (const char* env = std::getenv("POROLIM_OUT")) cfg.out_dir = env;
    }
    porolim::validate(cfg);
    return cfg;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::ios_base::failure("cannot create output directory '" + dir + "'");
}

int cmd_run(const GlobalOpts& g) {
    using namespace porolim;
    const RunConfig cfg = resolve_config(g);
    const ConstitutiveModel model = model_from_config(cfg);
    const TransformTable table = build_table(model, cfg.mu, uniform_grid());
    const RunSetup rs = make_setup(cfg, model, &table);
    const Trajectory traj = run_simulation(rs);

    ensure_out_dir(cfg.out_dir);
    for (double t : cfg.snapshots) {
        for (const auto& s : traj.states) {
            if (std::abs(s.t - t) < 1e-13) {
                write_snapshot_csv(snapshot_path(cfg.out_dir, cfg.run_id, t), s, rs.grid);
                break;
            }
        }
    }
    {
        auto out = open_out(cfg.out_dir + "/" + cfg.run_id + "_manifest.txt");
        out << serialize_config(cfg);
    }
    write_plot_script(cfg.out_dir + "/" + cfg.run_id + "_plot.gp", cfg.run_id,
                      cfg.snapshots);
    if (!g.quiet) {
        std::cout << cfg.run_id << ": " << traj.dts.size() << " steps, scheme "
                  << rs.scheme.describe() << ", wrote " << cfg.snapshots.size()
                  << " snapshot(s) to " << cfg.out_dir << "\n";
    }
    return kExitOk;
}

int cmd_compare(const GlobalOpts& g) {
    using namespace porolim;
    RunConfig cfg = resolve_config(g);
    const ConstitutiveModel model = model_from_config(cfg);
    const TransformTable table = build_table(model, cfg.mu, uniform_grid());

    RunConfig two_cfg = cfg;
    two_cfg.scheme = "two-phase";
    RunConfig lim_cfg = cfg;
    lim_cfg.scheme = "limit";

    const RunSetup rs_two = make_setup(two_cfg, model, &table);
    const RunSetup rs_lim = make_setup(lim_cfg, model, &table);
    const Trajectory t_two = run_simulation(rs_two);
    const Trajectory t_lim = run_simulation(rs_lim);

    ensure_out_dir(cfg.out_dir);
    double sup_final = 0.0;
    double l2 = 0.0, tprev = 0.0;
    for (double t : cfg.snapshots) {
        const SimState* a = nullptr;
        const SimState* b = nullptr;
        for (const auto& s : t_two.states)
            if (std::abs(s.t - t) < 1e-13) a = &s;
        for (const auto& s : t_lim.states)
            if (std::abs(s.t - t) < 1e-13) b = &s;
        if (!a || !b) continue;
        write_compare_csv(cfg.out_dir + "/" + cfg.run_id + "_compare_t" + time_label(t) +
                              ".csv",
                          rs_two.grid, a->u, b->u);
        double sum = 0.0, sup = 0.0;
        for (std::size_t i = 0; i < a->u.size(); ++i) {
            const double d = a->u[i] - b->u[i];
            sum += rs_two.grid.h * d * d;
            sup = std::max(sup, std::abs(d));
        }
        l2 += (t - tprev) * sum;
        tprev = t;
        sup_final = sup;
        if (!g.quiet)
            std::cout << "t = " << time_label(t) << ": sup gap " << sup << "\n";
    }
    std::cout << "sup gap (final snapshot) = " << sup_final << "\n";
    std::cout << "L2(Q_T) gap = " << std::sqrt(l2) << "\n";
    return kExitOk;
}

int cmd_sweep(const GlobalOpts& g, const std::vector<double>& mus_in) {
    using namespace porolim;
    RunConfig cfg = resolve_config(g);
    std::vector<double> mus = mus_in;
    if (mus.empty()) mus = {1e-2, 1e-4, 1e-6, 1e-8};
    const ConstitutiveModel model = model_from_config(cfg);
    RunConfig base_cfg = cfg;
    base_cfg.scheme = "two-phase";
    const RunSetup base = make_setup(base_cfg, model, nullptr);
    const SweepResult res = mu_sweep(base, mus, cfg.limit_mode == "obstacle");

    ensure_out_dir(cfg.out_dir);
    write_sweep_csv(cfg.out_dir + "/" + cfg.run_id + "_sweep.csv", res);
    bool monotone = true;
    for (std::size_t j = 1; j < res.l2_diff.size(); ++j)
        if (!(res.l2_diff[j] < res.l2_diff[j - 1])) monotone = false;
    if (!g.quiet) {
        for (std::size_t j = 0; j < res.mus.size(); ++j)
            std::cout << "mu = " << res.mus[j] << ": l2_diff = " << res.l2_diff[j]
                      << ", sup_final = " << res.sup_diff_final[j]
                      << ", est1 = " << res.est1_vals[j] << "\n";
    }
    std::cout << "l2_diff " << (monotone ? "strictly decreasing" : "NOT monotone")
              << " along the mu list\n";
    return kExitOk;
}

int cmd_diagnose(const GlobalOpts& g) {
    using namespace porolim;
    RunConfig cfg = resolve_config(g);
    if (cfg.recording != "dense")
        throw ConfigError(
            "diagnose needs recording = dense (estimate functionals integrate over "
            "every accepted step)");
    const ConstitutiveModel model = model_from_config(cfg);
    const RunSetup rs = make_setup(cfg, model, nullptr);
    const Trajectory traj = run_simulation(rs);

    std::vector<EstimateReport> reports;
    if (rs.scheme.kind == SchemeKind::TwoPhase) {
        reports.push_back(est_air_energy(traj, rs.grid, model, cfg.mu));
        reports.push_back(est_pressure_energy(traj, rs.grid, model, cfg.mu));
    }
    reports.push_back(est_zeta_energy(traj, rs.grid, model));
    reports.push_back(est_g_energy(traj, rs.grid, model));
    for (std::size_t k : {1, 2, 4, 8})
        reports.push_back(space_translate(traj, rs.grid, model, k));
    for (std::size_t m : {1, 2, 4, 8})
        reports.push_back(time_translate(traj, rs.grid, model, m));

    for (const auto& r : reports)
        if (!(r.value >= 0.0))
            throw StabilityError("estimate functional went negative", 0, r.value, cfg.T);

    ensure_out_dir(cfg.out_dir);
    write_estimates_csv(cfg.out_dir + "/" + cfg.run_id + "_estimates.csv", reports);
    if (!g.quiet)
        for (const auto& r : reports)
            std::cout << r.name << " = " << r.value << "  (" << r.normalization << ")\n";
    return kExitOk;
}

int cmd_presets() {
    for (const auto& name : porolim::preset_names()) {
        const auto cfg = porolim::preset(name);
        std::cout << name << ": c = " << cfg.c << ", T = " << cfg.T << ", u0 = "
                  << (cfg.u0_kind == "const"
                          ? "const " + std::to_string(cfg.u0_const)
                          : "step at 1/3 (0.1 | 0.7)")
                  << ", snapshots =";
        for (double t : cfg.snapshots) std::cout << " " << t;
        std::cout << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D two-phase porous-media flow: finite-volume runs, limit-scheme "
                 "comparisons, mu sweeps, and a-priori-estimate diagnostics"};
    app.require_subcommand(1);

    GlobalOpts g;
    std::vector<double> mus;

    auto* run = app.add_subcommand("run", "run one scheme and write snapshot CSVs");
    add_common(run, g);
    auto* compare =
        app.add_subcommand("compare", "run both schemes and report their gaps");
    add_common(compare, g);
    auto* sweep = app.add_subcommand("sweep", "two-phase runs across a mu list vs limit");
    add_common(sweep, g);
    sweep->add_option("--mus", mus, "decreasing mu list (default 1e-2 1e-4 1e-6 1e-8)");
    auto* diagnose =
        app.add_subcommand("diagnose", "dense run plus estimate functionals");
    add_common(diagnose, g);
    app.add_subcommand("presets", "list builtin presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (run->parsed()) return cmd_run(g);
        if (compare->parsed()) return cmd_compare(g);
        if (sweep->parsed()) return cmd_sweep(g, mus);
        if (diagnose->parsed()) return cmd_diagnose(g);
        return cmd_presets();
    } catch (const porolim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const porolim::ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const porolim::InsufficientDataError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const porolim::StabilityError& e) {
        std::cerr << "numerical failure: " << e.what() << " (cell " << e.cell
                  << ", value " << e.value << ", t = " << e.time << ")\n";
        return kExitNumerical;
    } catch (const porolim::IntegrationError& e) {
        std::cerr << "numerical failure: " << e.what() << " (error " << e.achieved_error
                  << " near s = " << e.location << ")\n";
        return kExitNumerical;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
