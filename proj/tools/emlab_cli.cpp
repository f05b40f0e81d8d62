#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "emlab/config.hpp"
#include "emlab/experiments.hpp"
#include "emlab/meanfield.hpp"

namespace {

using namespace emlab;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 0;           // 0: take from config
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--workers", args.workers, "worker thread count (overrides config)");
    cmd->add_option("--seed", args.seed, "master seed (overrides config)")
        ->each([&](const std::string&) { args.seed_set = true; });
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    std::filesystem::create_directories(args.out_dir);
    return (std::filesystem::path(args.out_dir) / name).string();
}

void emit_manifest(const CommonArgs& args, const std::string& subcommand, double wall_seconds,
                   std::uint64_t seed) {
    std::ifstream cfg(args.config_path);
    std::stringstream cfg_text;
    cfg_text << cfg.rdbuf();
    std::string squashed = cfg_text.str();
    for (auto& ch : squashed)
        if (ch == '\n') ch = ' ';
    write_manifest(out_path(args, "manifest.txt"),
                   {{"subcommand", subcommand},
                    {"config_file", args.config_path},
                    {"config", squashed},
                    {"seed", std::to_string(seed)},
                    {"version", "emlab 1.0"},
                    {"wall_seconds", format_double(wall_seconds)}});
}

int run_sweep(const CommonArgs& args) {
    SweepSpec spec = parse_sweep_config(args.config_path);
    if (args.workers > 0) spec.workers = args.workers;
    if (args.seed_set) spec.master_seed = args.seed;
    auto t0 = std::chrono::steady_clock::now();
    SweepTable table = sweep(spec);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_sweep_csv(out_path(args, "sweep.csv"), table);
    emit_manifest(args, "sweep", wall, spec.master_seed);
    std::cout << "wrote " << out_path(args, "sweep.csv") << " (" << table.size() << " rows)\n";
    return 0;
}

int run_meanfield(const CommonArgs& args) {
    MeanFieldRunConfig cfg = parse_meanfield_config(args.config_path);
    auto t0 = std::chrono::steady_clock::now();

    std::ostringstream fp;
    fp << "coupling,delta1_abs,g_plus,g_minus,stability,eig1_re,eig1_im,eig2_re,eig2_im\n";
    std::ostringstream traj;
    traj << "coupling,delta1_abs,t,g_plus,g_minus,diverged\n";
    std::ostringstream thr;
    thr << "coupling,threshold\n";
    for (double j : cfg.coupling_values) {
        thr << format_double(j) << ',' << format_double(stability_threshold(j, cfg.p)) << '\n';
        for (double d1 : cfg.delta1_values) {
            MeanFieldParams params;
            params.coupling = j;
            params.p = cfg.p;
            params.gamma_a = std::abs(d1);
            params.gamma1 = 0.0;
            params.gamma2 = (cfg.p < 1.0)
                                ? std::abs(d1) * cfg.p / (1.0 - cfg.p) + std::abs(d1)
                                : 0.0;
            for (const auto& point : fixed_points(params)) {
                const char* label = point.stability == Stability::Stable     ? "stable"
                                    : point.stability == Stability::Unstable ? "unstable"
                                                                             : "marginal";
                fp << format_double(j) << ',' << format_double(std::abs(d1)) << ','
                   << format_double(point.g_plus) << ',' << format_double(point.g_minus) << ','
                   << label << ',' << format_double(point.eigenvalues[0].real()) << ','
                   << format_double(point.eigenvalues[0].imag()) << ','
                   << format_double(point.eigenvalues[1].real()) << ','
                   << format_double(point.eigenvalues[1].imag()) << '\n';
            }
            RhsFn rhs = [params](double, const std::vector<double>& y) {
                auto [dp, dm] = gpm_rhs(y[0], y[1], params);
                return std::vector<double>{dp, dm};
            };
            Trajectory t = integrate(rhs, {1e-4, -1e-4}, 50.0 / j, cfg.dt / j);
            for (std::size_t k = 0; k < t.times.size(); k += 100)
                traj << format_double(j) << ',' << format_double(std::abs(d1)) << ','
                     << format_double(t.times[k]) << ',' << format_double(t.states[k][0]) << ','
                     << format_double(t.states[k][1]) << ',' << (t.diverged ? 1 : 0) << '\n';
        }
    }
    write_text_atomic(out_path(args, "fixed_points.csv"), fp.str());
    write_text_atomic(out_path(args, "threshold.csv"), thr.str());
    write_text_atomic(out_path(args, "trajectories.csv"), traj.str());
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_manifest(args, "meanfield", wall, 0);
    std::cout << "wrote fixed_points.csv, threshold.csv, trajectories.csv in " << args.out_dir
              << "\n";
    return 0;
}

int run_instability(const CommonArgs& args) {
    InstabilityRunConfig cfg = parse_instability_config(args.config_path);
    std::uint64_t seed = args.seed_set ? args.seed : 1;
    auto t0 = std::chrono::steady_clock::now();
    std::ostringstream os;
    os << "n,realization,slope,intercept,r_squared,d_min,d_max,region_size\n";
    for (int n : cfg.sizes)
        for (int r = 0; r < cfg.realizations; ++r) {
            DisorderSpec disorder{cfg.p, cfg.q1, cfg.q2, NoiseMode::Quenched, seed};
            GrowthFit fit = instability_experiment(n, disorder, cfg.d_max, cfg.form, seed, r);
            os << n << ',' << r << ',' << format_double(fit.slope) << ','
               << format_double(fit.intercept) << ',' << format_double(fit.r_squared) << ','
               << fit.d_min << ',' << fit.d_max << ',' << fit.region_size << '\n';
        }
    write_text_atomic(out_path(args, "instability.csv"), os.str());
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_manifest(args, "instability", wall, seed);
    std::cout << "wrote " << out_path(args, "instability.csv") << "\n";
    return 0;
}

int run_xeb(const CommonArgs& args) {
    FidelitySpec spec = parse_xeb_config(args.config_path);
    if (args.workers > 0) spec.workers = args.workers;
    if (args.seed_set) spec.master_seed = args.seed;
    auto t0 = std::chrono::steady_clock::now();
    FidelityTable table = fidelity_scaling(spec);
    std::ostringstream os;
    os << "n,d,mean_neg_log_fm_per_n,std_log_fm,mean_neg_log_fxeb_per_n,std_log_fxeb,count\n";
    for (const auto& row : table.rows)
        os << row.n << ',' << row.d << ',' << format_double(row.mean_neg_log_fm) << ','
           << format_double(row.std_log_fm) << ',' << format_double(row.mean_neg_log_fxeb) << ','
           << format_double(row.std_log_fxeb) << ',' << row.count << '\n';
    write_text_atomic(out_path(args, "fidelity.csv"), os.str());
    std::ostringstream betas;
    betas << "n,beta_fm,beta_fxeb\n";
    for (std::size_t i = 0; i < spec.sizes.size(); ++i)
        betas << spec.sizes[i] << ',' << format_double(table.beta_fm[i]) << ','
              << format_double(table.beta_fxeb[i]) << '\n';
    write_text_atomic(out_path(args, "betas.csv"), betas.str());
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_manifest(args, "xeb", wall, spec.master_seed);
    std::cout << "wrote fidelity.csv, betas.csv in " << args.out_dir << "\n";
    return 0;
}

int run_collapse(const CommonArgs& args) {
    CollapseRunConfig cfg = parse_collapse_config(args.config_path);
    auto t0 = std::chrono::steady_clock::now();
    SweepTable table = read_sweep_csv(cfg.data_file);
    auto curves = curves_from_table(table);
    auto cells = collapse_scan(curves, cfg.sigma_c_grid, cfg.mu_grid);
    std::ostringstream os;
    os << "sigma_c,mu,quality\n";
    const CollapseScanCell* best = nullptr;
    for (const auto& cell : cells) {
        os << format_double(cell.sigma_c) << ',' << format_double(cell.mu) << ','
           << format_double(cell.quality) << '\n';
        if (!best || cell.quality < best->quality) best = &cell;
    }
    write_text_atomic(out_path(args, "collapse_scan.csv"), os.str());
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_manifest(args, "collapse", wall, 0);
    if (best)
        std::cout << "minimum quality " << best->quality << " at sigma_c=" << best->sigma_c
                  << " mu=" << best->mu << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noisy-random-circuit error-mitigation threshold laboratory"};
    app.require_subcommand(1);

    CommonArgs sweep_args, mf_args, inst_args, xeb_args, col_args;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Disorder sweep of a correlation probe (CSV: n, sigma/qbar, depth, stats)");
    add_common(sweep_cmd, sweep_args);
    auto* mf_cmd = app.add_subcommand(
        "meanfield", "Mean-field fixed points, stability threshold and trajectories");
    add_common(mf_cmd, mf_args);
    auto* inst_cmd = app.add_subcommand(
        "instability", "Quenched-1D sign-resolved growth-rate fits");
    add_common(inst_cmd, inst_args);
    auto* xeb_cmd = app.add_subcommand(
        "xeb", "Mitigated fidelity benchmark statistics vs size and depth");
    add_common(xeb_cmd, xeb_args);
    auto* col_cmd = app.add_subcommand(
        "collapse", "Scaling-collapse quality-score scan over (sigma_c, mu)");
    add_common(col_cmd, col_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep_cmd->parsed()) return run_sweep(sweep_args);
        if (mf_cmd->parsed()) return run_meanfield(mf_args);
        if (inst_cmd->parsed()) return run_instability(inst_args);
        if (xeb_cmd->parsed()) return run_xeb(xeb_args);
        if (col_cmd->parsed()) return run_collapse(col_args);
    } catch (const emlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
