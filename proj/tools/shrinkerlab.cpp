// Command line front end: solve, verify, spectrum, sweep.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "shrinkerlab/runner.hpp"
#include "shrinkerlab/spectral.hpp"

namespace sl = shrinkerlab;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    int jobs = 0;
    bool force = false;
    long snapshot_every = -1;
};

void add_common(CLI::App* cmd, CommonFlags& fl) {
    cmd->add_option("--config", fl.config_path, "JSON config file");
    cmd->add_option("--out", fl.out_dir, "output directory");
    cmd->add_option("--jobs", fl.jobs, "concurrent runs for sweeps");
    cmd->add_flag("--force", fl.force, "run even with an inadmissible boundary amplitude");
    cmd->add_option("--snapshot-every", fl.snapshot_every, "field snapshot cadence in steps");
}

sl::SolverConfig load_config(const CommonFlags& fl) {
    sl::SolverConfig cfg;
    if (!fl.config_path.empty()) cfg = sl::SolverConfig::load(fl.config_path);
    if (!fl.out_dir.empty()) cfg.output_dir = fl.out_dir;
    if (const char* env = std::getenv("SHRINKERLAB_OUT")) cfg.output_dir = env;
    if (fl.jobs > 0) cfg.jobs = fl.jobs;
    if (fl.force) cfg.force = true;
    if (fl.snapshot_every >= 0) cfg.snapshot_every = fl.snapshot_every;
    return cfg;
}

int run_solve(const sl::SolverConfig& cfg, bool verify_exit_code) {
    const sl::RunArtifacts art = sl::run_pipeline(cfg, true, cfg.output_dir + "/snapshots");
    sl::write_artifacts(cfg.output_dir, cfg, art);
    std::cout << "steady: converged=" << (art.flow.converged ? "yes" : "no")
              << " residual=" << sl::format_g17(art.flow.final_residual)
              << " steps=" << art.flow.steps << " eps=" << sl::format_g17(art.boundary.eps)
              << "\n";
    for (const auto& e : art.report.entries)
        std::cout << (e.vacuous ? "  [vacuous] " : (e.pass ? "  [pass] " : "  [FAIL] ")) << e.name
                  << " value=" << sl::format_g17(e.value)
                  << " threshold=" << sl::format_g17(e.threshold) << "\n";
    if (!art.flow.converged) {
        std::cerr << "did not reach the steady tolerance before tau_max; final residual "
                  << sl::format_g17(art.flow.final_residual) << "\n";
        return 3;
    }
    if (art.barrier_res && !art.barrier_res->pass) {
        std::cerr << "barrier certificate failed\n";
        return 4;
    }
    if (verify_exit_code && !art.report.all_pass()) return 1;
    return 0;
}

int run_spectrum(int N, int k_max, int l_max, const std::string& out_dir) {
    std::cout << "k,l,lambda\n";
    for (int k = 1; k <= k_max; ++k)
        for (int l = 0; l <= l_max; ++l)
            std::cout << k << ',' << l << ',' << sl::format_g17(sl::eigenvalue(k, l, N)) << "\n";
    for (int k = 1; k <= k_max; ++k) {
        const Eigen::MatrixXd fam = sl::laguerre_family(k, l_max, N);
        std::cout << "# P_{k," << k << ",l} coefficients (ascending powers of rho)\n";
        for (int l = 0; l <= l_max; ++l) {
            std::cout << k << ',' << l;
            for (int a = 0; a <= l; ++a) std::cout << ',' << sl::format_g17(fam(a, l));
            std::cout << "\n";
        }
        const Eigen::MatrixXd gram = sl::laguerre_gram_normalized(k, l_max, N);
        std::cout << "# normalized Gram matrix, k=" << k << "\n";
        for (int a = 0; a <= l_max; ++a) {
            for (int b = 0; b <= l_max; ++b)
                std::cout << (b ? "," : "") << sl::format_g17(gram(a, b));
            std::cout << "\n";
        }
    }
    (void)out_dir;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-shrinker Dirichlet solver and verification lab"};
    app.require_subcommand(1);

    CommonFlags fl_solve, fl_verify, fl_sweep;
    auto* c_solve = app.add_subcommand("solve", "relax the flow to a steady graph");
    add_common(c_solve, fl_solve);
    auto* c_verify = app.add_subcommand("verify", "solve and run all checks; exit 0 iff they pass");
    add_common(c_verify, fl_verify);

    int sp_N = 5, sp_kmax = 2, sp_lmax = 2;
    auto* c_spec = app.add_subcommand("spectrum", "print eigenvalue tables and Gram matrices");
    c_spec->add_option("--N", sp_N, "symmetry order");
    c_spec->add_option("--kmax", sp_kmax, "largest angular index");
    c_spec->add_option("--lmax", sp_lmax, "largest polynomial degree");

    auto* c_sweep = app.add_subcommand("sweep", "parameter sweep with aggregated diagnostics");
    add_common(c_sweep, fl_sweep);
    std::string sweep_param;
    std::vector<double> sweep_values;
    c_sweep->add_option("--param", sweep_param, "eps | nr | R_max")->required();
    c_sweep->add_option("--values", sweep_values, "sweep values")->required()->expected(-3);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_solve->parsed()) return run_solve(load_config(fl_solve), false);
        if (c_verify->parsed()) {
            sl::SolverConfig cfg = load_config(fl_verify);
            bool has_uniqueness = false;
            for (const auto& c : cfg.checks) has_uniqueness |= (c == "uniqueness");
            if (!has_uniqueness) cfg.checks.push_back("uniqueness_barrier");
            return run_solve(cfg, true);
        }
        if (c_spec->parsed()) return run_spectrum(sp_N, sp_kmax, sp_lmax, "");
        if (c_sweep->parsed()) {
            sl::SolverConfig cfg = load_config(fl_sweep);
            const sl::SweepResult sw = sl::run_sweep(cfg, sweep_param, sweep_values, cfg.jobs);
            std::filesystem::create_directories(cfg.output_dir);
            sl::write_sweep_csv(cfg.output_dir + "/sweep_" + sweep_param + ".csv", sw);
            for (const auto& row : sw.rows)
                if (!row.ok) std::cerr << "value " << row.value << " failed: " << row.error << "\n";
            std::cout << "sweep written to " << cfg.output_dir << "/sweep_" << sweep_param
                      << ".csv\n";
            return 0;
        }
    } catch (const sl::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
