#include "shrinkerlab/runner.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "shrinkerlab/extend.hpp"

namespace shrinkerlab {

namespace fs = std::filesystem;
using nlohmann::json;

GridPtr make_grid(const SolverConfig& cfg) {
    return SectorGrid::create(cfg.R, cfg.R_max, cfg.nr, cfg.ntheta, cfg.N,
                              parse_spacing(cfg.spacing));
}

ResolvedBoundary resolve_boundary(const SolverConfig& cfg, GridPtr grid) {
    const BoundaryData shape = cfg.shape(1.0);
    ResolvedBoundary rb{BoundaryData::zero(cfg.N), 0.0, std::numeric_limits<double>::infinity(),
                        0.0};
    if (shape.is_zero() || shape.c4_norm() == 0.0) return rb;

    const LinearSolution lin = solve_linear(shape, grid);
    rb.K1_est = lin.K1_est;
    rb.eps_max = admissible_epsilon(kK1SafetyFactor * lin.K1_est, cfg.R0_effective());

    const double eps = cfg.eps_fraction > 0 ? cfg.eps_fraction * rb.eps_max
                                            : cfg.eps_scale * shape.c4_norm();
    if (eps > rb.eps_max && !cfg.force)
        throw ConfigError("boundary amplitude inadmissible: eps = " + format_g17(eps) +
                          " exceeds eps_max = " + format_g17(rb.eps_max) +
                          " (rerun with --force to override)");
    rb.eps = eps;
    rb.f = cfg.shape(eps / shape.c4_norm());
    return rb;
}

RunArtifacts run_pipeline(const SolverConfig& cfg, bool run_checks,
                          const std::string& snapshot_dir) {
    cfg.validate();
    RunArtifacts art;
    art.grid = make_grid(cfg);
    art.boundary = resolve_boundary(cfg, art.grid);
    art.linear = solve_linear(art.boundary.f, art.grid);

    if (cfg.barriers_on) {
        art.barriers = make_barriers(art.linear, cfg.R0_effective());
        art.barrier_res = barrier_residual_check(*art.barriers);
    }

    SolverOptions opt;
    opt.c_cfl = cfg.c_cfl;
    opt.tol_steady = cfg.tol_steady;
    opt.tau_max = cfg.tau_max;
    FlowSolver solver(art.grid, art.boundary.f, opt, art.barriers);

    Field u0 = art.barriers ? make_initial(art.linear, *art.barriers, InitialMode::Linear)
                            : [&] {
                                  Field u(art.grid, true);
                                  u.v = art.linear.u1.v;
                                  return u;
                              }();

    FlowSolver::SnapshotFn on_snapshot;
    if (!snapshot_dir.empty()) {
        fs::create_directories(snapshot_dir);
        on_snapshot = [&, snapshot_dir](const FlowState& st) {
            char name[64];
            std::snprintf(name, sizeof(name), "/snapshot_%08ld.csv", st.step_count);
            write_field_csv(snapshot_dir + name, st.u);
        };
    }
    art.flow = solver.run_to_steady(std::move(u0), cfg.snapshot_every, on_snapshot);

    art.report.provenance = cfg.to_json_text();
    if (run_checks) {
        for (const std::string& name : cfg.checks) {
            if (name == "sandwich") {
                if (art.barriers)
                    art.report.add(check_sandwich(art.flow.steady, *art.barriers));
            } else if (name == "max_gradient_boundary") {
                art.report.add(check_max_gradient_boundary(art.flow.steady));
            } else if (name == "cone_decay") {
                art.report.add(cone_decay(art.flow.steady));
            } else if (name == "mcf_consistency") {
                art.report.add(mcf_consistency(art.flow.steady));
            } else if (name == "symmetry_deviation") {
                art.report.add(symmetry_deviation(art.flow.steady));
            } else if (name == "uniqueness") {
                if (art.barriers)
                    art.report.add(uniqueness_experiment(solver, art.linear, *art.barriers));
            } else if (name == "uniqueness_barrier") {
                ReportEntry e;
                if (cfg.R > std::sqrt(3.0) / 2.0) {
                    const double eta = uniqueness_eta_surrogate(art.flow.steady);
                    if (1.0 + 4.0 * eta / std::sqrt(3.0) < 1.12) {
                        e = uniqueness_barrier(1.12, eta, cfg.R, 10000);
                    } else {
                        e = ReportEntry{"uniqueness_barrier", eta, 0.0, false, false,
                                        "eta too large for the alpha window"};
                    }
                } else {
                    e = ReportEntry{"uniqueness_barrier", 0.0, 0.0, true, true,
                                    "unverified by this check: analyzed only for R > sqrt(3)/2"};
                }
                art.report.add(e);
            } else {
                throw ConfigError("unknown check '" + name + "'");
            }
        }
        if (art.barrier_res) {
            ReportEntry e{"barrier_certificate",
                          std::max(art.barrier_res->max_E_plus, -art.barrier_res->min_E_minus),
                          art.barrier_res->tol};
            e.pass = art.barrier_res->pass;
            art.report.add(e);
        }
    }
    return art;
}

void write_artifacts(const std::string& dir, const SolverConfig& cfg, const RunArtifacts& art) {
    fs::create_directories(dir);
    cfg.save(dir + "/config.json");

    const long n = long(art.flow.history.size());
    const long stride = std::max<long>(1, n / 5000 + 1);
    write_diagnostics_csv(dir + "/diagnostics.csv", art.flow.history, stride);
    write_field_csv(dir + "/u_final.csv", art.flow.steady);
    if (art.barriers && art.barrier_res)
        write_barrier_certificate(dir + "/barrier_certificate.json", *art.barriers,
                                  *art.barrier_res);
    write_report(dir + "/verification_report.json", art.report);

    json j;
    j["eps"] = art.boundary.eps;
    j["eps_max"] = art.boundary.eps_max;
    j["K0"] = art.linear.K0;
    j["K1_est"] = art.linear.K1_est;
    j["growth_ratio"] = art.linear.growth_ratio;
    j["converged"] = art.flow.converged;
    j["final_residual"] = art.flow.final_residual;
    j["steps"] = art.flow.steps;
    j["tau_final"] = art.flow.history.empty() ? 0.0 : art.flow.history.back().tau;
    j["initial_compat_sup"] = art.flow.initial_compat_sup;
    std::ofstream out(dir + "/run_summary.json");
    out << j.dump(2) << "\n";
}

namespace {

/// Steady-field probe at a fixed physical point, stable across grid changes.
double steady_probe_value(const RunArtifacts& art) {
    const FieldInterpolator interp(art.flow.steady);
    const double r = std::min(2.0 * art.grid->R() + 1.0, 0.25 * art.grid->R_max());
    const double th = 0.5 * 3.14159265358979323846 / art.grid->N();
    return interp.eval(r, th);
}

SolverConfig config_for_value(const SolverConfig& base, const std::string& parameter, double v) {
    SolverConfig c = base;
    if (parameter == "eps") {
        c.eps_fraction = v;
    } else if (parameter == "nr") {
        const int nr2 = int(std::lround(v));
        c.ntheta = int(std::lround(double(base.ntheta - 1) * (nr2 - 1) / (base.nr - 1))) + 1;
        c.nr = nr2;
    } else if (parameter == "R_max") {
        const double ratio =
            parse_spacing(base.spacing) == RadialSpacing::LogGraded
                ? std::log(v / base.R) / std::log(base.R_max / base.R)
                : (v - base.R) / (base.R_max - base.R);
        c.nr = int(std::lround((base.nr - 1) * ratio)) + 1;
        c.R_max = v;
    } else {
        throw ConfigError("unknown sweep parameter '" + parameter + "'");
    }
    return c;
}

}  // namespace

SweepResult run_sweep(const SolverConfig& base, const std::string& parameter,
                      const std::vector<double>& values, int jobs) {
    if (values.size() < 3) throw ConfigError("sweep needs at least 3 values");
    SweepResult out;
    out.parameter = parameter;
    out.rows.resize(values.size());

    auto run_one = [&](size_t idx) {
        SweepRow& row = out.rows[idx];
        row.value = values[idx];
        try {
            const SolverConfig cfg = config_for_value(base, parameter, values[idx]);
            const RunArtifacts art = run_pipeline(cfg, /*run_checks=*/false);
            row.ok = true;
            row.eps = art.boundary.eps;
            row.residual_inf = art.flow.final_residual;
            row.radial_gap = radial_gap_value(art.flow.steady, art.linear);
            row.cone_sup = cone_decay_value(art.flow.steady);
            if (art.barrier_res) {
                row.max_E_plus = art.barrier_res->max_E_plus;
                row.min_E_minus = art.barrier_res->min_E_minus;
            }
            row.steady_probe = steady_probe_value(art);
        } catch (const std::exception& ex) {
            row.ok = false;
            row.error = ex.what();
        }
    };

    if (jobs <= 1) {
        for (size_t i = 0; i < values.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& th : pool) th.join();
    }

    if (parameter == "eps") {
        for (size_t i = 0; i + 1 < out.rows.size(); ++i)
            if (out.rows[i].ok && out.rows[i + 1].ok && out.rows[i + 1].radial_gap > 0)
                out.ratios.push_back(out.rows[i].radial_gap / out.rows[i + 1].radial_gap);
    } else {
        for (size_t i = 0; i + 1 < out.rows.size(); ++i)
            if (out.rows[i].ok && out.rows[i + 1].ok)
                out.ratios.push_back(std::abs(out.rows[i].steady_probe -
                                              out.rows[i + 1].steady_probe));
        if (parameter == "nr") {
            std::vector<double> diffs = out.ratios;
            out.ratios.clear();
            for (size_t i = 0; i + 1 < diffs.size(); ++i)
                if (diffs[i + 1] != 0) out.ratios.push_back(diffs[i] / diffs[i + 1]);
        }
    }
    return out;
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "parameter,value,ok,error,eps,residual_inf,radial_gap,cone_sup,max_E_plus,"
           "min_E_minus,steady_probe\n";
    for (const auto& r : sweep.rows) {
        out << sweep.parameter << ',' << format_g17(r.value) << ',' << (r.ok ? 1 : 0) << ",\""
            << r.error << "\"," << format_g17(r.eps) << ',' << format_g17(r.residual_inf) << ','
            << format_g17(r.radial_gap) << ',' << format_g17(r.cone_sup) << ','
            << format_g17(r.max_E_plus) << ',' << format_g17(r.min_E_minus) << ','
            << format_g17(r.steady_probe) << '\n';
    }
    out << "# successive_metric";
    for (double v : sweep.ratios) out << ',' << format_g17(v);
    out << "\n";
}

}  // namespace shrinkerlab
