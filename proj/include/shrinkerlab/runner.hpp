#pragma once

#include <optional>

#include "shrinkerlab/config.hpp"
#include "shrinkerlab/io.hpp"

namespace shrinkerlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResolvedBoundary {
    BoundaryData f;       // scaled boundary data
    double eps = 0;       // C^4 norm of f
    double eps_max = 0;   // admissible threshold at the inflated K1
    double K1_est = 0;    // measured on the unit shape (scale invariant)
};

/// Scales the boundary shape: either an absolute amplitude (eps_scale) or a
/// fraction of the admissible threshold measured from a unit-shape linear
/// solve. Rejects inadmissible amplitudes unless forced.
ResolvedBoundary resolve_boundary(const SolverConfig& cfg, GridPtr grid);

struct RunArtifacts {
    GridPtr grid;
    ResolvedBoundary boundary;
    LinearSolution linear;
    std::optional<BarrierSet> barriers;
    std::optional<BarrierResiduals> barrier_res;
    RunResult flow;
    VerificationReport report;
};

GridPtr make_grid(const SolverConfig& cfg);

/// Full solve pipeline: grid, boundary resolution, linear solve, barriers,
/// relaxation to steady state, and the configured verification checks.
RunArtifacts run_pipeline(const SolverConfig& cfg, bool run_checks = true,
                          const std::string& snapshot_dir = "");

void write_artifacts(const std::string& dir, const SolverConfig& cfg, const RunArtifacts& art);

/// One row of an aggregated sweep.
struct SweepRow {
    double value = 0;
    bool ok = false;
    std::string error;
    double eps = 0;
    double residual_inf = 0;
    double radial_gap = 0;   // sup_{r=R} |D_r u - D_r u1|
    double cone_sup = 0;
    double max_E_plus = 0;
    double min_E_minus = 0;
    double steady_probe = 0;  // steady field sampled on the comparison window
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepRow> rows;
    std::vector<double> ratios;  // successive ratios of the parameter-relevant metric
};

/// parameter is one of "eps" (values are fractions of eps_max), "nr", "R_max".
SweepResult run_sweep(const SolverConfig& base, const std::string& parameter,
                      const std::vector<double>& values, int jobs = 1);

void write_sweep_csv(const std::string& path, const SweepResult& sweep);

}  // namespace shrinkerlab
