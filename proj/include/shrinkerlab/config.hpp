#pragma once

#include <map>
#include <string>
#include <vector>

#include "shrinkerlab/boundary.hpp"
#include "shrinkerlab/grid.hpp"

namespace shrinkerlab {

/// Run configuration. Serialized as JSON; flag overrides win over the file.
struct SolverConfig {
    double R = 1.0;
    double R_max = 16.0;
    int nr = 257;
    int ntheta = 65;
    int N = 5;
    std::string spacing = "log";

    /// Boundary shape: coefficients a_k of sum a_k sin(kN theta), odd k.
    std::map<int, double> boundary = {{1, 1.0}};

    /// Absolute amplitude multiplier on the shape (eps = eps_scale * ||shape||_C4).
    /// When eps_fraction > 0 it wins: eps = eps_fraction * eps_max with
    /// eps_max computed from the measured derivative bound at run time.
    double eps_scale = 0.0;
    double eps_fraction = 0.5;

    double R0 = 0.0;  // 0 = use R
    double c_cfl = 0.4;
    double tol_steady = 1e-8;
    double tau_max = 30.0;
    long snapshot_every = 50000;
    std::string output_dir = "out";
    bool barriers_on = true;
    bool force = false;
    int jobs = 1;
    std::vector<std::string> checks = {"sandwich", "max_gradient_boundary", "cone_decay",
                                       "mcf_consistency", "symmetry_deviation"};
    unsigned seed = 12345;

    double R0_effective() const { return R0 > 0 ? R0 : R; }

    void validate() const;
    BoundaryData shape(double amplitude) const;

    std::string to_json_text() const;
    static SolverConfig from_json_text(const std::string& text);
    static SolverConfig load(const std::string& path);
    void save(const std::string& path) const;
};

}  // namespace shrinkerlab
