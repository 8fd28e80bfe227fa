#pragma once

#include <string>
#include <vector>

#include "shrinkerlab/flow.hpp"

namespace shrinkerlab {

struct ReportEntry {
    std::string name;
    double value = 0;
    double threshold = 0;
    bool pass = false;
    bool vacuous = false;  // check did not apply (degenerate input)
    std::string note;
};

struct VerificationReport {
    std::vector<ReportEntry> entries;
    std::string provenance;

    void add(ReportEntry e) { entries.push_back(std::move(e)); }
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.vacuous && !e.pass) return false;
        return true;
    }
};

/// Largest violation of u_minus <= u <= u_plus; threshold 10 h^2.
ReportEntry check_sandwich(const Field& u, const BarrierSet& bs);

/// Radius at which |Du| attains its maximum; passes when it lies within one
/// radial cell of the boundary circle. Vacuous for |Du| identically zero.
ReportEntry check_max_gradient_boundary(const Field& u);

/// sup of |H| r over e(R+1) <= r <= R_max/2 (graph mean curvature H).
/// The refinement-stability ratio is produced by drivers running two
/// resolutions; a single evaluation reports the value and passes on
/// finiteness.
ReportEntry cone_decay(const Field& u);
double cone_decay_value(const Field& u);

/// G = sup over the boundary circle of |D_r u - D_r u1|.
ReportEntry radial_derivative_gap(const Field& u, const LinearSolution& sol);
double radial_gap_value(const Field& u, const LinearSolution& sol);

/// Two admissible initial states relaxed to steady; reports the sup-norm
/// difference of the final fields against max(10 tol_steady, 10 h^2).
ReportEntry uniqueness_experiment(const FlowSolver& solver, const LinearSolution& sol,
                                  const BarrierSet& bs);

/// Sign conditions of the radial comparison function psi(r) = r^a - (3/4) r^{a-2}
/// used by the uniqueness argument: psi > 0 and (1-a) r + 2 eta <= 0 on
/// r >= R. Requires R > sqrt(3)/2 and 1 + 4 eta/sqrt(3) < a < 9/8.
ReportEntry uniqueness_barrier(double alpha, double eta, double R, int r_samples);

/// Surrogate for the uniqueness-path coefficient size: 6 |Du|_inf |D^2 u|_inf.
double uniqueness_eta_surrogate(const Field& u);

/// Consistency with the unrescaled flow: v(x,t) = sqrt(2(1-t)) u(x/sqrt(2(1-t)))
/// must satisfy d_t v = g^{ij}(Dv) D_ij v when u is steady. The left side
/// comes from the chain rule, the right side from small Cartesian stencils on
/// the interpolated field.
ReportEntry mcf_consistency(const Field& u);

/// Deviation of the extended field from its defining symmetries at mirrored
/// sample points; zero by construction unless the extension is corrupted.
ReportEntry symmetry_deviation(const Field& u, bool corrupt_extension_for_test = false);

}  // namespace shrinkerlab
