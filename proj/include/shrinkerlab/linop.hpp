#pragma once

#include "shrinkerlab/boundary.hpp"
#include "shrinkerlab/derivatives.hpp"
#include "shrinkerlab/grid.hpp"

namespace shrinkerlab {

/// L(u) = Laplacian(u) - xi . Du + u at every node, assembled from the polar
/// derivative stencils (Laplacian = u_rr + u_r/r + u_tt/r^2, xi . Du = r u_r).
/// Interior stencils are exact on r cos(theta); the linearized shrinker
/// operator annihilates the plane through the origin to roundoff.
Field apply_L(const Field& u);
Field apply_L(const Field& u, const RadialStencilTable& table);

/// Solution of the linear Dirichlet problem together with the derived
/// boundary-gradient data.
struct LinearSolution {
    Field u1;
    BoundaryData f;
    double K0 = 0;           // = eps = C^4 norm of f
    double K1_est = 0;       // sup (|Du1| + r |D^2 u1|) / eps over r <= R_max/2
    double growth_ratio = 0; // sup |u1| / (3 K0 r)
};

/// Radial profile of one angular mode against the same stencils and outer
/// closure as the two-dimensional operator: interior rows are the radial
/// 3-point stencils with the discrete angular eigenvalue msq, the outer row
/// is the cone extrapolation f_n = f_{n-1} r_n / r_{n-1}. The assembled
/// two-dimensional field then solves the discrete problem exactly.
ArrayXd solve_linear_mode_discrete(double msq, const SectorGrid& grid, double boundary_value);

/// Radial mode ODE f'' + (1/r - r) f' + (1 - m^2/r^2) f = 0 on [R, R_max]
/// with f(R) given and the cone condition f'(R_max) = f(R_max)/R_max, via a
/// tridiagonal fourth-order compact scheme in ln r. This is the accuracy
/// reference for the mode profiles.
ArrayXd solve_linear_mode(int m, const SectorGrid& grid, double boundary_value);

/// Independent oracle: inward Runge-Kutta integration of the mode ODE from
/// the cone condition at R_max, rescaled to match the boundary value.
ArrayXd shoot_linear_mode(int m, const SectorGrid& grid, double boundary_value,
                          int substeps_per_cell = 4096);

/// u1 = sum_k profile_k(r) sin(kN theta); one decoupled tridiagonal solve
/// per boundary mode.
LinearSolution solve_linear(const BoundaryData& f, GridPtr grid);

/// sup over r <= R_max/2 of (|Du1| + r |D^2 u1|_F) / eps; the Frobenius norm
/// of the Hessian is used. Throws if eps = 0.
double estimate_K1(const LinearSolution& sol);

}  // namespace shrinkerlab
