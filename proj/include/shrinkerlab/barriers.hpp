#pragma once

#include "shrinkerlab/linop.hpp"

namespace shrinkerlab {

/// Constants of the sub/supersolution pair u_pm = u1 -+/+ K1^3 eps^3 k (r - R^2/r).
struct BarrierParams {
    double R0 = 1;       // reference inner radius, R >= R0 > 1/sqrt(2)
    double k = 0;        // 2 / (2 R0^2 - 1)
    double K1 = 0;       // inflated derivative bound fed to the barrier
    double eps = 0;      // C^4 norm of the boundary data
    double C1 = 0;       // K1 * eps
    double A = 0;        // K1^3 eps^3 k, the barrier amplitude
    double eps_max = 0;  // (1/K1) sqrt((2 R0^2 - 1)/124)
    double eta = 0;      // eps^2 k C1^2, must stay <= 1
    double K2 = 0;       // sup of |u|/r + |Du| + r|D^2 u| over both barriers
};

struct BarrierSet {
    Field u_minus, u_plus;
    BarrierParams params;
};

/// Largest admissible C^4 norm of the boundary data for given derivative
/// bound and reference radius. Degenerates as R0 -> 1/sqrt(2) where the
/// drift term loses its sign.
double admissible_epsilon(double K1, double R0);

/// Safety factor applied to the measured K1 before it enters the barrier
/// constants; the measured supremum is a grid estimate, not a proof.
inline constexpr double kK1SafetyFactor = 1.25;

/// Builds the pair u1 +- A (r - R^2/r). Both rows at r = R equal the
/// boundary data exactly (the bracket vanishes there). Rejects eps > eps_max.
BarrierSet make_barriers(const LinearSolution& sol, double R0);

struct BarrierResiduals {
    double max_E_plus = 0;   // supersolution certificate wants <= tol
    double min_E_minus = 0;  // subsolution certificate wants >= -tol
    double tol = 0;          // 10 h^2 (1 + K2)
    bool pass = false;
};

/// Evaluates the full quasilinear operator on both barriers over interior
/// nodes with r <= R_max/2 and checks the sign conditions against the
/// discretization tolerance.
BarrierResiduals barrier_residual_check(const BarrierSet& bs);

/// sup over both barriers, r <= R_max/2, of |u|/r + |Du| + r |D^2 u|_F.
double bound_K2(const BarrierSet& bs);

}  // namespace shrinkerlab
