#pragma once

#include <array>
#include <span>

#include "shrinkerlab/grid.hpp"

namespace shrinkerlab {

/// Finite-difference weights on arbitrary nodes (Fornberg recursion).
/// Returns weights[d][k] so that f^{(d)}(z) ~= sum_k weights[d][k] f(x_k),
/// for derivative orders d = 0..max_order.
Eigen::MatrixXd fornberg_weights(double z, std::span<const double> x, int max_order);

/// Precomputed radial derivative stencils for one grid.
///
/// Interior rows use 3-point Lagrange weights on (r_{i-1}, r_i, r_{i+1});
/// they are exact on quadratics in r for any node distribution, which keeps
/// fields linear in r (the plane r cos(theta), the cone) in the stencil
/// null space exactly. Edges use one-sided 3-point (first) and 4-point
/// (second derivative) weights of the same order.
class RadialStencilTable {
public:
    explicit RadialStencilTable(const SectorGrid& g);

    // interior i = 1..nr-2
    ArrayXd d1m, d1c, d1p;
    ArrayXd d2m, d2c, d2p;
    // one-sided rows: weights on nodes (0,1,2) / (0,1,2,3) and mirrored
    std::array<double, 3> first_in{}, first_out{};
    std::array<double, 4> second_in{}, second_out{};
};

/// Angular stencil scalings. Centered differences are normalized to be exact
/// on frequency-one trigonometric modes: the scaled second difference maps
/// sin(m theta) to -msq_discrete(m) sin(m theta) exactly on uniform nodes.
struct AngularStencil {
    double dtheta;
    double inv_two_sin;   // first derivative: (u_{j+1}-u_{j-1}) * inv_two_sin
    double inv_two_vers;  // second derivative: (u_{j+1}-2u_j+u_{j-1}) * inv_two_vers

    explicit AngularStencil(double dth);
};

/// Eigenvalue of the scaled angular second-difference on sin(m theta).
double discrete_angular_eigenvalue_sq(int m, double dtheta);

/// All polar derivatives of a field, at every node. One-sided stencils at
/// radial edges; angular edges use odd-reflection ghosts for symmetric
/// fields and polynomial one-sided stencils otherwise. On grids touching
/// r = 0 the row at the origin is zero-filled.
struct PolarDerivs {
    ArrayXXd ur, urr, ut, utt, urt;

    void resize(int nr, int nt) {
        ur.resize(nr, nt);
        urr.resize(nr, nt);
        ut.resize(nr, nt);
        utt.resize(nr, nt);
        urt.resize(nr, nt);
    }
};

void compute_polar_derivs(const Field& u, const RadialStencilTable& table, PolarDerivs& out);
PolarDerivs compute_polar_derivs(const Field& u);

/// Cartesian first and second derivatives assembled from the polar ones.
struct GradHess {
    ArrayXXd d1, d2;        // Du
    ArrayXXd d11, d12, d22;  // D^2 u
};

GradHess gradient_hessian(const Field& u);

/// |Du|^2 at every node, assembled in the polar frame.
ArrayXXd grad_norm_sq(const Field& u, const PolarDerivs& d);

}  // namespace shrinkerlab
