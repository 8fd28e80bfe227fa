#include "shrinkerlab/barriers.hpp"

#include <cmath>
#include <limits>

#include "shrinkerlab/flow.hpp"

namespace shrinkerlab {

double admissible_epsilon(double K1, double R0) {
    if (!(K1 > 0)) throw std::invalid_argument("K1 must be positive");
    if (!(R0 > 1.0 / std::sqrt(2.0)))
        throw std::invalid_argument("barrier threshold degenerates for R0 <= 1/sqrt(2)");
    return (1.0 / K1) * std::sqrt((2.0 * R0 * R0 - 1.0) / 124.0);
}

BarrierSet make_barriers(const LinearSolution& sol, double R0) {
    const GridPtr grid = sol.u1.grid;
    if (!(R0 > 1.0 / std::sqrt(2.0)) || R0 > grid->R() + 1e-12)
        throw std::invalid_argument("need R >= R0 > 1/sqrt(2)");

    BarrierParams p;
    p.R0 = R0;
    p.k = 2.0 / (2.0 * R0 * R0 - 1.0);
    p.K1 = kK1SafetyFactor * sol.K1_est;
    p.eps = sol.K0;
    p.eps_max = p.K1 > 0 ? admissible_epsilon(p.K1, R0) : std::numeric_limits<double>::infinity();
    if (p.eps > p.eps_max)
        throw std::invalid_argument("boundary data too large for the barrier construction: eps = " +
                                    std::to_string(p.eps) + " > eps_max = " +
                                    std::to_string(p.eps_max));
    p.C1 = p.K1 * p.eps;
    p.A = p.K1 * p.K1 * p.K1 * p.eps * p.eps * p.eps * p.k;
    p.eta = p.eps * p.eps * p.k * p.C1 * p.C1;

    BarrierSet bs{Field(grid), Field(grid), p};
    const auto& r = grid->r();
    const double R = grid->R();
    ArrayXd bracket(grid->nr());
    for (int i = 0; i < grid->nr(); ++i) bracket[i] = r[i] - R * R / r[i];
    bracket[0] = 0.0;  // exact equality with the boundary data on r = R
    for (int j = 0; j < grid->ntheta(); ++j) {
        bs.u_plus.v.col(j) = sol.u1.v.col(j) + p.A * bracket;
        bs.u_minus.v.col(j) = sol.u1.v.col(j) - p.A * bracket;
    }
    bs.params.K2 = bound_K2(bs);
    return bs;
}

BarrierResiduals barrier_residual_check(const BarrierSet& bs) {
    const GridPtr grid = bs.u_plus.grid;
    const Field e_plus = apply_E(bs.u_plus);
    const Field e_minus = apply_E(bs.u_minus);
    const auto& r = grid->r();
    const double cap = 0.5 * grid->R_max();

    BarrierResiduals out;
    out.max_E_plus = -std::numeric_limits<double>::infinity();
    out.min_E_minus = std::numeric_limits<double>::infinity();
    for (int i = 1; i + 1 < grid->nr(); ++i) {
        if (r[i] > cap) break;
        for (int j = 1; j + 1 < grid->ntheta(); ++j) {
            out.max_E_plus = std::max(out.max_E_plus, e_plus.v(i, j));
            out.min_E_minus = std::min(out.min_E_minus, e_minus.v(i, j));
        }
    }
    const double h = grid->mesh_parameter();
    out.tol = 10.0 * h * h * (1.0 + bs.params.K2);
    out.pass = out.max_E_plus <= out.tol && out.min_E_minus >= -out.tol;
    return out;
}

double bound_K2(const BarrierSet& bs) {
    const auto& r = bs.u_plus.grid->r();
    const double cap = 0.5 * bs.u_plus.grid->R_max();
    double sup = 0;
    for (const Field* u : {&bs.u_plus, &bs.u_minus}) {
        const GradHess g = gradient_hessian(*u);
        for (int i = 0; i < u->nr(); ++i) {
            if (r[i] > cap) break;
            for (int j = 0; j < u->ntheta(); ++j) {
                const double grad = std::hypot(g.d1(i, j), g.d2(i, j));
                const double hess = std::sqrt(g.d11(i, j) * g.d11(i, j) +
                                              2.0 * g.d12(i, j) * g.d12(i, j) +
                                              g.d22(i, j) * g.d22(i, j));
                sup = std::max(sup, std::abs(u->v(i, j)) / r[i] + grad + r[i] * hess);
            }
        }
    }
    return sup;
}

}  // namespace shrinkerlab
