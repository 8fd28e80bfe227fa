#include "shrinkerlab/linop.hpp"

#include <cmath>
#include <vector>

namespace shrinkerlab {

namespace {

/// Thomas solve for a tridiagonal system given by diagonals (a, b, c):
/// a[i] x[i-1] + b[i] x[i] + c[i] x[i+1] = d[i].
ArrayXd thomas_solve(ArrayXd a, ArrayXd b, ArrayXd c, ArrayXd d) {
    const int n = int(b.size());
    for (int i = 1; i < n; ++i) {
        if (b[i - 1] == 0.0) throw std::runtime_error("singular tridiagonal system");
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        d[i] -= m * d[i - 1];
    }
    if (b[n - 1] == 0.0) throw std::runtime_error("singular tridiagonal system");
    ArrayXd x(n);
    x[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
    return x;
}

struct ModeRows {
    ArrayXd a, b, c, d;
};

/// Interior rows of the radial mode problem with a given angular multiplier:
/// u_rr + (1/r - r) u_r + (1 - msq/r^2) u = 0 against the shared stencils.
ModeRows interior_rows(const SectorGrid& grid, const RadialStencilTable& tbl, double msq) {
    const int n = grid.nr();
    const auto& r = grid.r();
    ModeRows rows{ArrayXd::Zero(n), ArrayXd::Zero(n), ArrayXd::Zero(n), ArrayXd::Zero(n)};
    for (int i = 1; i + 1 < n; ++i) {
        const double drift = 1.0 / r[i] - r[i];
        rows.a[i] = tbl.d2m[i] + drift * tbl.d1m[i];
        rows.b[i] = tbl.d2c[i] + drift * tbl.d1c[i] + (1.0 - msq / (r[i] * r[i]));
        rows.c[i] = tbl.d2p[i] + drift * tbl.d1p[i];
    }
    return rows;
}

}  // namespace

Field apply_L(const Field& u, const RadialStencilTable& tbl) {
    PolarDerivs d;
    compute_polar_derivs(u, tbl, d);
    Field out(u.grid, u.symmetric);
    const auto& r = u.grid->r();
    for (int i = 0; i < u.nr(); ++i) {
        if (r[i] <= 0.0) {
            out.v.row(i) = u.v.row(i);  // L(u)(0) = u(0) for symmetry-class fields
            continue;
        }
        const double inv_r = 1.0 / r[i];
        out.v.row(i) = d.urr.row(i) + inv_r * d.ur.row(i) + inv_r * inv_r * d.utt.row(i) -
                       r[i] * d.ur.row(i) + u.v.row(i);
    }
    return out;
}

Field apply_L(const Field& u) {
    RadialStencilTable tbl(*u.grid);
    return apply_L(u, tbl);
}

ArrayXd solve_linear_mode_discrete(double msq, const SectorGrid& grid, double boundary_value) {
    const int n = grid.nr();
    const auto& r = grid.r();
    RadialStencilTable tbl(grid);
    ModeRows rows = interior_rows(grid, tbl, msq);
    rows.b[0] = 1.0;
    rows.d[0] = boundary_value;
    // outer closure identical to the flow step: f_n = f_{n-1} r_n / r_{n-1}
    rows.a[n - 1] = -r[n - 1] / r[n - 2];
    rows.b[n - 1] = 1.0;
    return thomas_solve(rows.a, rows.b, rows.c, rows.d);
}

namespace {

/// Second-order solve of the mode ODE with the continuum cone condition
/// f'(R_max) = f(R_max)/R_max imposed through a one-sided 4-point stencil
/// (reduced to tridiagonal form against the rows above it).
ArrayXd mode_ode_second_order(int m, const SectorGrid& grid) {
    const int n = grid.nr();
    const auto& r = grid.r();
    RadialStencilTable tbl(grid);
    ModeRows rows = interior_rows(grid, tbl, double(m) * m);
    rows.b[0] = 1.0;
    rows.d[0] = 1.0;  // unit boundary value; caller rescales

    const double xs[4] = {r[n - 4], r[n - 3], r[n - 2], r[n - 1]};
    auto w = fornberg_weights(r[n - 1], std::span<const double>(xs, 4), 1);
    double row[4];
    for (int k = 0; k < 4; ++k) row[k] = w(1, k);
    row[3] -= 1.0 / r[n - 1];
    double rhs = 0.0;
    {  // eliminate column n-4 with interior row n-3, then column n-3 with row n-2
        const double m1 = row[0] / rows.a[n - 3];
        row[0] = 0.0;
        row[1] -= m1 * rows.b[n - 3];
        row[2] -= m1 * rows.c[n - 3];
        rhs -= m1 * rows.d[n - 3];
        const double m2 = row[1] / rows.a[n - 2];
        row[1] = 0.0;
        row[2] -= m2 * rows.b[n - 2];
        row[3] -= m2 * rows.c[n - 2];
        rhs -= m2 * rows.d[n - 2];
    }
    rows.a[n - 1] = row[2];
    rows.b[n - 1] = row[3];
    rows.d[n - 1] = rhs;
    return thomas_solve(rows.a, rows.b, rows.c, rows.d);
}

GridPtr refine_radially(const SectorGrid& grid) {
    if (grid.spacing() == RadialSpacing::LogGraded)
        return SectorGrid::create(grid.R(), grid.R_max(), 2 * grid.nr() - 1, grid.ntheta(),
                                  grid.N(), grid.spacing());
    return SectorGrid::create_spectral(grid.R(), grid.R_max(), 2 * grid.nr() - 1, grid.ntheta(),
                                       grid.N());
}

}  // namespace

ArrayXd solve_linear_mode(int m, const SectorGrid& grid, double boundary_value) {
    if (m < 1) throw std::invalid_argument("angular frequency must be positive");
    if (boundary_value == 0.0) return ArrayXd::Zero(grid.nr());
    // One Richardson level on the nested radial grid cancels the h^2 term of
    // the tridiagonal scheme; the halved-spacing nodes contain the coarse ones.
    const ArrayXd coarse = mode_ode_second_order(m, grid);
    const GridPtr fine_grid = refine_radially(grid);
    const ArrayXd fine = mode_ode_second_order(m, *fine_grid);
    ArrayXd out(grid.nr());
    for (int i = 0; i < grid.nr(); ++i) out[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
    return out * boundary_value;
}

ArrayXd shoot_linear_mode(int m, const SectorGrid& grid, double boundary_value,
                          int substeps_per_cell) {
    const int n = grid.nr();
    const auto& r = grid.r();
    const double msq = double(m) * m;

    // inward integration in s = ln r; the Gaussian-growing branch decays in
    // this direction, so the cone-normalized state stays well conditioned
    auto rhs = [msq](double s, double f, double fs, double& df, double& dfs) {
        const double rr = std::exp(2.0 * s);
        df = fs;
        dfs = rr * fs + (msq - rr) * f;
    };

    ArrayXd out(n);
    double f = r[n - 1];
    double fs = f;  // f_s = r f_r and the cone condition gives f_r = f / r
    out[n - 1] = f;
    for (int i = n - 1; i > 0; --i) {
        const double s1 = std::log(r[i]);
        const double s0 = std::log(r[i - 1]);
        const double hh = (s0 - s1) / substeps_per_cell;  // negative
        double s = s1;
        for (int q = 0; q < substeps_per_cell; ++q) {
            double k1f, k1s, k2f, k2s, k3f, k3s, k4f, k4s;
            rhs(s, f, fs, k1f, k1s);
            rhs(s + 0.5 * hh, f + 0.5 * hh * k1f, fs + 0.5 * hh * k1s, k2f, k2s);
            rhs(s + 0.5 * hh, f + 0.5 * hh * k2f, fs + 0.5 * hh * k2s, k3f, k3s);
            rhs(s + hh, f + hh * k3f, fs + hh * k3s, k4f, k4s);
            f += (hh / 6.0) * (k1f + 2 * k2f + 2 * k3f + k4f);
            fs += (hh / 6.0) * (k1s + 2 * k2s + 2 * k3s + k4s);
            s += hh;
        }
        out[i - 1] = f;
    }
    if (out[0] == 0.0) throw std::runtime_error("shooting solution vanishes at the boundary");
    return out * (boundary_value / out[0]);
}

LinearSolution solve_linear(const BoundaryData& f, GridPtr grid) {
    if (f.N() != grid->N()) throw std::invalid_argument("boundary symmetry order mismatch");
    LinearSolution sol{Field(grid, /*symmetric=*/true), f};
    const auto& th = grid->theta();
    const int nt = grid->ntheta();
    for (const auto& [k, a] : f.coefficients()) {
        if (a == 0.0) continue;
        const int m = k * grid->N();
        const double msq = discrete_angular_eigenvalue_sq(m, grid->dtheta());
        const ArrayXd profile = solve_linear_mode_discrete(msq, *grid, a);
        for (int j = 1; j + 1 < nt; ++j) sol.u1.v.col(j) += profile * std::sin(m * th[j]);
    }
    sol.u1.zero_angular_edges();
    if (!sol.u1.finite()) throw std::runtime_error("linear solve produced non-finite values");

    sol.K0 = f.c4_norm();
    if (sol.K0 > 0) {
        const auto& r = grid->r();
        double ratio = 0;
        for (int i = 0; i < grid->nr(); ++i)
            ratio = std::max(ratio, sol.u1.v.row(i).abs().maxCoeff() / (3.0 * sol.K0 * r[i]));
        sol.growth_ratio = ratio;
        sol.K1_est = estimate_K1(sol);
    }
    return sol;
}

double estimate_K1(const LinearSolution& sol) {
    if (sol.K0 <= 0) throw std::invalid_argument("K1 estimate needs a nonzero boundary norm");
    const GradHess g = gradient_hessian(sol.u1);
    const auto& r = sol.u1.grid->r();
    const double cap = 0.5 * sol.u1.grid->R_max();
    double sup = 0;
    for (int i = 0; i < sol.u1.nr(); ++i) {
        if (r[i] > cap) break;
        for (int j = 0; j < sol.u1.ntheta(); ++j) {
            const double grad = std::hypot(g.d1(i, j), g.d2(i, j));
            const double hess = std::sqrt(g.d11(i, j) * g.d11(i, j) +
                                          2.0 * g.d12(i, j) * g.d12(i, j) +
                                          g.d22(i, j) * g.d22(i, j));
            sup = std::max(sup, grad + r[i] * hess);
        }
    }
    return sup / sol.K0;
}

}  // namespace shrinkerlab
