#include "shrinkerlab/derivatives.hpp"

#include <cmath>

namespace shrinkerlab {

Eigen::MatrixXd fornberg_weights(double z, std::span<const double> x, int max_order) {
    const int n = int(x.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(max_order + 1, n);
    double c1 = 1.0;
    double c4 = x[0] - z;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
                c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
            }
            for (int k = mn; k >= 1; --k) c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
            c(0, j) = c4 * c(0, j) / c3;
        }
        c1 = c2;
    }
    return c;
}

RadialStencilTable::RadialStencilTable(const SectorGrid& g) {
    const auto& r = g.r();
    const int nr = g.nr();
    d1m.resize(nr);
    d1c.resize(nr);
    d1p.resize(nr);
    d2m.resize(nr);
    d2c.resize(nr);
    d2p.resize(nr);
    d1m[0] = d1c[0] = d1p[0] = d2m[0] = d2c[0] = d2p[0] = 0;
    d1m[nr - 1] = d1c[nr - 1] = d1p[nr - 1] = d2m[nr - 1] = d2c[nr - 1] = d2p[nr - 1] = 0;
    for (int i = 1; i + 1 < nr; ++i) {
        const double hm = r[i] - r[i - 1];
        const double hp = r[i + 1] - r[i];
        d1m[i] = -hp / (hm * (hm + hp));
        d1c[i] = (hp - hm) / (hm * hp);
        d1p[i] = hm / (hp * (hm + hp));
        d2m[i] = 2.0 / (hm * (hm + hp));
        d2c[i] = -2.0 / (hm * hp);
        d2p[i] = 2.0 / (hp * (hm + hp));
    }
    {
        const double xs1[3] = {r[0], r[1], r[2]};
        auto w = fornberg_weights(r[0], std::span<const double>(xs1, 3), 1);
        for (int k = 0; k < 3; ++k) first_in[k] = w(1, k);
        const double xs2[4] = {r[0], r[1], r[2], r[3]};
        auto w2 = fornberg_weights(r[0], std::span<const double>(xs2, 4), 2);
        for (int k = 0; k < 4; ++k) second_in[k] = w2(2, k);
    }
    {
        const double xs1[3] = {r[nr - 3], r[nr - 2], r[nr - 1]};
        auto w = fornberg_weights(r[nr - 1], std::span<const double>(xs1, 3), 1);
        for (int k = 0; k < 3; ++k) first_out[k] = w(1, k);
        const double xs2[4] = {r[nr - 4], r[nr - 3], r[nr - 2], r[nr - 1]};
        auto w2 = fornberg_weights(r[nr - 1], std::span<const double>(xs2, 4), 2);
        for (int k = 0; k < 4; ++k) second_out[k] = w2(2, k);
    }
}

AngularStencil::AngularStencil(double dth) : dtheta(dth) {
    inv_two_sin = 1.0 / (2.0 * std::sin(dth));
    inv_two_vers = 1.0 / (2.0 * (1.0 - std::cos(dth)));
}

double discrete_angular_eigenvalue_sq(int m, double dtheta) {
    return (1.0 - std::cos(m * dtheta)) / (1.0 - std::cos(dtheta));
}

void compute_polar_derivs(const Field& u, const RadialStencilTable& tbl, PolarDerivs& out) {
    const int nr = u.nr();
    const int nt = u.ntheta();
    const ArrayXXd& f = u.v;
    out.resize(nr, nt);

    // radial derivatives, column by column
    for (int j = 0; j < nt; ++j) {
        auto col = f.col(j);
        out.ur.col(j).segment(1, nr - 2) =
            tbl.d1m.segment(1, nr - 2) * col.segment(0, nr - 2) +
            tbl.d1c.segment(1, nr - 2) * col.segment(1, nr - 2) +
            tbl.d1p.segment(1, nr - 2) * col.segment(2, nr - 2);
        out.urr.col(j).segment(1, nr - 2) =
            tbl.d2m.segment(1, nr - 2) * col.segment(0, nr - 2) +
            tbl.d2c.segment(1, nr - 2) * col.segment(1, nr - 2) +
            tbl.d2p.segment(1, nr - 2) * col.segment(2, nr - 2);
        out.ur(0, j) = tbl.first_in[0] * col[0] + tbl.first_in[1] * col[1] + tbl.first_in[2] * col[2];
        out.urr(0, j) = tbl.second_in[0] * col[0] + tbl.second_in[1] * col[1] +
                        tbl.second_in[2] * col[2] + tbl.second_in[3] * col[3];
        out.ur(nr - 1, j) = tbl.first_out[0] * col[nr - 3] + tbl.first_out[1] * col[nr - 2] +
                            tbl.first_out[2] * col[nr - 1];
        out.urr(nr - 1, j) = tbl.second_out[0] * col[nr - 4] + tbl.second_out[1] * col[nr - 3] +
                             tbl.second_out[2] * col[nr - 2] + tbl.second_out[3] * col[nr - 1];
    }

    // angular derivatives
    const AngularStencil ang(u.grid->dtheta());
    const double i2s = ang.inv_two_sin;
    const double i2v = ang.inv_two_vers;
    for (int j = 1; j + 1 < nt; ++j) {
        out.ut.col(j) = (f.col(j + 1) - f.col(j - 1)) * i2s;
        out.utt.col(j) = (f.col(j + 1) - 2.0 * f.col(j) + f.col(j - 1)) * i2v;
    }
    if (u.symmetric) {
        // odd reflection across both angular edges
        out.ut.col(0) = 2.0 * f.col(1) * i2s;
        out.utt.col(0) = -2.0 * f.col(0) * i2v;
        out.ut.col(nt - 1) = -2.0 * f.col(nt - 2) * i2s;
        out.utt.col(nt - 1) = -2.0 * f.col(nt - 1) * i2v;
    } else {
        const double dth = ang.dtheta;
        out.ut.col(0) = (-3.0 * f.col(0) + 4.0 * f.col(1) - f.col(2)) / (2.0 * dth);
        out.utt.col(0) =
            (2.0 * f.col(0) - 5.0 * f.col(1) + 4.0 * f.col(2) - f.col(3)) / (dth * dth);
        out.ut.col(nt - 1) = (3.0 * f.col(nt - 1) - 4.0 * f.col(nt - 2) + f.col(nt - 3)) / (2.0 * dth);
        out.utt.col(nt - 1) =
            (2.0 * f.col(nt - 1) - 5.0 * f.col(nt - 2) + 4.0 * f.col(nt - 3) - f.col(nt - 4)) /
            (dth * dth);
    }

    // mixed derivative: radial stencils applied to u_theta
    for (int j = 0; j < nt; ++j) {
        auto col = out.ut.col(j);
        out.urt.col(j).segment(1, nr - 2) =
            tbl.d1m.segment(1, nr - 2) * col.segment(0, nr - 2) +
            tbl.d1c.segment(1, nr - 2) * col.segment(1, nr - 2) +
            tbl.d1p.segment(1, nr - 2) * col.segment(2, nr - 2);
        out.urt(0, j) =
            tbl.first_in[0] * col[0] + tbl.first_in[1] * col[1] + tbl.first_in[2] * col[2];
        out.urt(nr - 1, j) = tbl.first_out[0] * col[nr - 3] + tbl.first_out[1] * col[nr - 2] +
                             tbl.first_out[2] * col[nr - 1];
    }

    if (u.grid->r()[0] <= 0.0) {
        out.ur.row(0).setZero();
        out.urr.row(0).setZero();
        out.ut.row(0).setZero();
        out.utt.row(0).setZero();
        out.urt.row(0).setZero();
    }
}

PolarDerivs compute_polar_derivs(const Field& u) {
    RadialStencilTable tbl(*u.grid);
    PolarDerivs d;
    compute_polar_derivs(u, tbl, d);
    return d;
}

GradHess gradient_hessian(const Field& u) {
    const PolarDerivs d = compute_polar_derivs(u);
    const int nr = u.nr(), nt = u.ntheta();
    const auto& r = u.grid->r();
    const auto& th = u.grid->theta();

    GradHess g;
    g.d1.resize(nr, nt);
    g.d2.resize(nr, nt);
    g.d11.resize(nr, nt);
    g.d12.resize(nr, nt);
    g.d22.resize(nr, nt);

    for (int j = 0; j < nt; ++j) {
        const double ct = std::cos(th[j]);
        const double st = std::sin(th[j]);
        for (int i = 0; i < nr; ++i) {
            if (r[i] <= 0.0) {
                g.d1(i, j) = g.d2(i, j) = g.d11(i, j) = g.d12(i, j) = g.d22(i, j) = 0.0;
                continue;
            }
            const double inv_r = 1.0 / r[i];
            const double ur = d.ur(i, j);
            const double ut_r = d.ut(i, j) * inv_r;
            // symmetric Hessian in the orthonormal polar frame
            const double a = d.urr(i, j);
            const double b = d.urt(i, j) * inv_r - d.ut(i, j) * inv_r * inv_r;
            const double c = ur * inv_r + d.utt(i, j) * inv_r * inv_r;
            g.d1(i, j) = ct * ur - st * ut_r;
            g.d2(i, j) = st * ur + ct * ut_r;
            g.d11(i, j) = ct * ct * a - 2.0 * st * ct * b + st * st * c;
            g.d12(i, j) = st * ct * (a - c) + (ct * ct - st * st) * b;
            g.d22(i, j) = st * st * a + 2.0 * st * ct * b + ct * ct * c;
        }
    }
    return g;
}

ArrayXXd grad_norm_sq(const Field& u, const PolarDerivs& d) {
    const int nr = u.nr(), nt = u.ntheta();
    const auto& r = u.grid->r();
    ArrayXXd g(nr, nt);
    for (int i = 0; i < nr; ++i) {
        if (r[i] <= 0.0) {
            g.row(i).setZero();
            continue;
        }
        const double inv_r = 1.0 / r[i];
        g.row(i) = d.ur.row(i).square() + (d.ut.row(i) * inv_r).square();
    }
    return g;
}

}  // namespace shrinkerlab
