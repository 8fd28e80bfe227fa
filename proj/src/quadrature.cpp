#include "shrinkerlab/quadrature.hpp"

#include <cmath>

#include "shrinkerlab/derivatives.hpp"

namespace shrinkerlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

WeightedNorms::WeightedNorms(GridPtr grid) : grid_(std::move(grid)) {
    const auto& r = grid_->r();
    const int nr = grid_->nr();
    const int nt = grid_->ntheta();

    ArrayXd mass(nr - 1);
    for (int i = 0; i + 1 < nr; ++i)
        mass[i] = std::exp(-0.5 * r[i] * r[i]) - std::exp(-0.5 * r[i + 1] * r[i + 1]);

    wr_ = ArrayXd::Zero(nr);
    wr_[0] = 0.5 * mass[0];
    for (int i = 1; i + 1 < nr; ++i) wr_[i] = 0.5 * (mass[i - 1] + mass[i]);
    wr_[nr - 1] = 0.5 * mass[nr - 2];

    wt_ = ArrayXd::Constant(nt, grid_->dtheta());
    wt_[0] *= 0.5;
    wt_[nt - 1] *= 0.5;

    KahanSum s;
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) s.add((long double)wr_[i] * wt_[j]);
    total_ = double(s.value());
}

double WeightedNorms::total_weight_closed_form() const {
    const double R = grid_->R(), Rm = grid_->R_max();
    return (kPi / grid_->N()) * (std::exp(-0.5 * R * R) - std::exp(-0.5 * Rm * Rm));
}

double WeightedNorms::integrate(const ArrayXXd& g) const {
    const int nr = grid_->nr(), nt = grid_->ntheta();
    KahanSum s;
    for (int j = 0; j < nt; ++j) {
        const double wj = wt_[j];
        for (int i = 0; i < nr; ++i) s.add((long double)(wr_[i] * wj) * g(i, j));
    }
    return double(s.value());
}

double inner_product_H(const Field& u, const Field& v, const WeightedNorms& w) {
    require_same_grid(u, v);
    if (!u.grid->same_layout(*w.grid())) throw std::invalid_argument("quadrature grid mismatch");
    return 2.0 * w.integrate(u.v * v.v);
}

double norm_H_sq(const Field& u, const WeightedNorms& w) { return inner_product_H(u, u, w); }

double norm_V_sq(const Field& u, const WeightedNorms& w) {
    const PolarDerivs d = compute_polar_derivs(u);
    const auto& r = u.grid->r();
    ArrayXXd g = u.v * u.v + d.ur * d.ur;
    for (int i = 0; i < u.nr(); ++i) {
        if (r[i] <= 0) continue;  // symmetry-class fields vanish at the origin
        const double inv_r = 1.0 / r[i];
        g.row(i) += (d.ut.row(i) * inv_r).square();
    }
    return 2.0 * w.integrate(g);
}

}  // namespace shrinkerlab
