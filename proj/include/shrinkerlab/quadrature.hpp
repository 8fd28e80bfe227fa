#pragma once

#include "shrinkerlab/grid.hpp"

namespace shrinkerlab {

/// Compensated (Kahan) accumulator in extended precision. The flow-energy
/// monotonicity checks compare per-step differences of functionals whose
/// true change can sit a few ulps above double rounding, so quadrature sums
/// must not drown them in summation noise.
class KahanSum {
public:
    void add(long double x) {
        const long double y = x - c_;
        const long double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    long double value() const { return s_; }

private:
    long double s_ = 0, c_ = 0;
};

/// Quadrature weights for the Gaussian measure e^{-|xi|^2/2} dxi on the
/// sector. Radial weights integrate the measure exactly over each cell
/// (the cell mass e^{-r_i^2/2} - e^{-r_{i+1}^2/2} is split between the two
/// endpoints), so the total weight telescopes to the closed-form integral;
/// the rule is trapezoid-in-measure, second order for smooth integrands.
class WeightedNorms {
public:
    explicit WeightedNorms(GridPtr grid);

    const ArrayXd& radial_weights() const { return wr_; }
    const ArrayXd& angular_weights() const { return wt_; }
    double total_weight() const { return total_; }

    /// (pi/N) (e^{-R^2/2} - e^{-R_max^2/2})
    double total_weight_closed_form() const;

    /// Quadrature of g over the stored half-sector [0, pi/N].
    double integrate(const ArrayXXd& g) const;

    const GridPtr& grid() const { return grid_; }

private:
    GridPtr grid_;
    ArrayXd wr_, wt_;
    double total_ = 0;
};

/// Inner product of H over the symmetric sector |theta| < pi/N: twice the
/// half-sector quadrature of u v against the Gaussian measure (the products
/// of symmetry-class fields are even in theta).
double inner_product_H(const Field& u, const Field& v, const WeightedNorms& w);
double norm_H_sq(const Field& u, const WeightedNorms& w);

/// Squared V norm: integral of u^2 + |Du|^2 against the Gaussian measure
/// over the symmetric sector.
double norm_V_sq(const Field& u, const WeightedNorms& w);

}  // namespace shrinkerlab
