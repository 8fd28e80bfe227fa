#pragma once

#include <map>

#include "shrinkerlab/grid.hpp"

namespace shrinkerlab {

/// Boundary trace f(theta) = sum_k a_k sin(kN theta) over odd k >= 1.
///
/// Odd k is forced by the symmetries f(theta) = -f(-theta) = f(pi/N - theta);
/// even multiples of N flip sign under the second reflection. The C^4 norm
/// of f doubles as the smallness parameter of the whole problem.
class BoundaryData {
public:
    BoundaryData() : N_(5) {}
    BoundaryData(int N, std::map<int, double> odd_mode_coefficients);

    static BoundaryData zero(int N) { return BoundaryData(N, {}); }

    int N() const { return N_; }
    const std::map<int, double>& coefficients() const { return coeffs_; }
    bool is_zero() const;

    /// order-th theta-derivative of f at theta, order in 0..4.
    double eval(double theta, int order = 0) const;

    /// max over derivative orders 0..4 of the sup norm, sampled on a
    /// 4096-point theta grid over one period.
    double c4_norm() const { return c4_; }
    double sup_norm() const { return sup_; }

    BoundaryData scaled(double factor) const;

    /// f sampled on the grid's angular nodes, with exact zeros at the edges.
    ArrayXd sample(const SectorGrid& grid) const;

private:
    int N_;
    std::map<int, double> coeffs_;
    double c4_ = 0, sup_ = 0;
};

}  // namespace shrinkerlab
