#include "shrinkerlab/boundary.hpp"

#include <cmath>

namespace shrinkerlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

BoundaryData::BoundaryData(int N, std::map<int, double> odd_mode_coefficients)
    : N_(N), coeffs_(std::move(odd_mode_coefficients)) {
    if (N < 5) throw std::invalid_argument("symmetry order must be at least 5");
    for (const auto& [k, a] : coeffs_) {
        if (k < 1 || k % 2 == 0)
            throw std::invalid_argument("boundary modes must have odd k >= 1, got k=" +
                                        std::to_string(k));
        (void)a;
    }
    constexpr int samples = 4096;
    for (int order = 0; order <= 4; ++order) {
        double sup = 0;
        for (int s = 0; s < samples; ++s) {
            const double th = 2.0 * kPi * s / samples;
            sup = std::max(sup, std::abs(eval(th, order)));
        }
        if (order == 0) sup_ = sup;
        c4_ = std::max(c4_, sup);
    }
}

bool BoundaryData::is_zero() const {
    for (const auto& [k, a] : coeffs_)
        if (a != 0.0) return false;
    return true;
}

double BoundaryData::eval(double theta, int order) const {
    if (order < 0 || order > 4) throw std::invalid_argument("derivative order must be in 0..4");
    double out = 0;
    for (const auto& [k, a] : coeffs_) {
        const double m = double(k) * N_;
        const double p = std::pow(m, order);
        const double arg = m * theta;
        // d^n/dtheta^n sin = sin, cos, -sin, -cos cycle
        switch (order % 4) {
            case 0: out += a * p * std::sin(arg); break;
            case 1: out += a * p * std::cos(arg); break;
            case 2: out -= a * p * std::sin(arg); break;
            case 3: out -= a * p * std::cos(arg); break;
        }
    }
    return out;
}

BoundaryData BoundaryData::scaled(double factor) const {
    std::map<int, double> c = coeffs_;
    for (auto& [k, a] : c) a *= factor;
    return BoundaryData(N_, std::move(c));
}

ArrayXd BoundaryData::sample(const SectorGrid& grid) const {
    if (grid.N() != N_) throw std::invalid_argument("boundary data symmetry order mismatch");
    ArrayXd out(grid.ntheta());
    for (int j = 0; j < grid.ntheta(); ++j) out[j] = eval(grid.theta()[j], 0);
    out[0] = 0.0;
    out[grid.ntheta() - 1] = 0.0;
    return out;
}

}  // namespace shrinkerlab
