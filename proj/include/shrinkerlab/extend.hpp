#pragma once

#include "shrinkerlab/grid.hpp"

namespace shrinkerlab {

/// Cubic tensor-Lagrange interpolation of a field in (r, theta), with
/// analytic derivatives of the interpolant. Exact at grid nodes.
class FieldInterpolator {
public:
    explicit FieldInterpolator(const Field& u);

    double eval(double r, double theta) const;

    struct ValueGrad {
        double value, dr, dtheta;
    };
    ValueGrad eval_with_grad(double r, double theta) const;

    /// Same stencil with linear instead of cubic weights, as an
    /// interpolation-error surrogate.
    double eval_linear(double r, double theta) const;

private:
    const Field& u_;
    int locate_r(double r) const;
    int locate_t(double theta) const;
};

/// Whole-plane evaluator obtained from a sector field through the
/// symmetries u(r,theta) = -u(r,-theta) = u(r,pi/N-theta). Any angle is
/// folded into [0, pi/N] with the accumulated sign.
class PlaneExtension {
public:
    explicit PlaneExtension(const Field& u);

    /// Fold theta into the sector; returns the sign the value picks up.
    struct Folded {
        double theta;
        double sign;
    };
    Folded fold(double theta) const;

    double eval(double r, double theta) const;

    /// Evaluation restricted to grid angles: j-th node of the sector image
    /// of the given angle, exact sign handling, no interpolation in theta.
    double eval_node(int i, double theta) const;

    /// Test hook: flip the sign convention to emulate a broken extension.
    void corrupt_for_test() { corrupted_ = true; }

private:
    const Field& u_;
    FieldInterpolator interp_;
    bool corrupted_ = false;
};

}  // namespace shrinkerlab
