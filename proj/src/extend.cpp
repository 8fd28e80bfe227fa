#include "shrinkerlab/extend.hpp"

#include <algorithm>
#include <cmath>

namespace shrinkerlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Cubic {
    int k;           // window start
    double w[4];     // value weights
    double dw[4];    // derivative weights
};

Cubic cubic_weights(const ArrayXd& x, int n, double z, int cell) {
    Cubic c;
    c.k = std::clamp(cell - 1, 0, n - 4);
    const double* xs = x.data() + c.k;
    for (int a = 0; a < 4; ++a) {
        double num = 1, den = 1;
        for (int b = 0; b < 4; ++b) {
            if (b == a) continue;
            num *= (z - xs[b]);
            den *= (xs[a] - xs[b]);
        }
        c.w[a] = num / den;
        double dsum = 0;
        for (int m = 0; m < 4; ++m) {
            if (m == a) continue;
            double p = 1;
            for (int b = 0; b < 4; ++b) {
                if (b == a || b == m) continue;
                p *= (z - xs[b]);
            }
            dsum += p;
        }
        c.dw[a] = dsum / den;
    }
    return c;
}

}  // namespace

FieldInterpolator::FieldInterpolator(const Field& u) : u_(u) {
    if (u.nr() < 4 || u.ntheta() < 4) throw std::invalid_argument("grid too small to interpolate");
}

int FieldInterpolator::locate_r(double r) const {
    const auto& rs = u_.grid->r();
    if (r < rs[0] - 1e-12 || r > rs[u_.nr() - 1] + 1e-12)
        throw std::out_of_range("radius outside grid");
    const double* begin = rs.data();
    const double* end = begin + u_.nr();
    int cell = int(std::upper_bound(begin, end, r) - begin) - 1;
    return std::clamp(cell, 0, u_.nr() - 2);
}

int FieldInterpolator::locate_t(double theta) const {
    const double dth = u_.grid->dtheta();
    int cell = int(std::floor(theta / dth));
    return std::clamp(cell, 0, u_.ntheta() - 2);
}

double FieldInterpolator::eval(double r, double theta) const {
    const Cubic cr = cubic_weights(u_.grid->r(), u_.nr(), r, locate_r(r));
    const Cubic ct = cubic_weights(u_.grid->theta(), u_.ntheta(), theta, locate_t(theta));
    double out = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) out += cr.w[a] * ct.w[b] * u_.v(cr.k + a, ct.k + b);
    return out;
}

FieldInterpolator::ValueGrad FieldInterpolator::eval_with_grad(double r, double theta) const {
    const Cubic cr = cubic_weights(u_.grid->r(), u_.nr(), r, locate_r(r));
    const Cubic ct = cubic_weights(u_.grid->theta(), u_.ntheta(), theta, locate_t(theta));
    ValueGrad out{0, 0, 0};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const double f = u_.v(cr.k + a, ct.k + b);
            out.value += cr.w[a] * ct.w[b] * f;
            out.dr += cr.dw[a] * ct.w[b] * f;
            out.dtheta += cr.w[a] * ct.dw[b] * f;
        }
    return out;
}

double FieldInterpolator::eval_linear(double r, double theta) const {
    const auto& rs = u_.grid->r();
    const auto& ts = u_.grid->theta();
    const int i = locate_r(r);
    const int j = locate_t(theta);
    const double tr = (r - rs[i]) / (rs[i + 1] - rs[i]);
    const double tt = (theta - ts[j]) / (ts[j + 1] - ts[j]);
    return (1 - tr) * (1 - tt) * u_.v(i, j) + tr * (1 - tt) * u_.v(i + 1, j) +
           (1 - tr) * tt * u_.v(i, j + 1) + tr * tt * u_.v(i + 1, j + 1);
}

PlaneExtension::PlaneExtension(const Field& u) : u_(u), interp_(u) {
    if (!u.symmetric) throw std::invalid_argument("extension requires a symmetric-Dirichlet field");
}

PlaneExtension::Folded PlaneExtension::fold(double theta) const {
    const double period = 2.0 * kPi / u_.grid->N();
    double t = std::remainder(theta, period);  // in [-pi/N, pi/N]
    double sign = 1.0;
    if (t < 0) {
        t = -t;
        sign = corrupted_ ? 1.0 : -1.0;
    }
    return {t, sign};
}

double PlaneExtension::eval(double r, double theta) const {
    const Folded f = fold(theta);
    return f.sign * interp_.eval(r, f.theta);
}

double PlaneExtension::eval_node(int i, double theta) const {
    const Folded f = fold(theta);
    const double dth = u_.grid->dtheta();
    const int j = int(std::llround(f.theta / dth));
    if (j < 0 || j >= u_.ntheta() || std::abs(f.theta - j * dth) > 1e-9 * (1.0 + std::abs(theta)))
        return eval(u_.grid->r()[i], theta);
    return f.sign * u_.v(i, j);
}

}  // namespace shrinkerlab
