#include "shrinkerlab/grid.hpp"

#include <cmath>

namespace shrinkerlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

RadialSpacing parse_spacing(const std::string& name) {
    if (name == "uniform") return RadialSpacing::Uniform;
    if (name == "log" || name == "log-graded") return RadialSpacing::LogGraded;
    throw std::invalid_argument("unknown radial spacing '" + name + "'");
}

std::string spacing_name(RadialSpacing s) {
    return s == RadialSpacing::Uniform ? "uniform" : "log";
}

std::shared_ptr<const SectorGrid> SectorGrid::create(double R, double R_max, int nr, int ntheta,
                                                     int N, RadialSpacing spacing) {
    if (!(R > kInvSqrt2))
        throw std::invalid_argument("inner radius must exceed 1/sqrt(2), got " + std::to_string(R));
    if (!(R < 2.0)) throw std::invalid_argument("inner radius must be below 2");
    const double rmax_floor = 2.0 * std::exp(1.0) * (R + 1.0);
    if (!(R_max >= rmax_floor))
        throw std::invalid_argument("truncation radius too small: need R_max >= 2e(R+1) = " +
                                    std::to_string(rmax_floor));
    if (nr < 16 || ntheta < 8) throw std::invalid_argument("grid too coarse: need nr>=16, ntheta>=8");
    if (N < 5) throw std::invalid_argument("symmetry order must be at least 5");

    auto g = std::shared_ptr<SectorGrid>(new SectorGrid());
    g->R_ = R;
    g->R_max_ = R_max;
    g->nr_ = nr;
    g->ntheta_ = ntheta;
    g->N_ = N;
    g->spacing_ = spacing;
    g->r_.resize(nr);
    if (spacing == RadialSpacing::Uniform) {
        const double dr = (R_max - R) / (nr - 1);
        for (int i = 0; i < nr; ++i) g->r_[i] = R + i * dr;
        g->h_ = dr;
    } else {
        const double s0 = std::log(R), s1 = std::log(R_max);
        const double ds = (s1 - s0) / (nr - 1);
        for (int i = 0; i < nr; ++i) g->r_[i] = std::exp(s0 + i * ds);
        g->h_ = ds;
    }
    g->r_[0] = R;
    g->r_[nr - 1] = R_max;

    g->theta_.resize(ntheta);
    g->dtheta_ = (kPi / N) / (ntheta - 1);
    for (int j = 0; j < ntheta; ++j) g->theta_[j] = j * g->dtheta_;
    g->theta_[ntheta - 1] = kPi / N;
    g->h_ = std::max(g->h_, g->dtheta_);
    return g;
}

std::shared_ptr<const SectorGrid> SectorGrid::create_spectral(double R, double R_max, int nr,
                                                              int ntheta, int N) {
    if (R < 0 || R_max <= R) throw std::invalid_argument("bad spectral grid radii");
    if (nr < 16 || ntheta < 8) throw std::invalid_argument("grid too coarse");
    if (N < 5) throw std::invalid_argument("symmetry order must be at least 5");
    auto g = std::shared_ptr<SectorGrid>(new SectorGrid());
    g->R_ = R;
    g->R_max_ = R_max;
    g->nr_ = nr;
    g->ntheta_ = ntheta;
    g->N_ = N;
    g->spacing_ = RadialSpacing::Uniform;
    g->r_.resize(nr);
    const double dr = (R_max - R) / (nr - 1);
    for (int i = 0; i < nr; ++i) g->r_[i] = R + i * dr;
    g->r_[nr - 1] = R_max;
    g->theta_.resize(ntheta);
    g->dtheta_ = (kPi / N) / (ntheta - 1);
    for (int j = 0; j < ntheta; ++j) g->theta_[j] = j * g->dtheta_;
    g->theta_[ntheta - 1] = kPi / N;
    g->h_ = std::max(dr, g->dtheta_);
    return g;
}

double SectorGrid::radial_gap(int i) const {
    if (i == 0) return r_[1] - r_[0];
    if (i == nr_ - 1) return r_[nr_ - 1] - r_[nr_ - 2];
    return std::min(r_[i] - r_[i - 1], r_[i + 1] - r_[i]);
}

bool SectorGrid::same_layout(const SectorGrid& o) const {
    return R_ == o.R_ && R_max_ == o.R_max_ && nr_ == o.nr_ && ntheta_ == o.ntheta_ &&
           N_ == o.N_ && spacing_ == o.spacing_;
}

}  // namespace shrinkerlab
