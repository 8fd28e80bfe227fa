#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>

namespace shrinkerlab {

using Eigen::ArrayXd;
using Eigen::ArrayXXd;

enum class RadialSpacing { Uniform, LogGraded };

RadialSpacing parse_spacing(const std::string& name);
std::string spacing_name(RadialSpacing s);

/// Discrete polar sector [R, R_max] x [0, pi/N].
///
/// Radial nodes are strictly increasing with r[0] = R and r[nr-1] = R_max;
/// the log-graded rule places them uniformly in ln r. Angular nodes are
/// uniform with theta[0] = 0 and theta[ntheta-1] = pi/N exactly.
class SectorGrid {
public:
    static std::shared_ptr<const SectorGrid> create(double R, double R_max, int nr, int ntheta,
                                                    int N, RadialSpacing spacing);

    /// Relaxed factory for spectral/test domains: allows R >= 0 and small
    /// R_max, uniform spacing only. The solver-grid invariants (R > 1/sqrt(2),
    /// R_max >= 2e(R+1)) are not enforced here.
    static std::shared_ptr<const SectorGrid> create_spectral(double R, double R_max, int nr,
                                                             int ntheta, int N);

    double R() const { return R_; }
    double R_max() const { return R_max_; }
    int nr() const { return nr_; }
    int ntheta() const { return ntheta_; }
    int N() const { return N_; }
    RadialSpacing spacing() const { return spacing_; }

    const ArrayXd& r() const { return r_; }
    const ArrayXd& theta() const { return theta_; }
    double dtheta() const { return dtheta_; }

    /// Mesh parameter h used in discretization-error thresholds:
    /// max of the angular step and the radial step in the grid's own
    /// parameterization (dr for uniform, d(ln r) for log-graded).
    double mesh_parameter() const { return h_; }

    /// Smallest gap between node r_i and its neighbours.
    double radial_gap(int i) const;

    bool same_layout(const SectorGrid& other) const;

private:
    SectorGrid() = default;

    double R_ = 0, R_max_ = 0;
    int nr_ = 0, ntheta_ = 0, N_ = 0;
    RadialSpacing spacing_ = RadialSpacing::Uniform;
    ArrayXd r_, theta_;
    double dtheta_ = 0, h_ = 0;
};

using GridPtr = std::shared_ptr<const SectorGrid>;

/// Scalar grid function. Values are indexed (i, j) = (radial, angular).
///
/// A field tagged symmetric represents a member of the odd symmetry class
/// u(r,theta) = -u(r,-theta) = u(r,pi/N-theta); its values on the angular
/// edge columns are exactly zero and edge derivatives may use odd-reflection
/// ghosts.
struct Field {
    GridPtr grid;
    ArrayXXd v;  // (nr, ntheta)
    bool symmetric = false;

    Field() = default;
    explicit Field(GridPtr g, bool symmetric_tag = false)
        : grid(std::move(g)), v(ArrayXXd::Zero(grid->nr(), grid->ntheta())),
          symmetric(symmetric_tag) {}

    int nr() const { return grid->nr(); }
    int ntheta() const { return grid->ntheta(); }

    void zero_angular_edges() {
        v.col(0).setZero();
        v.col(grid->ntheta() - 1).setZero();
    }

    bool finite() const { return v.allFinite(); }
};

inline void require_same_grid(const Field& a, const Field& b) {
    if (a.grid != b.grid && !a.grid->same_layout(*b.grid))
        throw std::invalid_argument("fields live on different grids");
}

}  // namespace shrinkerlab
