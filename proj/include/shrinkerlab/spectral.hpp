#pragma once

#include <map>
#include <utility>

#include "shrinkerlab/grid.hpp"
#include "shrinkerlab/quadrature.hpp"

namespace shrinkerlab {

/// One eigenpair of the linearized operator on the symmetric sector:
/// eigenvalue 1 - (kN + 2l) with eigenfunction r^{kN} P_{k,l}(r^2) sin(kN theta),
/// P_{k,l} the monic degree-l orthogonal polynomial for the weight
/// rho^{kN} e^{-rho/2} on (0, infinity).
struct EigenPair {
    int k = 1, l = 0, N = 5;
    double lambda = 0;
    Eigen::VectorXd coeffs;  // ascending powers of rho, coeffs[l] == 1
};

double eigenvalue(int k, int l, int N);

/// Exact moment of the weight: integral of rho^n e^{-rho/2} = n! 2^{n+1}.
long double laguerre_moment(int n);

/// Monic P_{k,l} by modified Gram-Schmidt over {1, rho, ..., rho^l} with the
/// exact moments, one re-orthogonalization pass, extended-precision
/// accumulation. Degree cap l <= 40 (factorial moments overflow beyond).
Eigen::VectorXd laguerre_poly(int k, int l, int N);

/// Whole family P_{k,0..lmax} as columns (degree-l column padded with zeros).
Eigen::MatrixXd laguerre_family(int k, int lmax, int N);

/// Independent construction through the three-term recurrence
/// P_{n+1} = (rho - 2(2n + kN + 1)) P_n - 4 n (n + kN) P_{n-1}.
Eigen::MatrixXd laguerre_family_recurrence(int k, int lmax, int N);

/// Gram matrix of the family under the exact-moment inner product,
/// normalized by the diagonal: entry (l,s) is G_ls / sqrt(G_ll G_ss).
Eigen::MatrixXd laguerre_gram_normalized(int k, int lmax, int N);

/// Exact-moment inner product of two coefficient vectors under rho^{kN} e^{-rho/2}.
long double laguerre_weighted_dot(const Eigen::VectorXd& p, const Eigen::VectorXd& q, int k, int N);

/// Even k leaves the symmetric class (the reflection across pi/2N flips the
/// sign of sin(kN theta)); it must be requested explicitly.
EigenPair make_eigen_pair(int k, int l, int N, bool allow_nonsymmetric_mode = false);

double eigenfunction_eval(const EigenPair& pair, double r, double theta);
Field eigenfunction_field(const EigenPair& pair, GridPtr grid);

/// Relative sup-norm residual of the discrete eigenrelation
/// apply_L(phi) = lambda phi over interior nodes with r <= R_max/2.
double verify_eigen(const EigenPair& pair, GridPtr grid);
double verify_eigen(const Field& phi, double lambda);

/// Eigen-basis coefficients of a symmetric field, solving the per-k discrete
/// Gram system in the quadrature inner product (the modes of different k are
/// exactly orthogonal under the angular trapezoid sum, so k decouples).
struct ExpansionTable {
    int k_max = 0, l_max = 0, N = 5;
    Eigen::MatrixXd c;  // (k_max, l_max+1), row k-1

    double coeff(int k, int l) const { return c(k - 1, l); }
};

ExpansionTable expand(const Field& u, int k_max, int l_max, const WeightedNorms& w);
Field reconstruct(const ExpansionTable& table, GridPtr grid);

/// ||u||_V^2 / ||u||_H^2; at least N+1 for symmetric fields supported away
/// from the outer edge.
double poincare_ratio(const Field& u, const WeightedNorms& w);

}  // namespace shrinkerlab
