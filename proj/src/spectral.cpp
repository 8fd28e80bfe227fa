#include "shrinkerlab/spectral.hpp"

#include <cmath>
#include <vector>

#include "shrinkerlab/linop.hpp"

namespace shrinkerlab {

namespace {

constexpr int kDegreeCap = 40;

// The moment bilinear form cancels catastrophically for large kN + 2l (the
// off-diagonal Gram entries are tiny residues of enormous alternating
// terms), so the orthogonalization and its certification run in quad
// precision where available.
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
using WideFloat = __float128;
#else
using WideFloat = long double;
#endif

void check_indices(int k, int l, int N) {
    if (k < 1) throw std::invalid_argument("angular index k must be >= 1");
    if (l < 0) throw std::invalid_argument("polynomial degree l must be >= 0");
    if (N < 5) throw std::invalid_argument("symmetry order N must be >= 5");
    if (l > kDegreeCap)
        throw std::invalid_argument("degree cap exceeded: moments overflow beyond l = 40");
    if (2 * l + k * N + 1 > 170) throw std::invalid_argument("degree cap exceeded for this k, N");
}

WideFloat moment_w(int n) {
    WideFloat acc = 2;  // 0! * 2^1
    for (int i = 1; i <= n; ++i) acc *= WideFloat(2 * i);
    return acc;
}

using VectorXw = Eigen::Matrix<WideFloat, Eigen::Dynamic, 1>;

WideFloat dot_w(const VectorXw& p, const VectorXw& q, int alpha) {
    WideFloat acc = 0;
    for (int a = 0; a < p.size(); ++a) {
        if (p[a] == WideFloat(0)) continue;
        for (int b = 0; b < q.size(); ++b) {
            if (q[b] == WideFloat(0)) continue;
            acc += p[a] * q[b] * moment_w(a + b + alpha);
        }
    }
    return acc;
}

/// Family by modified Gram-Schmidt with one re-orthogonalization pass.
std::vector<VectorXw> family_w(int k, int lmax, int N) {
    const int alpha = k * N;
    std::vector<VectorXw> fam;
    std::vector<WideFloat> norms_sq;
    fam.reserve(lmax + 1);
    for (int l = 0; l <= lmax; ++l) {
        VectorXw p = VectorXw::Zero(l + 1);
        p[l] = 1;
        for (int pass = 0; pass < 2; ++pass) {
            for (int s = 0; s < l; ++s) {
                VectorXw ps = VectorXw::Zero(l + 1);
                ps.head(s + 1) = fam[s];
                const WideFloat c = dot_w(p, ps, alpha) / norms_sq[s];
                p -= c * ps;
            }
        }
        p[l] = 1;  // keep monic against rounding drift
        fam.push_back(p);
        norms_sq.push_back(dot_w(p, p, alpha));
    }
    return fam;
}

}  // namespace

double eigenvalue(int k, int l, int N) {
    check_indices(k, l, N);
    return 1.0 - double(k * N + 2 * l);
}

long double laguerre_moment(int n) {
    long double acc = 2.0L;  // 0! * 2^1
    for (int i = 1; i <= n; ++i) acc *= 2.0L * i;
    return acc;
}

Eigen::VectorXd laguerre_poly(int k, int l, int N) {
    check_indices(k, l, N);
    const auto fam = family_w(k, l, N);
    Eigen::VectorXd out(l + 1);
    for (int a = 0; a <= l; ++a) out[a] = double(fam[l][a]);
    return out;
}

Eigen::MatrixXd laguerre_family(int k, int lmax, int N) {
    check_indices(k, lmax, N);
    const auto fam = family_w(k, lmax, N);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(lmax + 1, lmax + 1);
    for (int l = 0; l <= lmax; ++l)
        for (int a = 0; a <= l; ++a) out(a, l) = double(fam[l][a]);
    return out;
}

Eigen::MatrixXd laguerre_family_recurrence(int k, int lmax, int N) {
    check_indices(k, lmax, N);
    const int alpha = k * N;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(lmax + 1, lmax + 1);
    out(0, 0) = 1.0;
    if (lmax == 0) return out;
    out(0, 1) = -2.0 * (alpha + 1);
    out(1, 1) = 1.0;
    for (int n = 1; n < lmax; ++n) {
        const double a_n = 2.0 * (2 * n + alpha + 1);
        const double b_n = 4.0 * n * (n + alpha);
        for (int p = 0; p <= n + 1; ++p) {
            double c = (p > 0 ? out(p - 1, n) : 0.0) - a_n * out(p, n) - b_n * out(p, n - 1);
            out(p, n + 1) = c;
        }
    }
    return out;
}

long double laguerre_weighted_dot(const Eigen::VectorXd& p, const Eigen::VectorXd& q, int k,
                                  int N) {
    return (long double)dot_w(p.cast<WideFloat>(), q.cast<WideFloat>(), k * N);
}

Eigen::MatrixXd laguerre_gram_normalized(int k, int lmax, int N) {
    check_indices(k, lmax, N);
    const int alpha = k * N;
    const auto fam = family_w(k, lmax, N);
    std::vector<VectorXw> padded(lmax + 1, VectorXw::Zero(lmax + 1));
    for (int l = 0; l <= lmax; ++l) padded[l].head(l + 1) = fam[l];
    Eigen::Matrix<WideFloat, Eigen::Dynamic, Eigen::Dynamic> G(lmax + 1, lmax + 1);
    for (int a = 0; a <= lmax; ++a)
        for (int b = a; b <= lmax; ++b) {
            G(a, b) = dot_w(padded[a], padded[b], alpha);
            G(b, a) = G(a, b);
        }
    Eigen::MatrixXd out(lmax + 1, lmax + 1);
    for (int a = 0; a <= lmax; ++a) {
        const double sa = std::sqrt(double(G(a, a)));
        for (int b = 0; b <= lmax; ++b) {
            const double sb = std::sqrt(double(G(b, b)));
            out(a, b) = double(G(a, b) / WideFloat(sa * sb));
        }
    }
    return out;
}

EigenPair make_eigen_pair(int k, int l, int N, bool allow_nonsymmetric_mode) {
    check_indices(k, l, N);
    if (k % 2 == 0 && !allow_nonsymmetric_mode)
        throw std::invalid_argument(
            "even k lies outside the symmetric class; pass allow_nonsymmetric_mode to build it");
    EigenPair pair;
    pair.k = k;
    pair.l = l;
    pair.N = N;
    pair.lambda = eigenvalue(k, l, N);
    pair.coeffs = laguerre_poly(k, l, N);
    return pair;
}

double eigenfunction_eval(const EigenPair& pair, double r, double theta) {
    if (r < 0) throw std::invalid_argument("radius must be nonnegative");
    const double rho = r * r;
    double poly = 0;
    for (int a = int(pair.coeffs.size()) - 1; a >= 0; --a) poly = poly * rho + pair.coeffs[a];
    return std::pow(r, pair.k * pair.N) * poly * std::sin(pair.k * pair.N * theta);
}

Field eigenfunction_field(const EigenPair& pair, GridPtr grid) {
    Field f(std::move(grid), /*symmetric=*/true);
    const auto& r = f.grid->r();
    const auto& th = f.grid->theta();
    const int m = pair.k * pair.N;
    ArrayXd radial(f.nr());
    for (int i = 0; i < f.nr(); ++i) {
        const double rho = r[i] * r[i];
        double poly = 0;
        for (int a = int(pair.coeffs.size()) - 1; a >= 0; --a) poly = poly * rho + pair.coeffs[a];
        radial[i] = std::pow(r[i], m) * poly;
    }
    for (int j = 1; j + 1 < f.ntheta(); ++j) f.v.col(j) = radial * std::sin(m * th[j]);
    f.zero_angular_edges();
    return f;
}

double verify_eigen(const Field& phi, double lambda) {
    const Field lphi = apply_L(phi);
    const int nr = phi.nr(), nt = phi.ntheta();
    const auto& r = phi.grid->r();
    const double r_cap = 0.5 * phi.grid->R_max();
    double res = 0, scale = 0;
    for (int i = 1; i + 1 < nr; ++i) {
        if (r[i] > r_cap) break;
        for (int j = 1; j + 1 < nt; ++j) {
            res = std::max(res, std::abs(lphi.v(i, j) - lambda * phi.v(i, j)));
            scale = std::max(scale, std::abs(phi.v(i, j)));
        }
    }
    if (scale == 0) throw std::invalid_argument("field vanishes on the probed region");
    return res / scale;
}

double verify_eigen(const EigenPair& pair, GridPtr grid) {
    if (grid->ntheta() < 8 * pair.k)
        throw std::invalid_argument("grid does not resolve the angular mode");
    const Field phi = eigenfunction_field(pair, grid);
    return verify_eigen(phi, pair.lambda);
}

ExpansionTable expand(const Field& u, int k_max, int l_max, const WeightedNorms& w) {
    if (!u.symmetric) throw std::invalid_argument("expansion requires a symmetric-Dirichlet field");
    if (k_max < 1 || l_max < 0) throw std::invalid_argument("bad truncation indices");
    if (k_max > (u.ntheta() - 1) / 4 || l_max > kDegreeCap)
        throw std::invalid_argument("truncation indices exceed grid resolution");

    ExpansionTable table;
    table.k_max = k_max;
    table.l_max = l_max;
    table.N = u.grid->N();
    table.c = Eigen::MatrixXd::Zero(k_max, l_max + 1);

    for (int k = 1; k <= k_max; ++k) {
        std::vector<Field> phis;
        phis.reserve(l_max + 1);
        const bool even_ok = true;  // expansion may probe even-k content of the stored sector
        for (int l = 0; l <= l_max; ++l)
            phis.push_back(eigenfunction_field(make_eigen_pair(k, l, u.grid->N(), even_ok), u.grid));
        Eigen::MatrixXd G(l_max + 1, l_max + 1);
        Eigen::VectorXd b(l_max + 1);
        for (int a = 0; a <= l_max; ++a) {
            b[a] = inner_product_H(u, phis[a], w);
            for (int s = a; s <= l_max; ++s) {
                G(a, s) = inner_product_H(phis[a], phis[s], w);
                G(s, a) = G(a, s);
            }
        }
        table.c.row(k - 1) = G.ldlt().solve(b).transpose();
    }
    return table;
}

Field reconstruct(const ExpansionTable& table, GridPtr grid) {
    Field out(grid, /*symmetric=*/true);
    for (int k = 1; k <= table.k_max; ++k)
        for (int l = 0; l <= table.l_max; ++l) {
            const double c = table.c(k - 1, l);
            if (c == 0.0) continue;
            out.v += c * eigenfunction_field(make_eigen_pair(k, l, table.N, true), grid).v;
        }
    out.zero_angular_edges();
    return out;
}

double poincare_ratio(const Field& u, const WeightedNorms& w) {
    const double h2 = norm_H_sq(u, w);
    if (h2 <= 0) throw std::invalid_argument("poincare ratio undefined for the zero field");
    return norm_V_sq(u, w) / h2;
}

}  // namespace shrinkerlab
