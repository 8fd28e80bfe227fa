// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria marked vacuous (no measurable violation exists) pass
// with a note.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <optional>
#include <random>
#include <vector>

#include "shrinkerlab/runner.hpp"
#include "shrinkerlab/spectral.hpp"
#include "shrinkerlab/verify.hpp"

using namespace shrinkerlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int criterion, bool pass, const std::string& what, double seconds) {
    std::printf("[%s] criterion %2d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

SolverConfig canonical_config() {
    SolverConfig cfg;  // defaults are the canonical run
    cfg.output_dir = "/tmp/shrinkerlab_acceptance";
    return cfg;
}

// ---------------------------------------------------------------- 1
void criterion_spectral_exactness() {
    Timer t;
    bool ok = true;
    for (int N : {5, 6, 7})
        for (int k = 1; k <= 5; ++k)
            for (int l = 0; l <= 5; ++l)
                ok &= (eigenvalue(k, l, N) == 1.0 - double(k * N + 2 * l));

    double worst = 0;
    for (int N : {5, 6, 7})
        for (int k = 1; k <= 5; ++k) {
            const Eigen::MatrixXd g = laguerre_gram_normalized(k, 10, N);
            for (int a = 0; a <= 10; ++a)
                for (int b = 0; b <= 10; ++b)
                    if (a != b) worst = std::max(worst, std::abs(g(a, b)));
        }
    ok &= worst <= 1e-10;
    report(1, ok && t.seconds() < 1.0,
           fmt("spectral exactness: eigenvalues exact, worst relative Gram off-diagonal %.2e "
               "(tol 1e-10)",
               worst),
           t.seconds());
}

// ---------------------------------------------------------------- 2
void criterion_eigen_convergence() {
    Timer t;
    bool ok = true;
    std::string detail = "eigenrelation refinement ratios:";
    for (int k : {1, 3})
        for (int l : {0, 2}) {
            const EigenPair p = make_eigen_pair(k, l, 5);
            double res[3];
            int idx = 0;
            for (int nr : {129, 257, 513}) {
                const int nt = (nr - 1) / 4 + 1;
                auto g = SectorGrid::create_spectral(0.0, 8.0, nr, nt, 5);
                res[idx++] = verify_eigen(p, g);
            }
            const double q1 = res[0] / res[1], q2 = res[1] / res[2];
            ok &= (q1 >= 3.5 && q1 <= 4.5 && q2 >= 3.5 && q2 <= 4.5);
            detail += fmt(" (k=%d,l=%d: %.2f, %.2f)", k, l, q1, q2);
        }
    report(2, ok && t.seconds() < 10.0, detail + " all in 4 +- 0.5", t.seconds());
}

// ---------------------------------------------------------------- 3
void criterion_poincare() {
    Timer t;
    auto g = SectorGrid::create_spectral(0.0, 8.0, 513, 129, 5);
    WeightedNorms w(g);

    const Field phi10 = eigenfunction_field(make_eigen_pair(1, 0, 5), g);
    const double ground = poincare_ratio(phi10, w);
    bool ok = std::abs(ground - 6.0) <= 1e-3;

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(1.0, 5.0);
    double worst = 1e30;
    for (int trial = 0; trial < 100; ++trial) {
        const double lo = pos(rng), width = 0.5 + 0.25 * (coeff(rng) + 1.0);
        Field b(g, true);
        for (int i = 0; i < b.nr(); ++i) {
            const double r = g->r()[i];
            if (r <= lo || r >= lo + width) continue;
            const double window = std::pow((r - lo) * (lo + width - r), 2);
            for (int j = 1; j + 1 < b.ntheta(); ++j) {
                const double th = g->theta()[j];
                b.v(i, j) = window * (coeff(rng) * std::sin(5 * th) +
                                      coeff(rng) * std::sin(10 * th) +
                                      coeff(rng) * std::sin(15 * th));
            }
        }
        worst = std::min(worst, poincare_ratio(b, w));
    }
    ok &= worst >= 6.0 - 1e-3;
    report(3, ok && t.seconds() < 10.0,
           fmt("poincare: ground-state ratio %.6f (6 +- 1e-3), worst random ratio %.4f >= %.4f",
               ground, worst, 6.0 - 1e-3),
           t.seconds());
}

// ---------------------------------------------------------------- 4
void criterion_exact_annihilation() {
    Timer t;
    // The stencils are exact on the plane, so the residual is pure roundoff:
    // the stored node values carry eps-level rounding that every second
    // difference amplifies by 1/h^2. The tolerance therefore carries an
    // explicit roundoff-amplification floor; an inexact stencil would sit
    // six orders above it (O(h^2) truncation on a field of size R_max).
    bool ok = true;
    double worst_plane = 0, worst_floor = 0;
    for (auto spacing : {RadialSpacing::Uniform, RadialSpacing::LogGraded})
        for (int nr : {65, 129, 257}) {
            const int nt = (nr - 1) / 4 + 1;
            auto g = SectorGrid::create(1.0, 16.0, nr, nt, 5, spacing);
            Field u(g);
            for (int i = 0; i < u.nr(); ++i)
                for (int j = 0; j < u.ntheta(); ++j)
                    u.v(i, j) = g->r()[i] * std::cos(g->theta()[j]);
            const Field lu = apply_L(u);
            const Field eu = apply_E(u);
            double res = 0;
            for (int i = 1; i + 1 < u.nr(); ++i)
                for (int j = 1; j + 1 < u.ntheta(); ++j)
                    res = std::max({res, std::abs(lu.v(i, j)), std::abs(eu.v(i, j))});
            double amp = 0;  // worst 1/h^2 amplification of eps |u| over the grid
            for (int i = 1; i + 1 < u.nr(); ++i) {
                const double hr = g->radial_gap(i);
                const double ht = g->r()[i] * g->dtheta();
                amp = std::max(amp, g->r()[i] * (1.0 / (hr * hr) + 1.0 / (ht * ht)));
            }
            const double floor = 16.0 * std::numeric_limits<double>::epsilon() * amp;
            ok &= res <= std::max(1e-12, floor);
            worst_plane = std::max(worst_plane, res);
            worst_floor = std::max(worst_floor, floor);
        }

    // closed form for the drift operator on the barrier bracket
    auto bracket_err = [](int nr) {
        const int nt = (nr - 1) / 4 + 1;
        auto g = SectorGrid::create(1.0, 16.0, nr, nt, 5, RadialSpacing::LogGraded);
        Field u(g);
        for (int i = 0; i < u.nr(); ++i)
            u.v.row(i).setConstant(g->r()[i] - 1.0 / g->r()[i]);
        const Field lu = apply_L(u);
        double sup = 0;
        for (int i = 1; i + 1 < u.nr(); ++i) {
            const double r = g->r()[i];
            const double closed = -1.0 / (r * r * r) + (1.0 / r) * (1.0 - 2.0);
            for (int j = 1; j + 1 < u.ntheta(); ++j)
                sup = std::max(sup, std::abs(lu.v(i, j) - closed));
        }
        return sup;
    };
    const double e1 = bracket_err(129), e2 = bracket_err(257), e3 = bracket_err(513);
    const double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
    ok &= std::abs(o1 - 2.0) <= 0.3 && std::abs(o2 - 2.0) <= 0.3;
    report(4, ok,
           fmt("exact annihilations: plane residual %.2e <= max(1e-12, roundoff floor %.2e); "
               "bracket closed-form orders %.2f, %.2f (2 +- 0.3)",
               worst_plane, worst_floor, o1, o2),
           t.seconds());
}

// ---------------------------------------------------------------- 5
void criterion_linear_solver() {
    Timer t;
    auto g257 = SectorGrid::create(1.0, 16.0, 257, 65, 5, RadialSpacing::LogGraded);
    auto g513 = SectorGrid::create(1.0, 16.0, 513, 65, 5, RadialSpacing::LogGraded);
    const ArrayXd f257 = solve_linear_mode(5, *g257, 1.0);
    const ArrayXd f513 = solve_linear_mode(5, *g513, 1.0);
    const ArrayXd oracle = shoot_linear_mode(5, *g257, 1.0);
    const double d_res = std::abs(f257[64] - f513[128]);
    const double d_oracle = std::abs(f257[64] - oracle[64]);
    bool ok = d_res <= 1e-6 && d_oracle <= 1e-6;

    BoundaryData f(5, {{1, 1e-3}});
    const LinearSolution sol = solve_linear(f, g257);
    ok &= sol.growth_ratio <= 1.0;
    double wmax = -1e30;
    for (int i = 0; i < g257->nr(); ++i)
        for (int j = 0; j < g257->ntheta(); ++j)
            wmax = std::max(wmax, sol.u1.v(i, j) -
                                      3.0 * sol.K0 * g257->r()[i] * std::cos(g257->theta()[j]));
    ok &= wmax <= 0.0;
    report(5, ok && t.seconds() < 5.0,
           fmt("linear solver: |f257-f513|(r=2)=%.2e, |f257-shoot|=%.2e (tol 1e-6); growth "
               "ratio %.3f <= 1; max(u1 - 3 K0 r cos) = %.2e <= 0",
               d_res, d_oracle, sol.growth_ratio, wmax),
           t.seconds());
}

// ---------------------------------------------------------------- 6
void criterion_barrier_certificate() {
    Timer t;
    double viol[3];
    double tol257 = 0, maxEp257 = 0, minEm257 = 0;
    int idx = 0;
    for (int nr : {129, 257, 513}) {
        SolverConfig cfg = canonical_config();
        cfg.nr = nr;
        cfg.ntheta = (nr - 1) / 4 + 1;
        auto grid = make_grid(cfg);
        const ResolvedBoundary rb = resolve_boundary(cfg, grid);
        const LinearSolution sol = solve_linear(rb.f, grid);
        const BarrierSet bs = make_barriers(sol, cfg.R0_effective());
        const BarrierResiduals res = barrier_residual_check(bs);
        viol[idx] = std::max({0.0, res.max_E_plus, -res.min_E_minus});
        if (nr == 257) {
            tol257 = res.tol;
            maxEp257 = res.max_E_plus;
            minEm257 = res.min_E_minus;
        }
        ++idx;
    }
    bool ok = maxEp257 <= tol257 && minEm257 >= -tol257;
    std::string note;
    if (viol[0] == 0.0 && viol[1] == 0.0 && viol[2] == 0.0) {
        note = "no sign violations at any resolution (order check vacuous)";
    } else if (viol[1] > 0.0 && viol[2] > 0.0) {
        const double order = std::log2(viol[1] / viol[2]);
        ok &= std::abs(order - 2.0) <= 0.5;
        note = fmt("violation order %.2f (2 +- 0.5)", order);
    } else {
        note = "violations vanish under refinement";
    }
    report(6, ok && t.seconds() < 30.0,
           fmt("barrier certificate: max E(u+) = %.3e <= %.3e, min E(u-) = %.3e >= -%.3e; %s",
               maxEp257, tol257, minEm257, tol257, note.c_str()),
           t.seconds());
}

// ---------------------------------------------------------------- 7 and 8 share the canonical run
struct CanonicalRun {
    SolverConfig cfg;
    RunArtifacts art;
};

std::optional<CanonicalRun> g_canonical;

const CanonicalRun& canonical_run() {
    if (!g_canonical) {
        CanonicalRun c{canonical_config(), {}};
        c.art = run_pipeline(c.cfg, /*run_checks=*/false);
        g_canonical = std::move(c);
    }
    return *g_canonical;
}

void criterion_flow_monotonicity() {
    Timer t;
    const auto& run = canonical_run().art.flow;

    // the canonical run may be steady well before tau = 0.1; check every
    // recorded step from the monotonicity window onward, falling back to the
    // whole run when it ends earlier
    const double tau_lo = run.history.back().tau > 0.1 ? 0.1 : 0.0;
    long violations = 0;
    double worst = 0;
    for (size_t n = 0; n + 1 < run.history.size(); ++n) {
        const auto& a = run.history[n];
        const auto& b = run.history[n + 1];
        if (a.tau < tau_lo) continue;
        const double dtau = b.tau - a.tau;
        // noise floor: J sums ~1e4 double-rounded terms, so consecutive
        // values agree only to a few tens of ulps of J
        const double slack = 2.0 * std::abs(a.dissipation) * dtau * dtau +
                             32.0 * std::numeric_limits<double>::epsilon() * double(a.J);
        const double jump = double(b.J - a.J);
        if (jump > slack) {
            ++violations;
            worst = std::max(worst, jump);
        }
    }
    bool ok = violations == 0;

    // first-order consistency of dJ/dtau with the dissipation quadrature
    const auto& cr = canonical_run();
    FlowSolver probe(cr.art.grid, cr.art.boundary.f, SolverOptions{}, cr.art.barriers);
    Field u0 = make_initial(cr.art.linear, *cr.art.barriers, InitialMode::Linear);
    FlowState st0 = probe.make_state(u0);
    const double dt_base = 0.95 * probe.cfl_dt(st0);

    auto gap_sup = [&](double dt) {
        SolverOptions opt;
        opt.fixed_dtau = dt;
        opt.tol_steady = 0.0;
        opt.tau_max = 0.5;
        FlowSolver solver(cr.art.grid, cr.art.boundary.f, opt, cr.art.barriers);
        Field u = make_initial(cr.art.linear, *cr.art.barriers, InitialMode::Linear);
        const RunResult rr = solver.run_to_steady(std::move(u));
        double sup = 0;
        for (size_t n = 0; n + 1 < rr.history.size(); ++n) {
            const auto& a = rr.history[n];
            const auto& b = rr.history[n + 1];
            if (a.tau < 0.1) continue;
            sup = std::max(sup, std::abs(double(b.J - a.J) / dt - a.dissipation));
        }
        return sup;
    };
    const double q1 = gap_sup(dt_base);
    const double q2 = gap_sup(0.5 * dt_base);
    const double order = std::log2(q1 / q2);
    const bool order_ok = std::abs(order - 1.0) <= 0.3;
    ok &= order_ok;

    report(7, ok,
           fmt("flow monotonicity: %ld increases beyond slack from tau=%.2f on (worst %.2e); "
               "|dJ/dtau - dissipation| order in dtau %.2f (1 +- 0.3; gaps %.3e -> %.3e)%s",
               violations, tau_lo, worst, order, q1, q2,
               order_ok ? ""
                        : " -- gap dominated by the dtau-independent spatial mismatch between "
                          "the J quadrature and the E stencils, not by the Euler term"),
           t.seconds());
}

void criterion_steady_state() {
    Timer t;
    const auto& cr = canonical_run();
    const auto& run = cr.art.flow;
    bool ok = run.converged && run.final_residual <= 1e-8;
    ok &= run.history.empty() ? false : run.history.back().tau <= 30.0;

    const double h = cr.art.grid->mesh_parameter();
    double worst_viol = 0;
    for (const auto& rec : run.history) worst_viol = std::max(worst_viol, rec.barrier_violation);
    ok &= worst_viol <= 10.0 * h * h;

    const ReportEntry grad = check_max_gradient_boundary(run.steady);
    ok &= grad.pass;

    report(8, ok && t.seconds() < 300.0,
           fmt("steady state: residual %.2e <= 1e-8 at tau %.3f (steps %ld); sandwich violation "
               "%.2e <= %.2e; grad argmax radius %.4f within one cell of R",
               run.final_residual, run.history.back().tau, run.steps, worst_viol, 10.0 * h * h,
               grad.value),
           t.seconds());
}

// ---------------------------------------------------------------- 9
void criterion_remark2_cubic_gap() {
    Timer t;
    // The gap G(eps) is cubic, so the runs must be relaxed far below the
    // default steady tolerance or the stopping error masks the signal; the
    // tolerance scales with the amplitude to keep the relative stopping
    // error uniform across the sweep.
    double G[3];
    int idx = 0;
    for (double frac : {0.5, 0.25, 0.125}) {
        SolverConfig cfg = canonical_config();
        cfg.eps_fraction = frac;
        cfg.tol_steady = 8e-13 * (frac / 0.125);
        cfg.tau_max = 6.0;
        const RunArtifacts art = run_pipeline(cfg, false);
        G[idx++] = radial_gap_value(art.flow.steady, art.linear);
    }
    const double r1 = G[0] / G[1], r2 = G[1] / G[2];
    const bool ok = r1 >= 6.0 && r1 <= 10.0 && r2 >= 6.0 && r2 <= 10.0;
    report(9, ok,
           fmt("boundary radial-derivative gap is cubic in eps: G = %.3e, %.3e, %.3e; "
               "ratios %.2f, %.2f in [6, 10]",
               G[0], G[1], G[2], r1, r2),
           t.seconds());
}

// ---------------------------------------------------------------- 10
void criterion_remark3_cone_decay() {
    Timer t;
    const auto& cr = canonical_run();
    const double fine = cone_decay_value(cr.art.flow.steady);

    SolverConfig coarse_cfg = canonical_config();
    coarse_cfg.nr = 129;
    coarse_cfg.ntheta = 33;
    const RunArtifacts coarse = run_pipeline(coarse_cfg, false);
    const double crs = cone_decay_value(coarse.flow.steady);
    const double ratio = crs > 0 ? fine / crs : 1.0;
    const bool ok = std::isfinite(fine) && ratio >= 0.5 && ratio <= 2.0;
    report(10, ok,
           fmt("cone decay: sup |H| r = %.4e on the fine grid, %.4e coarse; refinement ratio "
               "%.2f in [0.5, 2]",
               fine, crs, ratio),
           t.seconds());
}

// ---------------------------------------------------------------- 11
void criterion_uniqueness() {
    Timer t;
    const auto& cr = canonical_run();
    SolverOptions opt;
    opt.tol_steady = cr.cfg.tol_steady;
    opt.tau_max = cr.cfg.tau_max;
    FlowSolver solver(cr.art.grid, cr.art.boundary.f, opt, cr.art.barriers);
    const ReportEntry uniq = uniqueness_experiment(solver, cr.art.linear, *cr.art.barriers);
    bool ok = uniq.value <= 1e-6;

    const double eta = uniqueness_eta_surrogate(cr.art.flow.steady);
    bool barrier_ok = false;
    if (eta <= 0.02) {
        const ReportEntry ub = uniqueness_barrier(1.12, eta, cr.cfg.R, 10000);
        barrier_ok = ub.pass;
    }
    ok &= barrier_ok;
    report(11, ok,
           fmt("uniqueness: steady states from two initial conditions differ by %.2e <= 1e-6; "
               "psi-barrier signs hold at alpha=1.12 with measured eta %.4f <= 0.02",
               uniq.value, eta),
           t.seconds());
}

// ---------------------------------------------------------------- 12
void criterion_truncation() {
    Timer t;
    const auto& cr = canonical_run();

    SolverConfig wide_cfg = canonical_config();
    wide_cfg.R_max = 32.0;
    wide_cfg.nr = 321;  // same log spacing; nodes of the narrow grid are shared
    const RunArtifacts wide = run_pipeline(wide_cfg, false);

    const auto& rn = cr.art.grid->r();
    const auto& rw = wide.grid->r();
    double drift = 0;
    bool aligned = true;
    for (int i = 0; i < cr.art.grid->nr(); ++i) {
        if (rn[i] > 8.0) break;
        aligned &= std::abs(rn[i] - rw[i]) < 1e-9 * rn[i];
        for (int j = 0; j < cr.art.grid->ntheta(); ++j)
            drift = std::max(drift,
                             std::abs(cr.art.flow.steady.v(i, j) - wide.flow.steady.v(i, j)));
    }
    const bool ok = aligned && drift <= 1e-6;
    report(12, ok,
           fmt("truncation robustness: doubling R_max moves the steady field by %.2e <= 1e-6 "
               "on r <= 8 (grids aligned: %s)",
               drift, aligned ? "yes" : "no"),
           t.seconds());
}

}  // namespace

int main() {
    Timer total;
    std::printf("acceptance suite: canonical problem N=5, R=1, log grid 257x65, R_max=16\n");
    criterion_spectral_exactness();
    criterion_eigen_convergence();
    criterion_poincare();
    criterion_exact_annihilation();
    criterion_linear_solver();
    criterion_barrier_certificate();
    criterion_flow_monotonicity();
    criterion_steady_state();
    criterion_remark2_cubic_gap();
    criterion_remark3_cone_decay();
    criterion_uniqueness();
    criterion_truncation();
    std::printf("%d of 12 criteria passed (total %.1fs)\n", 12 - g_failures, total.seconds());
    return g_failures == 0 ? 0 : 1;
}
