#include "shrinkerlab/flow.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace shrinkerlab {

namespace {
constexpr double kEuler = 2.71828182845904523536;
}

Field apply_E(const Field& u, const RadialStencilTable& tbl) {
    PolarDerivs d;
    compute_polar_derivs(u, tbl, d);
    Field out(u.grid, u.symmetric);
    const auto& r = u.grid->r();
    using RowXd = Eigen::Array<double, 1, Eigen::Dynamic>;
    RowXd ut_r, hrt, htt, q, du2, lap;
    for (int i = 0; i < u.nr(); ++i) {
        if (r[i] <= 0.0) {
            out.v.row(i) = u.v.row(i);
            continue;
        }
        const double inv_r = 1.0 / r[i];
        ut_r = d.ut.row(i) * inv_r;
        hrt = d.urt.row(i) * inv_r - d.ut.row(i) * (inv_r * inv_r);
        htt = d.ur.row(i) * inv_r + d.utt.row(i) * (inv_r * inv_r);
        lap = d.urr.row(i) + htt;
        du2 = d.ur.row(i).square() + ut_r.square();
        q = d.ur.row(i).square() * d.urr.row(i) + 2.0 * d.ur.row(i) * ut_r * hrt +
            ut_r.square() * htt;
        out.v.row(i) = lap - q / (1.0 + du2) - r[i] * d.ur.row(i) + u.v.row(i);
    }
    return out;
}

Field apply_E(const Field& u) {
    RadialStencilTable tbl(*u.grid);
    return apply_E(u, tbl);
}

long double compute_J(const Field& u, const WeightedNorms& w) {
    const PolarDerivs d = compute_polar_derivs(u);
    const ArrayXXd du2 = grad_norm_sq(u, d);
    const auto& wr = w.radial_weights();
    const auto& wt = w.angular_weights();
    KahanSum s;
    for (int j = 0; j < u.ntheta(); ++j)
        for (int i = 0; i < u.nr(); ++i) {
            const long double term = (long double)(wr[i] * wt[j]) *
                                     sqrtl(1.0L + (long double)du2(i, j)) *
                                     expl(-0.5L * (long double)(u.v(i, j) * u.v(i, j)));
            s.add(term);
        }
    return 2.0L * u.grid->N() * s.value();
}

double dissipation(const Field& u, const Field& du, const WeightedNorms& w) {
    require_same_grid(u, du);
    const PolarDerivs d = compute_polar_derivs(u);
    const ArrayXXd du2 = grad_norm_sq(u, d);
    const auto& wr = w.radial_weights();
    const auto& wt = w.angular_weights();
    long double s = 0;
    for (int j = 1; j + 1 < u.ntheta(); ++j)
        for (int i = 1; i + 1 < u.nr(); ++i)
            s += (long double)(wr[i] * wt[j] * du.v(i, j) * du.v(i, j) /
                               std::sqrt(1.0 + du2(i, j)) *
                               std::exp(-0.5 * u.v(i, j) * u.v(i, j)));
    return double(-2.0L * u.grid->N() * s);
}

Field make_initial(const LinearSolution& sol, const BarrierSet& bs, InitialMode mode) {
    Field u0(sol.u1.grid, /*symmetric=*/true);
    if (mode == InitialMode::Linear) {
        u0.v = sol.u1.v;
    } else {
        u0.v = 0.5 * (bs.u_plus.v + bs.u_minus.v);
    }
    u0.zero_angular_edges();
    return u0;
}

double initial_compatibility_sup(const Field& u0) {
    // measured on the first interior ring: the one-sided stencil on the
    // boundary row itself injects an O(h^2 eps) truncation term that buries
    // the cubic corner defect
    return apply_E(u0).v.row(1).abs().maxCoeff();
}

struct FlowSolver::Pass {
    PolarDerivs d;
    ArrayXXd E, du2;
    ArrayXd ut_r, hrt, htt, lap, q, root, gauss;  // per-column scratch
    long double J = 0;
    double diss = 0;
    double residual = 0;
    double grad_max = 0;
    double grad_argmax_radius = 0;
    double cone_sup = 0;
    double barrier_violation = 0;
    double compat_sup = 0;
    double cfl = 0;
};

FlowSolver::FlowSolver(GridPtr grid, BoundaryData f, SolverOptions opt,
                       std::optional<BarrierSet> barriers)
    : grid_(std::move(grid)), f_(std::move(f)), opt_(opt), barriers_(std::move(barriers)),
      table_(*grid_), weights_(grid_) {
    f_nodes_ = f_.sample(*grid_);
    const int nr = grid_->nr();
    const auto& r = grid_->r();
    inv_r_ = 1.0 / r;
    gap_sq_.resize(nr);
    adv_limit_.resize(nr);
    const double dth = grid_->dtheta();
    for (int i = 0; i < nr; ++i) {
        const double gap = grid_->radial_gap(i);
        gap_sq_[i] = std::min(gap * gap, r[i] * dth * r[i] * dth);
        adv_limit_[i] = gap / r[i];
    }
    outer_ratio_ = r[nr - 1] / r[nr - 2];
    cone_row_begin_ = nr - 2;
    const double cone_r = kEuler * (grid_->R() + 1.0);
    for (int i = 0; i < nr; ++i)
        if (r[i] >= cone_r) {
            cone_row_begin_ = i;
            break;
        }
}

void FlowSolver::evaluate(const Field& u, Pass& p) const {
    const int nr = grid_->nr(), nt = grid_->ntheta();
    const auto& r = grid_->r();
    compute_polar_derivs(u, table_, p.d);
    p.E.resize(nr, nt);
    p.du2.resize(nr, nt);
    p.ut_r.resize(nr);
    p.hrt.resize(nr);
    p.htt.resize(nr);
    p.lap.resize(nr);
    p.q.resize(nr);
    p.root.resize(nr);
    p.gauss.resize(nr);

    // column-contiguous sweeps; coefficient vectors run over the radial index
    KahanSum js;
    const auto& wr = weights_.radial_weights();
    const auto& wt = weights_.angular_weights();
    long double diss = 0;
    double residual = 0, grad_max = -1, argmax_r = grid_->R(), cone_sup = 0;
    double cfl_min = std::numeric_limits<double>::infinity();
    const double r_half = 0.5 * grid_->R_max();
    for (int j = 0; j < nt; ++j) {
        auto ur = p.d.ur.col(j);
        auto ut = p.d.ut.col(j);
        p.ut_r = ut * inv_r_;
        p.hrt = p.d.urt.col(j) * inv_r_ - ut * inv_r_.square();
        p.htt = ur * inv_r_ + p.d.utt.col(j) * inv_r_.square();
        p.lap = p.d.urr.col(j) + p.htt;
        p.du2.col(j) = ur.square() + p.ut_r.square();
        p.q = ur.square() * p.d.urr.col(j) + 2.0 * ur * p.ut_r * p.hrt + p.ut_r.square() * p.htt;
        p.E.col(j) = p.lap - p.q / (1.0 + p.du2.col(j)) - r * ur + u.v.col(j);

        p.root = (1.0 + p.du2.col(j)).sqrt();
        p.gauss = (-0.5 * u.v.col(j).square()).exp();

        const bool interior_col = (j > 0 && j + 1 < nt);
        const double wtj = wt[j];
        for (int i = 0; i < nr; ++i) {
            const double du2 = p.du2(i, j);
            js.add((long double)(wr[i] * wtj) * (long double)(p.root[i] * p.gauss[i]));
            if (du2 > grad_max) {
                grad_max = du2;
                argmax_r = r[i];
            }
            if (interior_col && i > 0 && i + 1 < nr) {
                const double e = p.E(i, j);
                diss += (long double)(wr[i] * wtj * e * e / p.root[i] * p.gauss[i]);
                residual = std::max(residual, std::abs(e));
                if (i >= cone_row_begin_ && r[i] <= r_half) {
                    const double mean_curv = (e + r[i] * p.d.ur(i, j) - u.v(i, j)) / p.root[i];
                    cone_sup = std::max(cone_sup, std::abs(mean_curv) * r[i]);
                }
            }
            const double diffusion = gap_sq_[i] / (4.0 * (1.0 + du2));
            cfl_min = std::min(cfl_min, std::min(diffusion, adv_limit_[i]));
        }
    }
    p.J = 2.0L * grid_->N() * js.value();
    p.diss = double(-2.0L * grid_->N() * diss);
    p.residual = residual;
    p.grad_max = std::sqrt(std::max(0.0, grad_max));
    p.grad_argmax_radius = argmax_r;
    p.cone_sup = cone_sup;
    p.cfl = opt_.c_cfl * cfl_min;
    p.compat_sup = p.E.row(1).abs().maxCoeff();  // first interior ring, as in
                                                 // initial_compatibility_sup

    p.barrier_violation = 0;
    if (barriers_) {
        const double over = (u.v - barriers_->u_plus.v).maxCoeff();
        const double under = (barriers_->u_minus.v - u.v).maxCoeff();
        p.barrier_violation = std::max(0.0, std::max(over, under));
    }
}

void FlowSolver::impose_boundary(Field& u) const {
    const int nr = grid_->nr();
    u.v.row(0) = f_nodes_.transpose();
    u.v.row(nr - 1) = u.v.row(nr - 2) * outer_ratio_;
    u.zero_angular_edges();
}

FlowState FlowSolver::make_state(Field u0) const {
    if (!u0.symmetric) throw std::invalid_argument("flow state requires a symmetric field");
    FlowState st;
    impose_boundary(u0);
    st.u = std::move(u0);
    Pass p;
    evaluate(st.u, p);
    st.dtau = opt_.fixed_dtau.value_or(p.cfl);
    return st;
}

double FlowSolver::cfl_dt(const FlowState& state) const {
    Pass p;
    evaluate(state.u, p);
    return p.cfl;
}

FlowState FlowSolver::step(const FlowState& state) const {
    Pass p;
    evaluate(state.u, p);
    if (state.dtau > p.cfl * (1.0 + 1e-12))
        throw std::invalid_argument("time step exceeds the CFL limit");
    FlowState next;
    next.u = state.u;
    next.u.v.block(1, 1, grid_->nr() - 2, grid_->ntheta() - 2) +=
        state.dtau * p.E.block(1, 1, grid_->nr() - 2, grid_->ntheta() - 2);
    impose_boundary(next.u);
    if (!next.u.finite()) {
        std::ostringstream msg;
        msg << "non-finite update at tau=" << state.tau << " step=" << state.step_count
            << " residual=" << p.residual;
        throw std::runtime_error(msg.str());
    }
    next.tau = state.tau + state.dtau;
    next.step_count = state.step_count + 1;
    next.dtau = state.dtau;
    return next;
}

DiagnosticsRecord FlowSolver::diagnostics(const FlowState& state) const {
    Pass p;
    evaluate(state.u, p);
    DiagnosticsRecord rec;
    rec.tau = state.tau;
    rec.J = p.J;
    rec.dissipation = p.diss;
    rec.residual_inf = p.residual;
    rec.grad_max = p.grad_max;
    rec.grad_argmax_radius = p.grad_argmax_radius;
    rec.cone_sup = p.cone_sup;
    rec.barrier_violation = p.barrier_violation;
    rec.symmetry_dev = 0.0;  // enforced by the sector representation
    return rec;
}

RunResult FlowSolver::run_to_steady(Field u0, long snapshot_every,
                                    const SnapshotFn& on_snapshot) const {
    RunResult out;
    FlowState st;
    st.u = std::move(u0);
    if (!st.u.symmetric) throw std::invalid_argument("flow requires a symmetric initial field");
    impose_boundary(st.u);

    Pass p;
    out.history.reserve(1 << 16);
    long double prev_J = 0;
    bool have_prev = false;
    const int nr = grid_->nr(), nt = grid_->ntheta();

    for (;;) {
        evaluate(st.u, p);
        if (st.step_count == 0) out.initial_compat_sup = p.compat_sup;
        const double dt = opt_.fixed_dtau.value_or(p.cfl);

        DiagnosticsRecord rec;
        rec.tau = st.tau;
        rec.J = p.J;
        rec.dJdt_est = have_prev ? double((p.J - prev_J) / (long double)st.dtau) : 0.0;
        rec.dissipation = p.diss;
        rec.residual_inf = p.residual;
        rec.grad_max = p.grad_max;
        rec.grad_argmax_radius = p.grad_argmax_radius;
        rec.cone_sup = p.cone_sup;
        rec.barrier_violation = p.barrier_violation;
        rec.symmetry_dev = 0.0;
        out.history.push_back(rec);
        prev_J = p.J;
        have_prev = true;

        if (p.residual <= opt_.tol_steady) {
            out.converged = true;
            break;
        }
        if (st.tau >= opt_.tau_max) break;

        st.u.v.block(1, 1, nr - 2, nt - 2) += dt * p.E.block(1, 1, nr - 2, nt - 2);
        impose_boundary(st.u);
        st.tau += dt;
        st.dtau = dt;
        ++st.step_count;

        if ((st.step_count & 0xFFF) == 0 && !st.u.finite()) {
            std::ostringstream msg;
            msg << "non-finite state at tau=" << st.tau << " step=" << st.step_count;
            throw std::runtime_error(msg.str());
        }
        if (snapshot_every > 0 && on_snapshot && st.step_count % snapshot_every == 0)
            on_snapshot(st);
    }

    if (!st.u.finite()) throw std::runtime_error("non-finite steady state");
    out.final_residual = p.residual;
    out.steps = st.step_count;
    out.steady = std::move(st.u);
    return out;
}

}  // namespace shrinkerlab
