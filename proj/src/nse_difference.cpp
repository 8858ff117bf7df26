#include "hydrostat/nse_difference.hpp"

#include <cmath>
#include <sstream>

namespace hydrostat {

std::vector<TimeSample> NseTrajectory::samples() const {
    std::vector<TimeSample> out;
    out.reserve(states.size());
    for (const auto& s : states)
        out.push_back(TimeSample{s.time, {&s.u1, &s.u2, &s.u3}});
    return out;
}

std::vector<TimeSample> DiffTrajectory::samples() const {
    std::vector<TimeSample> out;
    out.reserve(states.size());
    for (const auto& s : states)
        out.push_back(TimeSample{s.time, {&s.V1, &s.V2, &s.eW}});
    return out;
}

double div_eps_defect(const ScaledState& s) {
    return max_abs(div_eps({s.u1, s.u2, s.u3}, s.epsilon));
}

double div_eps_defect(const DifferenceState& s) {
    return max_abs(div_eps({s.V1, s.V2, s.eW}, s.epsilon));
}

namespace {

// -P_eps (u . grad) u~ with u~ = (u1, u2, u3), u = (u1, u2, u3/eps)
SpectralVec3 nse_tendency(const ScaledState& s, const ProjectionSpec& proj) {
    PhysicalField a1 = inverse(s.u1);
    PhysicalField a2 = inverse(s.u2);
    PhysicalField a3 = inverse(s.u3);
    const double inv_eps = 1.0 / s.epsilon;
    for (auto& v : a3.values) v *= inv_eps;
    SpectralVec3 adv{advect_phys(a1, a2, &a3, s.u1), advect_phys(a1, a2, &a3, s.u2),
                     advect_phys(a1, a2, &a3, s.u3)};
    for (auto& c : adv) c *= -1.0;
    return apply_projection_eps(adv, proj);
}

}  // namespace

NseTrajectory solve_scaled_nse(const SpectralVec2& v0, const SpectralField* w0,
                               double eps, double T, double dt,
                               const NseSolveOptions& opt) {
    if (!(eps > 0.0) || eps > 1.0)
        throw std::invalid_argument("solve_scaled_nse: eps must lie in (0,1]");
    if (!(dt > 0.0) || T < dt)
        throw std::invalid_argument("solve_scaled_nse: need 0 < dt <= T");
    const long n_steps = std::lround(T / dt);
    if (std::abs(n_steps * dt - T) > 1e-9 * T)
        throw std::invalid_argument("solve_scaled_nse: dt must divide T");
    if (opt.store_stride < 1 || n_steps % opt.store_stride != 0)
        throw std::invalid_argument("solve_scaled_nse: bad store stride");

    const Grid& g = v0[0].grid;
    const ProjectionSpec proj{eps, true};

    ScaledState s;
    s.u1 = dealias(v0[0]);
    s.u2 = dealias(v0[1]);
    if (w0) {
        s.u3 = eps * dealias(*w0);
    } else {
        s.u3 = eps * reconstruct_w({s.u1, s.u2});
    }
    s.epsilon = eps;
    s.time = 0.0;
    if (div_eps_defect(s) > 1e-10)
        throw SolverError("solve_scaled_nse: initial data is not divergence-free");

    NseTrajectory traj;
    traj.grid = g;
    traj.dt = dt * opt.store_stride;
    traj.epsilon = eps;

    auto store = [&](const ScaledState& st) {
        const double defect = div_eps_defect(st);
        if (defect > opt.invariant_tol || has_nan(st.u1) || has_nan(st.u3)) {
            std::ostringstream msg;
            msg << "solve_scaled_nse: invariant drift at t=" << st.time
                << " (div_eps " << defect << ", eps " << eps << ")";
            throw SolverError(msg.str());
        }
        traj.states.push_back(st);
    };
    store(s);

    const double half = 0.5 * dt;
    for (long n = 0; n < n_steps; ++n) {
        SpectralVec3 r0 = nse_tendency(s, proj);
        ScaledState mid = s;
        mid.u1 = apply_heat(s.u1, half) + half * apply_heat(r0[0], half);
        mid.u2 = apply_heat(s.u2, half) + half * apply_heat(r0[1], half);
        mid.u3 = apply_heat(s.u3, half) + half * apply_heat(r0[2], half);
        mid.time = s.time + half;

        SpectralVec3 rm = nse_tendency(mid, proj);
        ScaledState next = s;
        next.u1 = apply_heat(s.u1, dt) + dt * apply_heat(rm[0], half);
        next.u2 = apply_heat(s.u2, dt) + dt * apply_heat(rm[1], half);
        next.u3 = apply_heat(s.u3, dt) + dt * apply_heat(rm[2], half);
        next.time = s.time + dt;
        s = std::move(next);
        if ((n + 1) % opt.store_stride == 0) store(s);
    }
    return traj;
}

DiffTrajectory difference_direct(const NseTrajectory& nse, const PeTrajectory& pe) {
    if (nse.grid != pe.grid || nse.states.size() != pe.states.size() ||
        std::abs(nse.dt - pe.dt) > 1e-12)
        throw std::invalid_argument("difference_direct: trajectories do not match");
    DiffTrajectory out;
    out.grid = nse.grid;
    out.dt = nse.dt;
    out.epsilon = nse.epsilon;
    const double eps = nse.epsilon;
    for (std::size_t k = 0; k < nse.states.size(); ++k) {
        const ScaledState& a = nse.states[k];
        const HydroState& b = pe.states[k];
        if (std::abs(a.time - b.time) > 1e-12)
            throw std::invalid_argument("difference_direct: time grids differ");
        DifferenceState d;
        d.V1 = a.u1 - b.v1;
        d.V2 = a.u2 - b.v2;
        d.eW = a.u3 - eps * b.w;
        d.epsilon = eps;
        d.time = a.time;
        out.states.push_back(std::move(d));
    }
    if (max_abs(out.states.front().V1) > 1e-12 ||
        max_abs(out.states.front().eW) > 1e-12)
        throw std::invalid_argument(
            "difference_direct: trajectories start from different data");
    return out;
}

std::vector<SpectralField> compute_f_tilde_series(const PeTrajectory& pe) {
    std::vector<SpectralField> out;
    out.reserve(pe.states.size());
    for (const auto& s : pe.states)
        out.push_back(compute_F_tilde(s, FTildeForm::definition));
    return out;
}

PicardResult solve_difference_picard(const PeTrajectory& pe, double eps,
                                     const PicardOptions& opt) {
    return solve_difference_picard(pe, compute_f_tilde_series(pe), eps, opt);
}

PicardResult solve_difference_picard(const PeTrajectory& pe,
                                     const std::vector<SpectralField>& f_tilde,
                                     double eps, const PicardOptions& opt) {
    if (!(eps > 0.0) || eps > 1.0)
        throw std::invalid_argument("picard: eps must lie in (0,1]");
    if (pe.states.size() < 2)
        throw std::invalid_argument("picard: trajectory too short");
    if (f_tilde.size() != pe.states.size())
        throw std::invalid_argument("picard: forcing series length mismatch");
    const std::size_t m = pe.states.size();
    const std::size_t n_seg = static_cast<std::size_t>(std::max(opt.segments, 1));
    if ((m - 1) % n_seg != 0)
        throw std::invalid_argument("picard: segments must divide the stored steps");

    const Grid& g = pe.grid;
    const double ds = pe.dt;
    const ProjectionSpec proj{eps, true};

    // frozen advecting velocity of the hydrostatic flow, physical space
    std::vector<PhysicalField> up1, up2, up3;
    up1.reserve(m);
    up2.reserve(m);
    up3.reserve(m);
    for (const auto& s : pe.states) {
        up1.push_back(inverse(s.v1));
        up2.push_back(inverse(s.v2));
        up3.push_back(inverse(s.w));
    }

    // iterate stored as 3-component spectral per time
    std::vector<SpectralVec3> U(m, SpectralVec3{SpectralField(g), SpectralField(g),
                                                SpectralField(g)});
    PicardResult res;

    auto integrand = [&](std::size_t k, const SpectralVec3& Uk) {
        PhysicalField w1 = inverse(Uk[0]);
        PhysicalField w2 = inverse(Uk[1]);
        PhysicalField w3 = inverse(Uk[2]);
        const double inv_eps = 1.0 / eps;
        for (auto& v : w3.values) v *= inv_eps;

        const HydroState& s = pe.states[k];
        SpectralVec3 b{SpectralField(g), SpectralField(g), SpectralField(g)};
        // targets of the difference advection: U + u~ (or u~ when linearized)
        SpectralField t1 = opt.drop_self_term ? s.v1 : Uk[0] + s.v1;
        SpectralField t2 = opt.drop_self_term ? s.v2 : Uk[1] + s.v2;
        SpectralField t3 = opt.drop_self_term ? eps * s.w : Uk[2] + eps * s.w;
        b[0] = advect_phys(w1, w2, &w3, t1) + advect_phys(up1[k], up2[k], &up3[k], Uk[0]);
        b[1] = advect_phys(w1, w2, &w3, t2) + advect_phys(up1[k], up2[k], &up3[k], Uk[1]);
        b[2] = advect_phys(w1, w2, &w3, t3) + advect_phys(up1[k], up2[k], &up3[k], Uk[2]);
        for (auto& c : b) c *= -1.0;
        b[2] += eps * f_tilde[k];
        return apply_projection_eps(b, proj);
    };

    // Segments are solved in order, each to convergence, the next restarting
    // from the previous segment's final value via the homogeneous term.
    const std::size_t seg_len = (m - 1) / n_seg;
    res.converged = true;
    for (std::size_t seg = 0; seg < n_seg && res.converged; ++seg) {
        const std::size_t k0 = seg * seg_len;
        const SpectralVec3 init = U[k0];  // zero for the first segment
        res.converged = false;
        int grow_streak = 0;
        double prev_update = 0.0;
        for (int it = 0; it < opt.max_iter; ++it) {
            std::vector<SpectralVec3> next(seg_len, SpectralVec3{
                SpectralField(g), SpectralField(g), SpectralField(g)});
            DuhamelAccumulator acc(g, ds, 3);
            for (std::size_t k = k0; k <= k0 + seg_len; ++k) {
                SpectralVec3 b = integrand(k, U[k]);
                const auto& duh =
                    acc.push({std::move(b[0]), std::move(b[1]), std::move(b[2])});
                if (k == k0) continue;  // the segment start keeps its value
                const double tau = (k - k0) * ds;
                for (int c = 0; c < 3; ++c)
                    next[k - k0 - 1][c] = apply_heat(init[c], tau) + duh[c];
            }
            double update = 0.0;
            for (std::size_t k = k0 + 1; k <= k0 + seg_len; ++k)
                for (int c = 0; c < 3; ++c)
                    update = std::max(update,
                                      max_abs(next[k - k0 - 1][c] - U[k][c]));
            for (std::size_t k = k0 + 1; k <= k0 + seg_len; ++k)
                U[k] = std::move(next[k - k0 - 1]);
            res.update_norms.push_back(update);
            ++res.iterations;
            if (update < opt.tol) {
                res.converged = true;
                break;
            }
            if (it > 0 && update > prev_update) {
                if (++grow_streak >= 3) {
                    res.growth_factor = update / prev_update;
                    break;
                }
            } else {
                grow_streak = 0;
            }
            prev_update = update;
        }
    }

    DiffTrajectory traj;
    traj.grid = g;
    traj.dt = ds;
    traj.epsilon = eps;
    for (std::size_t k = 0; k < m; ++k) {
        DifferenceState d;
        d.V1 = U[k][0];
        d.V2 = U[k][1];
        d.eW = U[k][2];
        d.epsilon = eps;
        d.time = pe.states[k].time;
        traj.states.push_back(std::move(d));
    }
    res.traj = std::move(traj);
    return res;
}

NormReport fujita_kato_report(const DiffTrajectory& diff, double q) {
    if (diff.states.empty())
        throw std::invalid_argument("fujita_kato_report: empty trajectory");
    NormReport rep;
    const double eps = diff.epsilon;
    for (const auto& s : diff.states) {
        const double tw = std::sqrt(std::max(s.time, 0.0));
        const double nv = std::max(norm_linf_h_lq(s.V1, q), norm_linf_h_lq(s.V2, q));
        const double new_ = norm_linf_h_lq(s.eW, q);
        double gv = 0.0, gw = 0.0;
        for (int a = 0; a < 3; ++a) {
            gv = std::max(gv, norm_linf_h_lq(derivative(s.V1, a), q));
            gv = std::max(gv, norm_linf_h_lq(derivative(s.V2, a), q));
            gw = std::max(gw, norm_linf_h_lq(derivative(s.eW, a), q));
        }
        rep.sup_V = std::max(rep.sup_V, nv);
        rep.sup_tgradV = std::max(rep.sup_tgradV, tw * gv);
        rep.sup_eW = std::max(rep.sup_eW, new_);
        rep.sup_tgradeW = std::max(rep.sup_tgradeW, tw * gw);
        rep.times.push_back(s.time);
        rep.v_norms.push_back(nv);
        rep.ew_norms.push_back(new_);
    }
    rep.total = rep.sup_V + rep.sup_tgradV + rep.sup_eW + rep.sup_tgradeW;
    rep.sup_W = rep.sup_eW / eps;
    rep.sup_tgradW = rep.sup_tgradeW / eps;
    return rep;
}

}  // namespace hydrostat
